/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_UORA_BACKOFF_H
#define UORA_UORA_BACKOFF_H

#include "uora/random.h"

#include <cstdint>
#include <span>

namespace uora
{

enum class TriggerDecision
{
    TRANSMIT,
    DEFER,
};

/**
 * Per-station OFDMA contention state: the contention window (OCW) and the
 * OFDMA back-off counter (OBO).
 *
 * OCW always has the form 2^k - 1 with EOCWmin <= k <= EOCWmax. A received
 * trigger with n RA RUs makes the station eligible when OBO <= n; otherwise
 * OBO drops by n. Success resets OCW to its minimum; failure grows it to
 * 2 * OCW + 1, capped at the maximum. Both redraw OBO uniformly on [0, OCW].
 */
class UoraBackoff
{
  public:
    static constexpr uint8_t MAX_EOCW = 7;

    /// Sets OCW to its minimum and draws the initial OBO. Throws ConfigError on a bad range.
    UoraBackoff(uint8_t eocwMin, uint8_t eocwMax, RandomStream& rng);

    /// Applies a trigger carrying nRa RA RUs. The caller must not hold an SA RU in it.
    TriggerDecision ProcessTrigger(uint32_t nRa);

    /// Uniform choice among the advertised RA RUs. Throws std::logic_error on an empty list.
    static uint8_t SelectRaRu(std::span<const uint8_t> raRuIndices, RandomStream& rng);

    void OnSuccess(RandomStream& rng);
    void OnFailure(RandomStream& rng);

    /// Overrides the back-off counter, for scripted scenarios. Requires obo <= OCW.
    void ForceObo(uint32_t obo);

    uint32_t GetOcw() const
    {
        return m_ocw;
    }

    uint32_t GetObo() const
    {
        return m_obo;
    }

    uint32_t GetOcwMin() const
    {
        return (1u << m_eocwMin) - 1;
    }

    uint32_t GetOcwMax() const
    {
        return (1u << m_eocwMax) - 1;
    }

  private:
    void DrawObo(RandomStream& rng);

    uint8_t m_eocwMin;
    uint8_t m_eocwMax;
    uint32_t m_ocw;
    uint32_t m_obo{0};
};

} // namespace uora

#endif /* UORA_UORA_BACKOFF_H */
