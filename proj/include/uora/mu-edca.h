/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_MU_EDCA_H
#define UORA_MU_EDCA_H

#include "uora/time.h"

#include <cstdint>
#include <optional>

namespace uora
{

/**
 * MU EDCA parameters held by a station after taking part in UL OFDMA.
 *
 * The parameters apply until the MU EDCA timer expires; each acknowledged
 * OFDMA data transmission restarts the timer. AIFSN 0 while active means the
 * station does not contend with EDCA at all. Only the AIFSN affects
 * behaviour here; the alternate CW values are carried but unused.
 */
class MuEdcaState
{
  public:
    /// Timer duration meaning "valid for the whole simulation".
    static constexpr Time WHOLE_SIMULATION = Time::max();

    void ApplyParameters(uint8_t aifsn, Time timerDuration, Time now);
    void SetAlternateCw(uint16_t cwMin, uint16_t cwMax);
    /// Restarts the timer after an acknowledged OFDMA data transmission.
    void OnOfdmaSuccess(Time now);

    bool IsActive(Time now) const;
    /// False iff the MU parameters are active and carry AIFSN 0.
    bool EdcaEnabled(Time now) const;

    /// Deadline of the current validity period; nullopt if never applied or infinite.
    std::optional<Time> GetDeadline() const;

    uint8_t GetAifsn() const
    {
        return m_aifsn;
    }

    Time GetTimerDuration() const
    {
        return m_timerDuration;
    }

  private:
    uint8_t m_aifsn{0};
    uint16_t m_cwMin{0};
    uint16_t m_cwMax{0};
    Time m_timerDuration{0};
    bool m_applied{false};
    bool m_infinite{false};
    Time m_deadline{0};
};

} // namespace uora

#endif /* UORA_MU_EDCA_H */
