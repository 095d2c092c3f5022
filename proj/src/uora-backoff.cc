/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/uora-backoff.h"

#include "uora/errors.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace uora
{

UoraBackoff::UoraBackoff(uint8_t eocwMin, uint8_t eocwMax, RandomStream& rng)
    : m_eocwMin(eocwMin),
      m_eocwMax(eocwMax)
{
    if (eocwMax > MAX_EOCW || eocwMin > eocwMax)
    {
        throw ConfigError("invalid EOCW range [" + std::to_string(eocwMin) + ", " +
                          std::to_string(eocwMax) + "]");
    }
    m_ocw = GetOcwMin();
    DrawObo(rng);
}

TriggerDecision
UoraBackoff::ProcessTrigger(uint32_t nRa)
{
    if (nRa == 0)
    {
        return TriggerDecision::DEFER;
    }
    if (m_obo <= nRa)
    {
        m_obo = 0;
        return TriggerDecision::TRANSMIT;
    }
    m_obo -= nRa;
    return TriggerDecision::DEFER;
}

uint8_t
UoraBackoff::SelectRaRu(std::span<const uint8_t> raRuIndices, RandomStream& rng)
{
    if (raRuIndices.empty())
    {
        throw std::logic_error("SelectRaRu: no RA RU advertised");
    }
    return raRuIndices[rng.UniformInt(0, raRuIndices.size() - 1)];
}

void
UoraBackoff::OnSuccess(RandomStream& rng)
{
    m_ocw = GetOcwMin();
    DrawObo(rng);
}

void
UoraBackoff::OnFailure(RandomStream& rng)
{
    m_ocw = std::min(2 * m_ocw + 1, GetOcwMax());
    DrawObo(rng);
}

void
UoraBackoff::ForceObo(uint32_t obo)
{
    if (obo > m_ocw)
    {
        throw std::logic_error("forced OBO " + std::to_string(obo) + " exceeds OCW " +
                               std::to_string(m_ocw));
    }
    m_obo = obo;
}

void
UoraBackoff::DrawObo(RandomStream& rng)
{
    m_obo = static_cast<uint32_t>(rng.UniformInt(0, m_ocw));
}

} // namespace uora
