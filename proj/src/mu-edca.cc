/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/mu-edca.h"

namespace uora
{

void
MuEdcaState::ApplyParameters(uint8_t aifsn, Time timerDuration, Time now)
{
    m_aifsn = aifsn;
    m_timerDuration = timerDuration;
    m_applied = true;
    m_infinite = (timerDuration == WHOLE_SIMULATION);
    m_deadline = m_infinite ? Time::max() : now + timerDuration;
}

void
MuEdcaState::SetAlternateCw(uint16_t cwMin, uint16_t cwMax)
{
    m_cwMin = cwMin;
    m_cwMax = cwMax;
}

void
MuEdcaState::OnOfdmaSuccess(Time now)
{
    if (!m_applied || m_infinite)
    {
        return;
    }
    m_deadline = now + m_timerDuration;
}

bool
MuEdcaState::IsActive(Time now) const
{
    return m_applied && (m_infinite || now < m_deadline);
}

bool
MuEdcaState::EdcaEnabled(Time now) const
{
    return !(IsActive(now) && m_aifsn == 0);
}

std::optional<Time>
MuEdcaState::GetDeadline() const
{
    if (!m_applied || m_infinite)
    {
        return std::nullopt;
    }
    return m_deadline;
}

} // namespace uora
