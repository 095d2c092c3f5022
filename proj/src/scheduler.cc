/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/scheduler.h"

#include "uora/errors.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace uora
{

BsrPhaseUsage
UnusedRus(const RuOutcomes& outcomes)
{
    BsrPhaseUsage unused(outcomes.size());
    for (size_t i = 0; i < outcomes.size(); ++i)
    {
        unused[i] = outcomes[i].state != RuState::SUCCESS;
    }
    return unused;
}

RoundRobinScheduler::RoundRobinScheduler(SchedulerPolicy policy)
    : m_policy(policy)
{
}

void
RoundRobinScheduler::Associate(Aid aid)
{
    if (aid == RANDOM_ACCESS_AID || aid > MAX_AID || aid == UNASSOCIATED_RA_AID)
    {
        throw std::invalid_argument("cannot associate AID " + std::to_string(aid));
    }
    if (std::find(m_associated.begin(), m_associated.end(), aid) != m_associated.end())
    {
        return;
    }
    m_associated.push_back(aid);
}

void
RoundRobinScheduler::Disassociate(Aid aid)
{
    auto it = std::find(m_associated.begin(), m_associated.end(), aid);
    if (it == m_associated.end())
    {
        return;
    }
    const auto pos = static_cast<size_t>(it - m_associated.begin());
    m_associated.erase(it);
    m_bufferStatus.erase(aid);
    if (pos < m_cursor)
    {
        --m_cursor;
    }
    // removing the cursor's AID leaves the cursor on the next survivor
    AdvanceRound();
}

void
RoundRobinScheduler::AdvanceRound()
{
    m_cursor = m_associated.empty() ? 0 : m_cursor % m_associated.size();
}

void
RoundRobinScheduler::SetCursorTo(Aid aid)
{
    auto it = std::find(m_associated.begin(), m_associated.end(), aid);
    if (it == m_associated.end())
    {
        throw std::invalid_argument("AID " + std::to_string(aid) + " is not associated");
    }
    m_cursor = static_cast<size_t>(it - m_associated.begin());
}

std::vector<Aid>
RoundRobinScheduler::TraversalOrder() const
{
    std::vector<Aid> order;
    order.reserve(m_associated.size());
    for (size_t i = 0; i < m_associated.size(); ++i)
    {
        order.push_back(m_associated[(m_cursor + i) % m_associated.size()]);
    }
    return order;
}

void
RoundRobinScheduler::MoveCursorPast(Aid aid)
{
    auto it = std::find(m_associated.begin(), m_associated.end(), aid);
    m_cursor = (static_cast<size_t>(it - m_associated.begin()) + 1) % m_associated.size();
}

TriggerFrame
RoundRobinScheduler::BuildBsrpTrigger(const RuLayout& layout, uint32_t ulLengthUs)
{
    const uint32_t count = layout.GetCount();
    if (count == 0)
    {
        throw ConfigError("empty RU layout");
    }
    if (m_policy.nRaBsrp > count)
    {
        throw ConfigError("BSRP trigger asks for " + std::to_string(m_policy.nRaBsrp) +
                          " RA RUs but the layout has " + std::to_string(count));
    }
    AdvanceRound();

    TriggerFrame tf;
    tf.variant = TriggerVariant::BSRP;
    tf.ulLengthUs = ulLengthUs;
    uint32_t ru = 0;
    for (; ru < m_policy.nRaBsrp; ++ru)
    {
        tf.allocations.emplace_back(ru, layout.GetTones(), RANDOM_ACCESS_AID);
    }
    if (!m_policy.bsrpSaPolling)
    {
        return tf;
    }
    const auto order = TraversalOrder();
    std::optional<Aid> last;
    for (Aid aid : order)
    {
        if (ru == count)
        {
            break;
        }
        tf.allocations.emplace_back(ru++, layout.GetTones(), aid);
        last = aid;
    }
    // surplus RUs stay open to random access
    for (; ru < count; ++ru)
    {
        tf.allocations.emplace_back(ru, layout.GetTones(), RANDOM_ACCESS_AID);
    }
    if (last)
    {
        MoveCursorPast(*last);
    }
    return tf;
}

void
RoundRobinScheduler::IngestBsrResults(const RuOutcomes& outcomes,
                                      const std::map<Aid, uint32_t>& reportedBytes)
{
    for (auto& [aid, entry] : m_bufferStatus)
    {
        entry.fresh = false;
    }
    for (const auto& ru : outcomes)
    {
        if (ru.state != RuState::SUCCESS)
        {
            continue;
        }
        const Aid aid = ru.stations.front();
        auto report = reportedBytes.find(aid);
        if (report == reportedBytes.end())
        {
            throw std::logic_error("BSR decoded from station " + std::to_string(aid) +
                                   " without report contents");
        }
        if (std::find(m_associated.begin(), m_associated.end(), aid) == m_associated.end())
        {
            continue;
        }
        m_bufferStatus[aid] = BufferStatusEntry{report->second, true};
    }
}

std::optional<TriggerFrame>
RoundRobinScheduler::BuildBasicTrigger(const RuLayout& layout,
                                       const BsrPhaseUsage& bsrPhaseUsage,
                                       uint32_t ulLengthUs)
{
    const uint32_t count = layout.GetCount();
    if (m_policy.nRaBasic > count)
    {
        throw ConfigError("Basic trigger asks for more RA RUs than the layout has");
    }
    AdvanceRound();
    const uint32_t saCapacity = count - m_policy.nRaBasic;

    const auto order = TraversalOrder();
    std::vector<Aid> fresh;
    std::vector<Aid> stale;
    for (Aid aid : order)
    {
        auto it = m_bufferStatus.find(aid);
        if (it == m_bufferStatus.end() || it->second.queueBytes == 0)
        {
            continue;
        }
        (it->second.fresh ? fresh : stale).push_back(aid);
    }
    std::vector<Aid> chosen;
    for (Aid aid : fresh)
    {
        if (chosen.size() < saCapacity)
        {
            chosen.push_back(aid);
        }
    }
    if (m_policy.allowStaleAllocation)
    {
        for (Aid aid : stale)
        {
            if (chosen.size() < saCapacity)
            {
                chosen.push_back(aid);
            }
        }
    }
    // grants are laid out in round-robin order, not in priority order
    std::vector<Aid> granted;
    for (Aid aid : order)
    {
        if (std::find(chosen.begin(), chosen.end(), aid) != chosen.end())
        {
            granted.push_back(aid);
        }
    }

    if (granted.empty() && m_policy.nRaBasic == 0)
    {
        m_lastRescheduled = 0;
        return std::nullopt;
    }

    TriggerFrame tf;
    tf.variant = TriggerVariant::BASIC;
    tf.ulLengthUs = ulLengthUs;
    uint32_t ru = 0;
    for (; ru < m_policy.nRaBasic; ++ru)
    {
        tf.allocations.emplace_back(ru, layout.GetTones(), RANDOM_ACCESS_AID);
    }
    for (Aid aid : granted)
    {
        tf.allocations.emplace_back(ru++, layout.GetTones(), aid);
    }

    m_lastRescheduled = 0;
    for (const auto& alloc : tf.allocations)
    {
        const auto idx = alloc.GetRuIndex();
        if (idx < bsrPhaseUsage.size() && bsrPhaseUsage[idx])
        {
            ++m_lastRescheduled;
        }
    }
    if (!granted.empty())
    {
        MoveCursorPast(granted.back());
    }
    return tf;
}

void
RoundRobinScheduler::NotifyDelivered(Aid aid, uint32_t bytes)
{
    auto it = m_bufferStatus.find(aid);
    if (it == m_bufferStatus.end())
    {
        return;
    }
    it->second.queueBytes = it->second.queueBytes > bytes ? it->second.queueBytes - bytes : 0;
}

void
RoundRobinScheduler::NotifyEmptyQueue(Aid aid)
{
    if (std::find(m_associated.begin(), m_associated.end(), aid) == m_associated.end())
    {
        return;
    }
    m_bufferStatus[aid].queueBytes = 0;
}

void
RoundRobinScheduler::SetBufferStatus(Aid aid, uint32_t queueBytes, bool fresh)
{
    if (std::find(m_associated.begin(), m_associated.end(), aid) == m_associated.end())
    {
        throw std::invalid_argument("AID " + std::to_string(aid) + " is not associated");
    }
    m_bufferStatus[aid] = BufferStatusEntry{queueBytes, fresh};
}

} // namespace uora
