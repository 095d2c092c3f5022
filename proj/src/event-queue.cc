/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/event-queue.h"

#include <stdexcept>

namespace uora
{

void
EventQueue::Schedule(Time at, uint32_t actor, Handler handler)
{
    if (at < m_now)
    {
        throw std::logic_error("event scheduled in the past");
    }
    m_events.push(Event{at, actor, m_nextSeq++, std::move(handler)});
}

uint64_t
EventQueue::RunUntil(Time end)
{
    uint64_t executed = 0;
    while (!m_events.empty() && m_events.top().at < end)
    {
        // copy out before pop: the handler may schedule more events
        Event ev = m_events.top();
        m_events.pop();
        m_now = ev.at;
        ev.handler();
        ++executed;
    }
    return executed;
}

void
EventQueue::Stop()
{
    m_events = {};
}

} // namespace uora
