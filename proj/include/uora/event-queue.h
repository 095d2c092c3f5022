/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_EVENT_QUEUE_H
#define UORA_EVENT_QUEUE_H

#include "uora/time.h"

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace uora
{

/// Actor rank used to order simultaneous events: the AP goes first, then stations by AID.
constexpr uint32_t AP_ACTOR = 0;

/**
 * Time-ordered event list. Events at the same instant run in ascending actor
 * rank, then in insertion order.
 */
class EventQueue
{
  public:
    using Handler = std::function<void()>;

    /// Throws std::logic_error when scheduling into the past.
    void Schedule(Time at, uint32_t actor, Handler handler);

    /// Runs events strictly before `end`; returns the number executed.
    uint64_t RunUntil(Time end);
    /// Drops all pending events.
    void Stop();

    Time Now() const
    {
        return m_now;
    }

    bool Empty() const
    {
        return m_events.empty();
    }

    size_t Size() const
    {
        return m_events.size();
    }

  private:
    struct Event
    {
        Time at;
        uint32_t actor;
        uint64_t seq;
        Handler handler;
    };

    struct Later
    {
        bool operator()(const Event& a, const Event& b) const
        {
            if (a.at != b.at)
            {
                return a.at > b.at;
            }
            if (a.actor != b.actor)
            {
                return a.actor > b.actor;
            }
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Event, std::vector<Event>, Later> m_events;
    Time m_now{0};
    uint64_t m_nextSeq{0};
};

} // namespace uora

#endif /* UORA_EVENT_QUEUE_H */
