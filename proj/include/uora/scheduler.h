/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_SCHEDULER_H
#define UORA_SCHEDULER_H

#include "uora/phy-medium.h"
#include "uora/wire-formats.h"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace uora
{

struct SchedulerPolicy
{
    /// RA RUs in every BSRP trigger.
    uint32_t nRaBsrp{3};
    /// RA RUs in every Basic trigger.
    uint32_t nRaBasic{0};
    /// Grant data RUs to stations whose last report is stale but nonzero.
    bool allowStaleAllocation{true};
    /// Use the non-RA RUs of a BSRP trigger to poll stations round-robin.
    bool bsrpSaPolling{true};
};

struct BufferStatusEntry
{
    uint32_t queueBytes{0};
    /// Reported in the most recent BSR phase.
    bool fresh{false};

    bool operator==(const BufferStatusEntry&) const = default;
};

/// Per-RU flag: true if the RU was collided or idle during the BSR phase.
using BsrPhaseUsage = std::vector<bool>;

BsrPhaseUsage UnusedRus(const RuOutcomes& outcomes);

/**
 * AP-side round-robin multi-user scheduler.
 *
 * Polling and data allocation are decoupled: the BSRP trigger polls with RA
 * RUs (plus SA polls for the stations at the round-robin cursor), and the
 * Basic trigger then reallocates the whole RU layout, including RUs that were
 * collided or idle while polling. Data grants go first to stations with fresh
 * nonzero reports, then to stations with stale nonzero reports. Granted
 * stations get RUs in round-robin order from the cursor.
 */
class RoundRobinScheduler
{
  public:
    explicit RoundRobinScheduler(SchedulerPolicy policy);

    void Associate(Aid aid);
    void Disassociate(Aid aid);

    TriggerFrame BuildBsrpTrigger(const RuLayout& layout, uint32_t ulLengthUs);

    /// Stores the reports decoded on SUCCESS RUs; every older entry turns stale.
    void IngestBsrResults(const RuOutcomes& outcomes, const std::map<Aid, uint32_t>& reportedBytes);

    /// nullopt when there is nothing to allocate (no grant and no RA RU).
    std::optional<TriggerFrame> BuildBasicTrigger(const RuLayout& layout,
                                                  const BsrPhaseUsage& bsrPhaseUsage,
                                                  uint32_t ulLengthUs);

    /// Decrements the known buffer status after an acknowledged data transmission.
    void NotifyDelivered(Aid aid, uint32_t bytes);
    /// Records a zero queue report carried in a data-phase response.
    void NotifyEmptyQueue(Aid aid);

    void AdvanceRound();

    void SetBufferStatus(Aid aid, uint32_t queueBytes, bool fresh);
    /// Places the cursor on an associated AID.
    void SetCursorTo(Aid aid);

    const std::vector<Aid>& GetAssociated() const
    {
        return m_associated;
    }

    size_t GetCursor() const
    {
        return m_cursor;
    }

    const std::map<Aid, BufferStatusEntry>& GetBufferStatus() const
    {
        return m_bufferStatus;
    }

    const SchedulerPolicy& GetPolicy() const
    {
        return m_policy;
    }

    /// RUs in the last Basic trigger that had been collided or idle while polling.
    uint32_t GetLastRescheduledCount() const
    {
        return m_lastRescheduled;
    }

  private:
    /// Associated AIDs in round-robin order starting at the cursor.
    std::vector<Aid> TraversalOrder() const;
    void MoveCursorPast(Aid aid);

    SchedulerPolicy m_policy;
    std::vector<Aid> m_associated;
    size_t m_cursor{0};
    std::map<Aid, BufferStatusEntry> m_bufferStatus;
    uint32_t m_lastRescheduled{0};
};

} // namespace uora

#endif /* UORA_SCHEDULER_H */
