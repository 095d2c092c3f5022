/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_ENGINE_H
#define UORA_ENGINE_H

#include "uora/phy-medium.h"
#include "uora/scheduler.h"
#include "uora/time.h"
#include "uora/wire-formats.h"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uora
{

enum class TrafficMode
{
    /// One packet every packet interval per station.
    CBR,
    /// Queues are topped up to the queue limit whenever they are inspected.
    SATURATED,
    /// No generated traffic; only scripted initial queues.
    NONE,
};

enum class BsrContention
{
    /// Contend when the queue is nonempty and changed since the last acknowledged report.
    ON_CHANGE,
    /// Contend whenever the queue is nonempty.
    BACKLOGGED,
};

/**
 * Scenario parameters. Defaults reproduce the single-BSS validation setup:
 * 20 MHz with 26-tone RUs, MCS 8, 0.8 us GI, 2080 us TXOP, OCW 31..127,
 * 124 us AP access interval, 1700 B payloads every TXOP/4, 15 s runs.
 */
struct SimConfig
{
    uint16_t bandwidthMhz{20};
    RuTones ruTones{RuTones::TONES_26};
    uint8_t mcsIndex{8};
    double giUs{0.8};
    uint32_t txopUs{2080};
    uint32_t beaconIntervalUs{204800};
    uint8_t eocwMin{5};
    uint8_t eocwMax{7};
    uint32_t accessReqIntervalUs{124};
    uint32_t payloadBytes{1700};
    /// Defaults to txopUs / 4.
    std::optional<uint32_t> packetIntervalUs;
    uint32_t nStas{9};
    /// RA RUs per BSRP trigger.
    uint32_t nRa{3};
    uint64_t simDurationUs{15'000'000};
    uint32_t nRuns{5};
    uint32_t sifsUs{16};
    uint64_t seed{1};

    // scheduler policy
    uint32_t nRaBasic{0};
    bool allowStaleAllocation{true};
    bool bsrpSaPolling{true};

    TrafficMode traffic{TrafficMode::CBR};
    BsrContention bsrContention{BsrContention::ON_CHANGE};
    uint32_t queueLimitPackets{500};

    // frame sizes and PHY overheads
    uint32_t bsrFrameBytes{40};
    uint32_t macOverheadBytes{34};
    uint32_t preambleUs{40};
    uint32_t beaconFrameBytes{250};
    ControlRate controlRate{};
    bool captureFirst{false};
    /// Optional rate-table override file.
    std::string rateTableFile;

    // MU EDCA parameters announced to every station at start
    uint8_t muEdcaAifsn{0};
    /// nullopt keeps the parameters for the whole simulation.
    std::optional<uint64_t> muEdcaTimerUs;

    uint32_t GetPacketIntervalUs() const;
    Time GetGi() const;
    RuLayout MakeLayout() const;
    SchedulerPolicy MakePolicy() const;
};

/// Throws ConfigError describing the first problem found.
void ValidateConfig(const SimConfig& config);

PhyRateTable MakeRateTable(const SimConfig& config);

/// Offered application load of one station in bits/us (= Mb/s).
double OfferedLoadPerSta(const SimConfig& config);

/**
 * Airtime of every frame in one UL OFDMA cycle for a configuration.
 *
 * The Basic trigger grants a UL length equal to the TXOP minus the Basic TF,
 * two SIFS and a Multi-STA BA sized for a full layout, rounded down to 16 us.
 * A grant aggregates as many MPDUs as fit in that length.
 */
class DurationModel
{
  public:
    /// Validates the configuration first.
    explicit DurationModel(const SimConfig& config);

    Time Sifs() const
    {
        return m_sifs;
    }

    Time AccessGap() const
    {
        return m_accessGap;
    }

    Time Beacon() const
    {
        return m_beacon;
    }

    Time BsrPpdu() const
    {
        return m_bsr;
    }

    /// A QoS Null response from a granted station with an empty queue.
    Time QosNullPpdu() const
    {
        return m_bsr;
    }

    Time Trigger(size_t allocations) const;
    Time MultiStaBa(size_t ackedStations) const;
    Time DataPpdu(uint32_t mpdus) const;

    uint32_t BsrpUlLengthUs() const
    {
        return m_bsrpUlLengthUs;
    }

    uint32_t DataUlLengthUs() const
    {
        return m_dataUlLengthUs;
    }

    uint32_t MaxMpdusPerGrant() const
    {
        return m_maxMpdus;
    }

    const RuLayout& Layout() const
    {
        return m_layout;
    }

  private:
    SimConfig m_config;
    PhyRateTable m_rates;
    RuLayout m_layout;
    Time m_sifs;
    Time m_accessGap;
    Time m_beacon;
    Time m_bsr;
    uint32_t m_bsrpUlLengthUs;
    uint32_t m_dataUlLengthUs;
    uint32_t m_maxMpdus;
};

struct StaMetrics
{
    uint64_t generatedBytes{0};
    uint64_t generatedMpdus{0};
    uint64_t droppedMpdus{0};
    uint64_t deliveredBytes{0};
    uint64_t deliveredMpdus{0};
    /// Sum over delivered MPDUs of (acknowledgement time - enqueue time).
    Time delaySum{0};

    double MeanDelayUs() const;

    bool operator==(const StaMetrics&) const = default;
};

/// RA RU outcomes for one trigger type.
struct ContentionCounters
{
    uint64_t triggers{0};
    uint64_t raRus{0};
    uint64_t successes{0};
    uint64_t collisions{0};
    uint64_t idle{0};
    /// Sums of squared per-trigger counts, for standard errors.
    uint64_t successSqSum{0};
    uint64_t collisionSqSum{0};

    bool operator==(const ContentionCounters&) const = default;
};

struct AirtimeBreakdown
{
    Time triggerFrames{0};
    Time bsr{0};
    Time data{0};
    Time blockAcks{0};
    Time sifs{0};
    Time gaps{0};
    Time beacons{0};

    Time Total() const;

    bool operator==(const AirtimeBreakdown&) const = default;
};

struct Metrics
{
    /// Indexed by AID - 1.
    std::vector<StaMetrics> stations;
    ContentionCounters bsrp;
    ContentionCounters basic;
    uint64_t saPollsBsrp{0};
    uint64_t saGrantsBasic{0};
    uint64_t unallocatedRusBsrp{0};
    uint64_t unallocatedRusBasic{0};
    /// Data RUs that had been collided or idle in the preceding BSR phase.
    uint64_t rescheduledRus{0};
    /// Data grants answered with a QoS Null.
    uint64_t emptyGrants{0};
    uint64_t cycles{0};
    uint64_t dataPhases{0};
    uint64_t beacons{0};
    AirtimeBreakdown airtime;
    Time duration{0};

    uint64_t TotalGeneratedBytes() const;
    uint64_t TotalDeliveredBytes() const;
    uint64_t TotalDeliveredMpdus() const;
    /// Delivered payload bits per microsecond.
    double ThroughputMbps() const;
    double MeanDelayUs() const;
    /// Over RA RUs of both trigger types.
    double RaSuccessRate() const;
    double RaCollisionRate() const;
    double RaIdleRate() const;

    bool operator==(const Metrics&) const = default;
};

struct TraceRecord
{
    Time time;
    std::string kind;
    std::string actor;
    std::string detail;

    bool operator==(const TraceRecord&) const = default;
};

/// Line-oriented event log: time_us<TAB>kind<TAB>actor<TAB>detail.
class Trace
{
  public:
    void Add(Time time, std::string kind, std::string actor, std::string detail);

    const std::vector<TraceRecord>& Records() const
    {
        return m_records;
    }

    void Write(std::ostream& os) const;
    std::string Format() const;
    /// Throws std::runtime_error on a malformed line.
    static Trace Parse(std::istream& is);

  private:
    std::vector<TraceRecord> m_records;
};

/// Key=value pairs of a trace detail field ("cause=trigger from=15 to=12").
std::map<std::string, std::string> ParseTraceDetail(const std::string& detail);

/// Forced initial conditions for reproducing a hand-worked exchange.
struct ScenarioScript
{
    /// OBO values installed after initialization.
    std::map<Aid, uint32_t> forcedObo;
    /// RA RU picked on a station's next RA transmission (used once).
    std::map<Aid, uint8_t> forcedRaChoice;
    /// Packets queued at time zero.
    std::map<Aid, uint32_t> initialQueuePackets;
    /// Buffer statuses the AP already holds (stale) at time zero.
    std::map<Aid, uint32_t> knownStatuses;
    /// Round-robin cursor position at time zero.
    std::optional<Aid> cursorAt;
};

struct RunOptions
{
    bool trace{false};
    const ScenarioScript* script{nullptr};
    /// Stop once this many cycles have completed.
    std::optional<uint64_t> maxCycles;
};

struct RunResult
{
    Metrics metrics;
    Trace trace;
};

/**
 * Runs one simulation. Each cycle is: access gap, BSRP TF, SIFS, BSRs,
 * SIFS, Multi-STA BA, SIFS, Basic TF, SIFS, data, SIFS, Multi-STA BA.
 * Beacons take their own channel access every beacon interval.
 *
 * Throws ConfigError before any event runs if the configuration is invalid
 * or would need stations to contend with EDCA.
 */
RunResult Run(const SimConfig& config, uint64_t seed, const RunOptions& options = {});

} // namespace uora

#endif /* UORA_ENGINE_H */
