/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/engine.h"

#include "uora/errors.h"
#include "uora/event-queue.h"
#include "uora/mu-edca.h"
#include "uora/random.h"
#include "uora/uora-backoff.h"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <istream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uora
{

namespace
{

/// Stream ids above this carry per-station traffic offsets.
constexpr uint64_t TRAFFIC_STREAM_BASE = 1ull << 32;

uint64_t
RoundUp16(uint64_t us)
{
    return (us + 15) / 16 * 16;
}

std::string
StaName(Aid aid)
{
    return "STA" + std::to_string(aid);
}

std::string
JoinAids(const std::vector<Aid>& aids)
{
    std::string out;
    for (size_t i = 0; i < aids.size(); ++i)
    {
        out += (i ? "," : "") + std::to_string(aids[i]);
    }
    return out.empty() ? "-" : out;
}

std::string
DescribeTrigger(const TriggerFrame& tf)
{
    std::string out = "ul_length_us=" + std::to_string(tf.ulLengthUs);
    for (const auto& alloc : tf.allocations)
    {
        out += " ru" + std::to_string(alloc.GetRuIndex()) + "=" +
               (alloc.IsRandomAccess() ? std::string("RA") : "SA:" + std::to_string(alloc.GetAid()));
    }
    return out;
}

const char*
StateName(RuState state)
{
    switch (state)
    {
    case RuState::IDLE:
        return "idle";
    case RuState::SUCCESS:
        return "success";
    case RuState::COLLISION:
        return "collision";
    }
    return "?";
}

} // namespace

uint32_t
SimConfig::GetPacketIntervalUs() const
{
    return packetIntervalUs.value_or(txopUs / 4);
}

Time
SimConfig::GetGi() const
{
    return MicroSecondsF(giUs);
}

RuLayout
SimConfig::MakeLayout() const
{
    return RuLayout(bandwidthMhz, ruTones);
}

SchedulerPolicy
SimConfig::MakePolicy() const
{
    SchedulerPolicy policy;
    policy.nRaBsrp = nRa;
    policy.nRaBasic = nRaBasic;
    policy.allowStaleAllocation = allowStaleAllocation;
    policy.bsrpSaPolling = bsrpSaPolling;
    return policy;
}

void
ValidateConfig(const SimConfig& config)
{
    const RuLayout layout = config.MakeLayout();
    auto require = [](bool ok, const std::string& what) {
        if (!ok)
        {
            throw ConfigError(what);
        }
    };
    require(config.nRa <= layout.GetCount(),
            "n_ra " + std::to_string(config.nRa) + " exceeds the " +
                std::to_string(layout.GetCount()) + " RUs of the layout");
    require(config.nRaBasic <= layout.GetCount(), "n_ra_basic exceeds the RU count");
    require(config.eocwMin <= config.eocwMax && config.eocwMax <= UoraBackoff::MAX_EOCW,
            "EOCW range must satisfy 0 <= eocw_min <= eocw_max <= 7");
    require(config.giUs > 0.0, "gi_us must be positive");
    require(config.txopUs > 0, "txop_us must be positive");
    require(config.beaconIntervalUs > 0, "beacon_interval_us must be positive");
    require(config.payloadBytes > 0, "payload_bytes must be positive");
    require(config.GetPacketIntervalUs() > 0, "packet_interval_us must be positive");
    require(config.simDurationUs > 0, "sim_duration_us must be positive");
    require(config.nRuns > 0, "n_runs must be positive");
    require(config.sifsUs > 0, "sifs_us must be positive");
    require(config.queueLimitPackets > 0, "queue_limit_packets must be positive");
    require(config.bsrFrameBytes > 0, "bsr_frame_bytes must be positive");
    require(config.controlRate.bitsPerSymbol > 0, "control rate needs bits per symbol");
    require(config.nStas <= MAX_AID && (config.nStas < UNASSOCIATED_RA_AID),
            "too many stations for the AID space");
    require(config.muEdcaAifsn == 0,
            "MU EDCA AIFSN must be 0: stations contending with EDCA are not simulated");
    require(!config.muEdcaTimerUs || *config.muEdcaTimerUs >= config.simDurationUs,
            "MU EDCA timer shorter than the simulation would let stations fall back to EDCA");
}

PhyRateTable
MakeRateTable(const SimConfig& config)
{
    PhyRateTable table;
    table.SetPreamble(MicroSeconds(config.preambleUs));
    if (!config.rateTableFile.empty())
    {
        table.LoadOverridesFromFile(config.rateTableFile);
    }
    return table;
}

double
OfferedLoadPerSta(const SimConfig& config)
{
    return static_cast<double>(config.payloadBytes) * 8.0 / config.GetPacketIntervalUs();
}

DurationModel::DurationModel(const SimConfig& config)
    : m_config(config),
      m_rates(MakeRateTable(config)),
      m_layout(config.MakeLayout())
{
    ValidateConfig(config);
    m_sifs = MicroSeconds(config.sifsUs);
    m_accessGap = MicroSeconds(config.accessReqIntervalUs);
    m_beacon = ControlFrameDuration(config.beaconFrameBytes, config.controlRate);
    m_bsr = FrameDuration(m_rates, config.bsrFrameBytes, config.ruTones, config.mcsIndex, config.GetGi());
    m_bsrpUlLengthUs = static_cast<uint32_t>(
        RoundUp16(static_cast<uint64_t>((m_bsr.count() + 999) / 1000)));

    const Time overhead = Trigger(m_layout.GetCount()) + 2 * m_sifs + MultiStaBa(m_layout.GetCount());
    const Time txop = MicroSeconds(config.txopUs);
    if (txop <= overhead)
    {
        throw ConfigError("TXOP too short for the Basic TF exchange");
    }
    const auto windowUs = static_cast<uint64_t>((txop - overhead).count() / 1000);
    m_dataUlLengthUs = static_cast<uint32_t>(windowUs / 16 * 16);
    const Time window = MicroSeconds(m_dataUlLengthUs);

    m_maxMpdus = 0;
    while (m_maxMpdus < 256 && DataPpdu(m_maxMpdus + 1) <= window)
    {
        ++m_maxMpdus;
    }
    if (m_maxMpdus == 0)
    {
        throw ConfigError("a " + std::to_string(config.payloadBytes) +
                          " B packet does not fit the " + std::to_string(m_dataUlLengthUs) +
                          " us data window");
    }
}

Time
DurationModel::Trigger(size_t allocations) const
{
    return ControlFrameDuration(TriggerFrameBytes(allocations), m_config.controlRate);
}

Time
DurationModel::MultiStaBa(size_t ackedStations) const
{
    return ControlFrameDuration(MultiStaBlockAckBytes(ackedStations), m_config.controlRate);
}

Time
DurationModel::DataPpdu(uint32_t mpdus) const
{
    const uint64_t bytes =
        static_cast<uint64_t>(mpdus) * (m_config.payloadBytes + m_config.macOverheadBytes);
    return FrameDuration(m_rates, bytes, m_config.ruTones, m_config.mcsIndex, m_config.GetGi());
}

double
StaMetrics::MeanDelayUs() const
{
    return deliveredMpdus == 0 ? 0.0 : ToMicroSeconds(delaySum) / static_cast<double>(deliveredMpdus);
}

Time
AirtimeBreakdown::Total() const
{
    return triggerFrames + bsr + data + blockAcks + sifs + gaps + beacons;
}

uint64_t
Metrics::TotalGeneratedBytes() const
{
    uint64_t total = 0;
    for (const auto& s : stations)
    {
        total += s.generatedBytes;
    }
    return total;
}

uint64_t
Metrics::TotalDeliveredBytes() const
{
    uint64_t total = 0;
    for (const auto& s : stations)
    {
        total += s.deliveredBytes;
    }
    return total;
}

uint64_t
Metrics::TotalDeliveredMpdus() const
{
    uint64_t total = 0;
    for (const auto& s : stations)
    {
        total += s.deliveredMpdus;
    }
    return total;
}

double
Metrics::ThroughputMbps() const
{
    if (duration.count() == 0)
    {
        return 0.0;
    }
    return static_cast<double>(TotalDeliveredBytes()) * 8.0 / ToMicroSeconds(duration);
}

double
Metrics::MeanDelayUs() const
{
    Time sum{0};
    for (const auto& s : stations)
    {
        sum += s.delaySum;
    }
    const uint64_t mpdus = TotalDeliveredMpdus();
    return mpdus == 0 ? 0.0 : ToMicroSeconds(sum) / static_cast<double>(mpdus);
}

double
Metrics::RaSuccessRate() const
{
    const uint64_t rus = bsrp.raRus + basic.raRus;
    return rus == 0 ? 0.0 : static_cast<double>(bsrp.successes + basic.successes) / rus;
}

double
Metrics::RaCollisionRate() const
{
    const uint64_t rus = bsrp.raRus + basic.raRus;
    return rus == 0 ? 0.0 : static_cast<double>(bsrp.collisions + basic.collisions) / rus;
}

double
Metrics::RaIdleRate() const
{
    const uint64_t rus = bsrp.raRus + basic.raRus;
    return rus == 0 ? 0.0 : static_cast<double>(bsrp.idle + basic.idle) / rus;
}

void
Trace::Add(Time time, std::string kind, std::string actor, std::string detail)
{
    m_records.push_back(TraceRecord{time, std::move(kind), std::move(actor), std::move(detail)});
}

void
Trace::Write(std::ostream& os) const
{
    char stamp[32];
    for (const auto& r : m_records)
    {
        const auto ns = r.time.count();
        std::snprintf(stamp, sizeof(stamp), "%lld.%03lld", static_cast<long long>(ns / 1000),
                      static_cast<long long>(ns % 1000));
        os << stamp << '\t' << r.kind << '\t' << r.actor << '\t' << r.detail << '\n';
    }
}

std::string
Trace::Format() const
{
    std::ostringstream os;
    Write(os);
    return os.str();
}

Trace
Trace::Parse(std::istream& is)
{
    Trace trace;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
        {
            continue;
        }
        std::vector<std::string> fields;
        size_t start = 0;
        for (int i = 0; i < 3; ++i)
        {
            const auto tab = line.find('\t', start);
            if (tab == std::string::npos)
            {
                throw std::runtime_error("malformed trace line: " + line);
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        fields.push_back(line.substr(start));
        const auto dot = fields[0].find('.');
        if (dot == std::string::npos || fields[0].size() - dot != 4)
        {
            throw std::runtime_error("malformed trace time: " + fields[0]);
        }
        const long long us = std::stoll(fields[0].substr(0, dot));
        const long long frac = std::stoll(fields[0].substr(dot + 1));
        trace.Add(Time(us * 1000 + frac), fields[1], fields[2], fields[3]);
    }
    return trace;
}

std::map<std::string, std::string>
ParseTraceDetail(const std::string& detail)
{
    std::map<std::string, std::string> out;
    std::istringstream is(detail);
    std::string token;
    while (is >> token)
    {
        const auto eq = token.find('=');
        if (eq != std::string::npos)
        {
            out[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return out;
}

namespace
{

struct Station
{
    Station(Aid id, const SimConfig& config, uint64_t seed)
        : aid(id),
          rng(seed, id),
          backoff(config.eocwMin, config.eocwMax, rng)
    {
        RandomStream trafficRng(seed, TRAFFIC_STREAM_BASE + id);
        const uint64_t intervalNs = MicroSeconds(config.GetPacketIntervalUs()).count();
        arrivalOffset = Time(static_cast<int64_t>(trafficRng.UniformInt(0, intervalNs - 1)));
    }

    Aid aid;
    RandomStream rng;
    UoraBackoff backoff;
    MuEdcaState muEdca;
    /// Enqueue times; every queued packet has the configured payload size.
    std::deque<Time> queue;
    bool changedSinceReport{false};
    uint64_t nextArrival{0};
    Time arrivalOffset{0};
    std::optional<uint8_t> forcedRaChoice;
};

class Simulation
{
  public:
    Simulation(const SimConfig& config, uint64_t seed, const RunOptions& options);

    RunResult Execute();

  private:
    Station& Sta(Aid aid)
    {
        return *m_stations[aid - 1];
    }

    void Record(Time t, const char* kind, const std::string& actor, const std::string& detail);
    void RecordObo(Time t, const Station& sta, const char* cause, uint32_t from, const std::string& extra);
    void Account(Time AirtimeBreakdown::*bucket, Time start, Time duration);
    void Materialize(Station& sta, Time now);
    void MaterializeAll(Time now);
    uint32_t QueueBytes(const Station& sta) const;
    bool WantsToReport(const Station& sta) const;
    void CountContention(ContentionCounters& counters,
                         const TriggerFrame& tf,
                         const RuOutcomes& outcomes);
    void ApplyRaResult(Time t, Station& sta, bool success);

    void StartCycle(Time t);
    void AfterAccess(Time t);
    void SendBsrp(Time t);
    void BsrPhase(Time t, const TriggerFrame& tf);
    void BsrAcknowledged(Time t,
                         const RuOutcomes& outcomes,
                         const std::set<Aid>& raTransmitters,
                         const std::map<Aid, uint32_t>& reports);
    void SendBasic(Time t, const BsrPhaseUsage& usage);
    void DataPhase(Time t, const TriggerFrame& tf);
    void DataAcknowledged(Time t,
                          const RuOutcomes& outcomes,
                          const std::set<Aid>& raTransmitters,
                          const std::map<Aid, uint32_t>& mpdus);

    SimConfig m_config;
    uint64_t m_seed;
    RunOptions m_options;
    DurationModel m_durations;
    RoundRobinScheduler m_scheduler;
    std::vector<std::unique_ptr<Station>> m_stations;
    EventQueue m_events;
    Metrics m_metrics;
    Trace m_trace;
    Time m_end;
    Time m_accountedUntil{0};
    Time m_nextBeacon{0};
    std::optional<Time> m_stoppedAt;
};

Simulation::Simulation(const SimConfig& config, uint64_t seed, const RunOptions& options)
    : m_config(config),
      m_seed(seed),
      m_options(options),
      m_durations(config),
      m_scheduler(config.MakePolicy()),
      m_end(MicroSeconds(static_cast<int64_t>(config.simDurationUs)))
{
    m_metrics.stations.resize(config.nStas);
    const Time muEdcaTimer = config.muEdcaTimerUs
                                 ? MicroSeconds(static_cast<int64_t>(*config.muEdcaTimerUs))
                                 : MuEdcaState::WHOLE_SIMULATION;
    for (Aid aid = 1; aid <= config.nStas; ++aid)
    {
        m_stations.push_back(std::make_unique<Station>(aid, config, seed));
        auto& sta = *m_stations.back();
        sta.muEdca.ApplyParameters(config.muEdcaAifsn, muEdcaTimer, Time(0));
        m_scheduler.Associate(aid);
        RecordObo(Time(0), sta, "init", sta.backoff.GetObo(), "");
    }

    if (const ScenarioScript* script = options.script)
    {
        for (const auto& [aid, obo] : script->forcedObo)
        {
            auto& sta = Sta(aid);
            const uint32_t from = sta.backoff.GetObo();
            sta.backoff.ForceObo(obo);
            RecordObo(Time(0), sta, "forced", from, "");
        }
        for (const auto& [aid, ru] : script->forcedRaChoice)
        {
            Sta(aid).forcedRaChoice = ru;
        }
        for (const auto& [aid, packets] : script->initialQueuePackets)
        {
            auto& sta = Sta(aid);
            auto& m = m_metrics.stations[aid - 1];
            for (uint32_t i = 0; i < packets; ++i)
            {
                sta.queue.push_back(Time(0));
                ++m.generatedMpdus;
                m.generatedBytes += config.payloadBytes;
            }
            sta.changedSinceReport = packets > 0;
        }
        for (const auto& [aid, bytes] : script->knownStatuses)
        {
            m_scheduler.SetBufferStatus(aid, bytes, false);
        }
        if (script->cursorAt)
        {
            m_scheduler.SetCursorTo(*script->cursorAt);
        }
    }
}

void
Simulation::Record(Time t, const char* kind, const std::string& actor, const std::string& detail)
{
    if (m_options.trace)
    {
        m_trace.Add(t, kind, actor, detail);
    }
}

void
Simulation::RecordObo(Time t,
                      const Station& sta,
                      const char* cause,
                      uint32_t from,
                      const std::string& extra)
{
    if (!m_options.trace)
    {
        return;
    }
    std::string detail = std::string("cause=") + cause + " from=" + std::to_string(from) +
                         " to=" + std::to_string(sta.backoff.GetObo()) +
                         " ocw=" + std::to_string(sta.backoff.GetOcw());
    if (!extra.empty())
    {
        detail += " " + extra;
    }
    m_trace.Add(t, "OBO", StaName(sta.aid), detail);
}

void
Simulation::Account(Time AirtimeBreakdown::*bucket, Time start, Time duration)
{
    if (start != m_accountedUntil)
    {
        throw std::logic_error("airtime accounting is not contiguous");
    }
    m_accountedUntil = start + duration;
    const Time clippedEnd = std::min(start + duration, m_end);
    if (clippedEnd > start)
    {
        m_metrics.airtime.*bucket += clippedEnd - start;
    }
}

void
Simulation::Materialize(Station& sta, Time now)
{
    auto& m = m_metrics.stations[sta.aid - 1];
    switch (m_config.traffic)
    {
    case TrafficMode::NONE:
        return;
    case TrafficMode::SATURATED:
        while (sta.queue.size() < m_config.queueLimitPackets)
        {
            sta.queue.push_back(now);
            ++m.generatedMpdus;
            m.generatedBytes += m_config.payloadBytes;
            sta.changedSinceReport = true;
        }
        return;
    case TrafficMode::CBR: {
        const Time interval = MicroSeconds(m_config.GetPacketIntervalUs());
        while (true)
        {
            const Time at = sta.arrivalOffset + static_cast<int64_t>(sta.nextArrival) * interval;
            if (at > now)
            {
                break;
            }
            ++sta.nextArrival;
            ++m.generatedMpdus;
            m.generatedBytes += m_config.payloadBytes;
            if (sta.queue.size() < m_config.queueLimitPackets)
            {
                sta.queue.push_back(at);
                sta.changedSinceReport = true;
            }
            else
            {
                ++m.droppedMpdus;
            }
        }
        return;
    }
    }
}

void
Simulation::MaterializeAll(Time now)
{
    for (auto& sta : m_stations)
    {
        Materialize(*sta, now);
    }
}

uint32_t
Simulation::QueueBytes(const Station& sta) const
{
    return static_cast<uint32_t>(sta.queue.size()) * m_config.payloadBytes;
}

bool
Simulation::WantsToReport(const Station& sta) const
{
    if (sta.queue.empty())
    {
        return false;
    }
    return m_config.bsrContention == BsrContention::BACKLOGGED || sta.changedSinceReport;
}

void
Simulation::CountContention(ContentionCounters& counters,
                            const TriggerFrame& tf,
                            const RuOutcomes& outcomes)
{
    ++counters.triggers;
    uint64_t successes = 0;
    uint64_t collisions = 0;
    for (uint8_t ru : tf.RandomAccessRus())
    {
        ++counters.raRus;
        switch (outcomes[ru].state)
        {
        case RuState::IDLE:
            ++counters.idle;
            break;
        case RuState::SUCCESS:
            ++successes;
            break;
        case RuState::COLLISION:
            ++collisions;
            break;
        }
    }
    counters.successes += successes;
    counters.collisions += collisions;
    counters.successSqSum += successes * successes;
    counters.collisionSqSum += collisions * collisions;
}

void
Simulation::ApplyRaResult(Time t, Station& sta, bool success)
{
    const uint32_t from = sta.backoff.GetObo();
    if (success)
    {
        sta.backoff.OnSuccess(sta.rng);
    }
    else
    {
        sta.backoff.OnFailure(sta.rng);
    }
    RecordObo(t, sta, success ? "success" : "failure", from, "");
}

RunResult
Simulation::Execute()
{
    m_events.Schedule(Time(0), AP_ACTOR, [this] { StartCycle(Time(0)); });
    m_events.RunUntil(m_end);
    m_events.Stop();

    const Time finish = m_stoppedAt ? std::min(*m_stoppedAt, m_end) : m_end;
    m_metrics.duration = finish;
    if (m_metrics.airtime.Total() != finish)
    {
        throw std::logic_error("airtime breakdown does not add up to the simulated duration");
    }
    return RunResult{std::move(m_metrics), std::move(m_trace)};
}

void
Simulation::StartCycle(Time t)
{
    if (m_options.maxCycles && m_metrics.cycles >= *m_options.maxCycles)
    {
        m_stoppedAt = t;
        m_end = std::min(m_end, t);
        m_events.Stop();
        return;
    }
    for (const auto& sta : m_stations)
    {
        if (sta->muEdca.EdcaEnabled(t))
        {
            throw std::logic_error(StaName(sta->aid) + " fell back to EDCA contention");
        }
    }
    const Time gap = m_durations.AccessGap();
    Account(&AirtimeBreakdown::gaps, t, gap);
    m_events.Schedule(t + gap, AP_ACTOR, [this, at = t + gap] { AfterAccess(at); });
}

void
Simulation::AfterAccess(Time t)
{
    if (t >= m_nextBeacon)
    {
        const Time beacon = m_durations.Beacon();
        Account(&AirtimeBreakdown::beacons, t, beacon);
        ++m_metrics.beacons;
        Record(t, "BEACON", "AP", "");
        const Time interval = MicroSeconds(m_config.beaconIntervalUs);
        while (m_nextBeacon <= t)
        {
            m_nextBeacon += interval;
        }
        m_events.Schedule(t + beacon, AP_ACTOR, [this, at = t + beacon] { StartCycle(at); });
        return;
    }
    SendBsrp(t);
}

void
Simulation::SendBsrp(Time t)
{
    ++m_metrics.cycles;
    MaterializeAll(t);
    const auto& layout = m_durations.Layout();
    TriggerFrame tf = m_scheduler.BuildBsrpTrigger(layout, m_durations.BsrpUlLengthUs());
    m_metrics.saPollsBsrp += tf.allocations.size() - tf.CountRandomAccess();
    m_metrics.unallocatedRusBsrp += layout.GetCount() - tf.allocations.size();
    Record(t, "BSRP_TF", "AP", DescribeTrigger(tf));

    const Time duration = m_durations.Trigger(tf.allocations.size());
    const Time sifs = m_durations.Sifs();
    Account(&AirtimeBreakdown::triggerFrames, t, duration);
    Account(&AirtimeBreakdown::sifs, t + duration, sifs);
    const Time next = t + duration + sifs;
    m_events.Schedule(next, AP_ACTOR, [this, next, tf = std::move(tf)] { BsrPhase(next, tf); });
}

void
Simulation::BsrPhase(Time t, const TriggerFrame& tf)
{
    const uint32_t nRa = tf.CountRandomAccess();
    const auto raRus = tf.RandomAccessRus();
    std::vector<Transmission> transmissions;
    std::map<Aid, uint32_t> reports;
    std::set<Aid> raTransmitters;

    for (auto& staPtr : m_stations)
    {
        Station& sta = *staPtr;
        if (auto ru = tf.FindScheduledRu(sta.aid))
        {
            transmissions.push_back({sta.aid, *ru});
            reports[sta.aid] = QueueBytes(sta);
            Record(t, "BSR_TX", StaName(sta.aid),
                   "ru=" + std::to_string(*ru) + " access=SA bytes=" + std::to_string(QueueBytes(sta)));
            continue;
        }
        if (nRa == 0 || !WantsToReport(sta))
        {
            continue;
        }
        const uint32_t from = sta.backoff.GetObo();
        const TriggerDecision decision = sta.backoff.ProcessTrigger(nRa);
        RecordObo(t, sta, "trigger", from,
                  "nra=" + std::to_string(nRa) + " decision=" +
                      (decision == TriggerDecision::TRANSMIT ? "transmit" : "defer"));
        if (decision != TriggerDecision::TRANSMIT)
        {
            continue;
        }
        uint8_t ru;
        if (sta.forcedRaChoice)
        {
            ru = *sta.forcedRaChoice;
            sta.forcedRaChoice.reset();
        }
        else
        {
            ru = UoraBackoff::SelectRaRu(raRus, sta.rng);
        }
        transmissions.push_back({sta.aid, ru});
        reports[sta.aid] = QueueBytes(sta);
        raTransmitters.insert(sta.aid);
        Record(t, "BSR_TX", StaName(sta.aid),
               "ru=" + std::to_string(ru) + " access=RA bytes=" + std::to_string(QueueBytes(sta)));
    }

    const auto& layout = m_durations.Layout();
    RuOutcomes outcomes = ResolveReception(transmissions, layout.GetCount(), m_config.captureFirst);
    CountContention(m_metrics.bsrp, tf, outcomes);
    std::vector<Aid> decoded;
    for (size_t ru = 0; ru < outcomes.size(); ++ru)
    {
        Record(t, "RU_RESULT", "AP",
               "phase=bsr ru=" + std::to_string(ru) + " state=" + StateName(outcomes[ru].state) +
                   " aids=" + JoinAids(outcomes[ru].stations));
        if (outcomes[ru].state == RuState::SUCCESS)
        {
            decoded.push_back(outcomes[ru].stations.front());
        }
    }

    const Time bsr = m_durations.BsrPpdu();
    Account(&AirtimeBreakdown::bsr, t, bsr);
    Time next = t + bsr;
    if (!decoded.empty())
    {
        const Time sifs = m_durations.Sifs();
        const Time ba = m_durations.MultiStaBa(decoded.size());
        Account(&AirtimeBreakdown::sifs, next, sifs);
        Account(&AirtimeBreakdown::blockAcks, next + sifs, ba);
        std::sort(decoded.begin(), decoded.end());
        Record(next + sifs, "MULTI_STA_BA", "AP", "phase=bsr aids=" + JoinAids(decoded));
        next += sifs + ba;
    }
    m_events.Schedule(next,
                      AP_ACTOR,
                      [this, next, outcomes = std::move(outcomes), raTransmitters, reports] {
                          BsrAcknowledged(next, outcomes, raTransmitters, reports);
                      });
}

void
Simulation::BsrAcknowledged(Time t,
                            const RuOutcomes& outcomes,
                            const std::set<Aid>& raTransmitters,
                            const std::map<Aid, uint32_t>& reports)
{
    std::set<Aid> acked;
    for (const auto& ru : outcomes)
    {
        if (ru.state == RuState::SUCCESS)
        {
            acked.insert(ru.stations.front());
        }
    }
    for (Aid aid : raTransmitters)
    {
        ApplyRaResult(t, Sta(aid), acked.count(aid) != 0);
    }
    for (Aid aid : acked)
    {
        Sta(aid).changedSinceReport = false;
    }
    m_scheduler.IngestBsrResults(outcomes, reports);
    SendBasic(t, UnusedRus(outcomes));
}

void
Simulation::SendBasic(Time t, const BsrPhaseUsage& usage)
{
    const auto& layout = m_durations.Layout();
    auto tf = m_scheduler.BuildBasicTrigger(layout, usage, m_durations.DataUlLengthUs());
    if (!tf)
    {
        m_events.Schedule(t, AP_ACTOR, [this, t] { StartCycle(t); });
        return;
    }
    m_metrics.saGrantsBasic += tf->allocations.size() - tf->CountRandomAccess();
    m_metrics.unallocatedRusBasic += layout.GetCount() - tf->allocations.size();
    m_metrics.rescheduledRus += m_scheduler.GetLastRescheduledCount();

    const Time sifs = m_durations.Sifs();
    const Time duration = m_durations.Trigger(tf->allocations.size());
    Account(&AirtimeBreakdown::sifs, t, sifs);
    Account(&AirtimeBreakdown::triggerFrames, t + sifs, duration);
    Account(&AirtimeBreakdown::sifs, t + sifs + duration, sifs);
    Record(t + sifs, "BASIC_TF", "AP", DescribeTrigger(*tf));
    const Time next = t + sifs + duration + sifs;
    m_events.Schedule(next, AP_ACTOR, [this, next, tf = std::move(*tf)] { DataPhase(next, tf); });
}

void
Simulation::DataPhase(Time t, const TriggerFrame& tf)
{
    MaterializeAll(t);
    const uint32_t nRa = tf.CountRandomAccess();
    const auto raRus = tf.RandomAccessRus();
    std::vector<Transmission> transmissions;
    std::vector<Time> durations;
    std::map<Aid, uint32_t> mpdus;
    std::set<Aid> raTransmitters;

    for (auto& staPtr : m_stations)
    {
        Station& sta = *staPtr;
        const auto count = static_cast<uint32_t>(
            std::min<size_t>(sta.queue.size(), m_durations.MaxMpdusPerGrant()));
        std::optional<uint8_t> ru = tf.FindScheduledRu(sta.aid);
        if (!ru)
        {
            if (nRa == 0 || sta.queue.empty())
            {
                continue;
            }
            const uint32_t from = sta.backoff.GetObo();
            const TriggerDecision decision = sta.backoff.ProcessTrigger(nRa);
            RecordObo(t, sta, "trigger", from,
                      "nra=" + std::to_string(nRa) + " decision=" +
                          (decision == TriggerDecision::TRANSMIT ? "transmit" : "defer"));
            if (decision != TriggerDecision::TRANSMIT)
            {
                continue;
            }
            ru = UoraBackoff::SelectRaRu(raRus, sta.rng);
            raTransmitters.insert(sta.aid);
        }
        transmissions.push_back({sta.aid, *ru});
        mpdus[sta.aid] = count;
        durations.push_back(count > 0 ? m_durations.DataPpdu(count) : m_durations.QosNullPpdu());
        if (count == 0)
        {
            ++m_metrics.emptyGrants;
        }
        Record(t, "DATA_TX", StaName(sta.aid),
               "ru=" + std::to_string(*ru) + " access=" +
                   (raTransmitters.count(sta.aid) ? "RA" : "SA") + " mpdus=" + std::to_string(count));
    }

    const auto& layout = m_durations.Layout();
    RuOutcomes outcomes = ResolveReception(transmissions, layout.GetCount(), m_config.captureFirst);
    if (nRa > 0)
    {
        CountContention(m_metrics.basic, tf, outcomes);
    }
    std::vector<Aid> decoded;
    for (const auto& alloc : tf.allocations)
    {
        const auto& ru = outcomes[alloc.GetRuIndex()];
        Record(t, "RU_RESULT", "AP",
               "phase=data ru=" + std::to_string(alloc.GetRuIndex()) + " state=" +
                   StateName(ru.state) + " aids=" + JoinAids(ru.stations));
        if (ru.state == RuState::SUCCESS)
        {
            decoded.push_back(ru.stations.front());
        }
    }

    // with nobody answering, the AP still waits out the shortest TB PPDU
    const Time data = durations.empty() ? m_durations.QosNullPpdu() : PadToLongest(durations);
    Account(&AirtimeBreakdown::data, t, data);
    Time next = t + data;
    if (!decoded.empty())
    {
        const Time sifs = m_durations.Sifs();
        const Time ba = m_durations.MultiStaBa(decoded.size());
        Account(&AirtimeBreakdown::sifs, next, sifs);
        Account(&AirtimeBreakdown::blockAcks, next + sifs, ba);
        std::sort(decoded.begin(), decoded.end());
        Record(next + sifs, "MULTI_STA_BA", "AP", "phase=data aids=" + JoinAids(decoded));
        next += sifs + ba;
    }
    m_events.Schedule(next,
                      AP_ACTOR,
                      [this, next, outcomes = std::move(outcomes), raTransmitters, mpdus] {
                          DataAcknowledged(next, outcomes, raTransmitters, mpdus);
                      });
}

void
Simulation::DataAcknowledged(Time t,
                             const RuOutcomes& outcomes,
                             const std::set<Aid>& raTransmitters,
                             const std::map<Aid, uint32_t>& mpdus)
{
    // arrivals up to now must see the queue as it was before this delivery
    MaterializeAll(t);
    std::set<Aid> acked;
    for (const auto& ru : outcomes)
    {
        if (ru.state == RuState::SUCCESS)
        {
            acked.insert(ru.stations.front());
        }
    }
    for (Aid aid : acked)
    {
        Station& sta = Sta(aid);
        auto& m = m_metrics.stations[aid - 1];
        const uint32_t count = mpdus.at(aid);
        if (count == 0)
        {
            m_scheduler.NotifyEmptyQueue(aid);
            continue;
        }
        for (uint32_t i = 0; i < count; ++i)
        {
            m.delaySum += t - sta.queue.front();
            sta.queue.pop_front();
        }
        m.deliveredMpdus += count;
        m.deliveredBytes += static_cast<uint64_t>(count) * m_config.payloadBytes;
        sta.changedSinceReport = true;
        sta.muEdca.OnOfdmaSuccess(t);
        m_scheduler.NotifyDelivered(aid, count * m_config.payloadBytes);
        Record(t, "DELIVERED", StaName(aid), "mpdus=" + std::to_string(count));
    }
    for (Aid aid : raTransmitters)
    {
        ApplyRaResult(t, Sta(aid), acked.count(aid) != 0);
    }
    ++m_metrics.dataPhases;
    m_events.Schedule(t, AP_ACTOR, [this, t] { StartCycle(t); });
}

} // namespace

RunResult
Run(const SimConfig& config, uint64_t seed, const RunOptions& options)
{
    ValidateConfig(config);
    Simulation sim(config, seed, options);
    return sim.Execute();
}

} // namespace uora
