/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/experiment.h"

#include "uora/analytics.h"
#include "uora/errors.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace uora
{

const char* const RESULTS_HEADER = "bandwidth_mhz,n_stas,n_ra,run,seed,throughput_mbps,"
                                   "ra_success_rate,ra_collision_rate,ra_idle_rate,mean_delay_us";

const char* const SUMMARY_HEADER =
    "bandwidth_mhz,n_stas,n_ra,runs,"
    "throughput_mbps_mean,throughput_mbps_std,"
    "ra_success_rate_mean,ra_success_rate_std,"
    "ra_collision_rate_mean,ra_collision_rate_std,"
    "ra_idle_rate_mean,ra_idle_rate_std,"
    "mean_delay_us_mean,mean_delay_us_std";

RuTones
DefaultTonesFor(uint16_t bandwidthMhz)
{
    switch (bandwidthMhz)
    {
    case 20:
        return RuTones::TONES_26;
    case 40:
        return RuTones::TONES_52;
    case 80:
        return RuTones::TONES_106;
    case 160:
        return RuTones::TONES_242;
    default:
        throw ConfigError("unsupported bandwidth " + std::to_string(bandwidthMhz) +
                          " MHz (supported: 20, 40, 80, 160)");
    }
}

namespace
{

std::string
Trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
    {
        return "";
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T
ParseUnsigned(const std::string& text)
{
    uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty())
    {
        throw ConfigError("expected a non-negative integer, got '" + text + "'");
    }
    if (value > std::numeric_limits<T>::max())
    {
        throw ConfigError("value " + text + " is out of range");
    }
    return static_cast<T>(value);
}

double
ParseDouble(const std::string& text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value))
    {
        throw ConfigError("expected a number, got '" + text + "'");
    }
    return value;
}

bool
ParseBool(const std::string& text)
{
    if (text == "true" || text == "1" || text == "yes")
    {
        return true;
    }
    if (text == "false" || text == "0" || text == "no")
    {
        return false;
    }
    throw ConfigError("expected true or false, got '" + text + "'");
}

template <typename T>
std::vector<T>
ParseList(const std::string& text)
{
    std::vector<T> values;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ','))
    {
        values.push_back(ParseUnsigned<T>(Trim(item)));
    }
    if (values.empty())
    {
        throw ConfigError("empty list");
    }
    return values;
}

uint16_t
ParseBandwidth(const std::string& text)
{
    const auto bw = ParseUnsigned<uint16_t>(text);
    DefaultTonesFor(bw);
    return bw;
}

using Setter = std::function<void(ExperimentSpec&, const std::string&)>;

const std::map<std::string, Setter>&
Setters()
{
    static const std::map<std::string, Setter> setters = {
        {"bandwidth_mhz",
         [](ExperimentSpec& s, const std::string& v) { s.base.bandwidthMhz = ParseBandwidth(v); }},
        {"ru_tones",
         [](ExperimentSpec& s, const std::string& v) {
             const auto tones = RuTonesFromInt(ParseUnsigned<uint16_t>(v));
             if (!tones)
             {
                 throw ConfigError("RU size must be 26, 52, 106 or 242 tones");
             }
             s.base.ruTones = *tones;
             s.ruTonesExplicit = true;
         }},
        {"mcs_index",
         [](ExperimentSpec& s, const std::string& v) { s.base.mcsIndex = ParseUnsigned<uint8_t>(v); }},
        {"gi_us", [](ExperimentSpec& s, const std::string& v) { s.base.giUs = ParseDouble(v); }},
        {"txop_us", [](ExperimentSpec& s, const std::string& v) { s.base.txopUs = ParseUnsigned<uint32_t>(v); }},
        {"beacon_interval_us",
         [](ExperimentSpec& s, const std::string& v) { s.base.beaconIntervalUs = ParseUnsigned<uint32_t>(v); }},
        {"eocw_min", [](ExperimentSpec& s, const std::string& v) { s.base.eocwMin = ParseUnsigned<uint8_t>(v); }},
        {"eocw_max", [](ExperimentSpec& s, const std::string& v) { s.base.eocwMax = ParseUnsigned<uint8_t>(v); }},
        {"access_req_interval_us",
         [](ExperimentSpec& s, const std::string& v) { s.base.accessReqIntervalUs = ParseUnsigned<uint32_t>(v); }},
        {"payload_bytes",
         [](ExperimentSpec& s, const std::string& v) { s.base.payloadBytes = ParseUnsigned<uint32_t>(v); }},
        {"packet_interval_us",
         [](ExperimentSpec& s, const std::string& v) { s.base.packetIntervalUs = ParseUnsigned<uint32_t>(v); }},
        {"n_stas",
         [](ExperimentSpec& s, const std::string& v) {
             s.base.nStas = ParseUnsigned<uint32_t>(v);
             s.nStasList = {s.base.nStas};
         }},
        {"n_ra", [](ExperimentSpec& s, const std::string& v) { s.base.nRa = ParseUnsigned<uint32_t>(v); }},
        {"n_ra_basic", [](ExperimentSpec& s, const std::string& v) { s.base.nRaBasic = ParseUnsigned<uint32_t>(v); }},
        {"sim_duration_us",
         [](ExperimentSpec& s, const std::string& v) { s.base.simDurationUs = ParseUnsigned<uint64_t>(v); }},
        {"n_runs", [](ExperimentSpec& s, const std::string& v) { s.base.nRuns = ParseUnsigned<uint32_t>(v); }},
        {"sifs_us", [](ExperimentSpec& s, const std::string& v) { s.base.sifsUs = ParseUnsigned<uint32_t>(v); }},
        {"seed", [](ExperimentSpec& s, const std::string& v) { s.base.seed = ParseUnsigned<uint64_t>(v); }},
        {"allow_stale_allocation",
         [](ExperimentSpec& s, const std::string& v) { s.base.allowStaleAllocation = ParseBool(v); }},
        {"bsrp_sa_polling",
         [](ExperimentSpec& s, const std::string& v) { s.base.bsrpSaPolling = ParseBool(v); }},
        {"traffic",
         [](ExperimentSpec& s, const std::string& v) {
             if (v == "cbr")
             {
                 s.base.traffic = TrafficMode::CBR;
             }
             else if (v == "saturated")
             {
                 s.base.traffic = TrafficMode::SATURATED;
             }
             else if (v == "none")
             {
                 s.base.traffic = TrafficMode::NONE;
             }
             else
             {
                 throw ConfigError("traffic must be cbr, saturated or none");
             }
         }},
        {"queue_limit_packets",
         [](ExperimentSpec& s, const std::string& v) { s.base.queueLimitPackets = ParseUnsigned<uint32_t>(v); }},
        {"bsr_contention",
         [](ExperimentSpec& s, const std::string& v) {
             if (v == "on_change")
             {
                 s.base.bsrContention = BsrContention::ON_CHANGE;
             }
             else if (v == "backlogged")
             {
                 s.base.bsrContention = BsrContention::BACKLOGGED;
             }
             else
             {
                 throw ConfigError("bsr_contention must be on_change or backlogged");
             }
         }},
        {"bsr_frame_bytes",
         [](ExperimentSpec& s, const std::string& v) { s.base.bsrFrameBytes = ParseUnsigned<uint32_t>(v); }},
        {"mac_overhead_bytes",
         [](ExperimentSpec& s, const std::string& v) { s.base.macOverheadBytes = ParseUnsigned<uint32_t>(v); }},
        {"preamble_us", [](ExperimentSpec& s, const std::string& v) { s.base.preambleUs = ParseUnsigned<uint32_t>(v); }},
        {"beacon_frame_bytes",
         [](ExperimentSpec& s, const std::string& v) { s.base.beaconFrameBytes = ParseUnsigned<uint32_t>(v); }},
        {"mu_edca_aifsn",
         [](ExperimentSpec& s, const std::string& v) { s.base.muEdcaAifsn = ParseUnsigned<uint8_t>(v); }},
        {"mu_edca_timer_us",
         [](ExperimentSpec& s, const std::string& v) { s.base.muEdcaTimerUs = ParseUnsigned<uint64_t>(v); }},
        {"capture_first", [](ExperimentSpec& s, const std::string& v) { s.base.captureFirst = ParseBool(v); }},
        {"rate_table", [](ExperimentSpec& s, const std::string& v) { s.base.rateTableFile = v; }},
        {"n_stas_list",
         [](ExperimentSpec& s, const std::string& v) { s.nStasList = ParseList<uint32_t>(v); }},
        {"n_ra_list", [](ExperimentSpec& s, const std::string& v) { s.nRaList = ParseList<uint32_t>(v); }},
        {"bandwidth_list",
         [](ExperimentSpec& s, const std::string& v) {
             s.bandwidthList = ParseList<uint16_t>(v);
             for (auto bw : s.bandwidthList)
             {
                 DefaultTonesFor(bw);
             }
         }},
        {"oracle_tolerance",
         [](ExperimentSpec& s, const std::string& v) { s.oracleTolerance = ParseDouble(v); }},
        {"oracle_cycles",
         [](ExperimentSpec& s, const std::string& v) { s.oracleCycles = ParseUnsigned<uint64_t>(v); }},
    };
    return setters;
}

std::string
FormatValue(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

double
Reparse(double v)
{
    return std::strtod(FormatValue(v).c_str(), nullptr);
}

} // namespace

ExperimentSpec
ParseConfig(std::istream& in, const std::string& sourceName)
{
    ExperimentSpec spec;
    std::string line;
    size_t lineNo = 0;
    bool nStasListSet = false;
    while (std::getline(in, line))
    {
        ++lineNo;
        if (const auto hash = line.find('#'); hash != std::string::npos)
        {
            line.erase(hash);
        }
        line = Trim(line);
        if (line.empty())
        {
            continue;
        }
        const std::string where = sourceName + ":" + std::to_string(lineNo) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError(where + "expected 'key = value'");
        }
        const std::string key = Trim(line.substr(0, eq));
        const std::string value = Trim(line.substr(eq + 1));
        const auto setter = Setters().find(key);
        if (setter == Setters().end())
        {
            throw ConfigError(where + "unknown key '" + key + "'");
        }
        try
        {
            // n_stas narrows the sweep unless an explicit list is given
            if (key == "n_stas" && nStasListSet)
            {
                spec.base.nStas = ParseUnsigned<uint32_t>(value);
            }
            else
            {
                setter->second(spec, value);
            }
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(where + key + ": " + e.what());
        }
        catch (const std::exception& e)
        {
            throw ConfigError(where + key + ": " + e.what());
        }
        nStasListSet = nStasListSet || key == "n_stas_list";
    }

    if (spec.base.nRuns == 0)
    {
        throw ConfigError(sourceName + ": n_runs must be at least 1");
    }
    for (const auto& point : ExpandSweep(spec))
    {
        try
        {
            ValidateConfig(ConfigFor(spec, point));
            DurationModel check(ConfigFor(spec, point));
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(sourceName + ": bandwidth " + std::to_string(point.bandwidthMhz) +
                              " MHz, " + std::to_string(point.nStas) + " STAs, n_ra " +
                              std::to_string(point.nRa) + ": " + e.what());
        }
    }
    return spec;
}

ExperimentSpec
LoadConfig(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open config file " + path.string());
    }
    return ParseConfig(in, path.string());
}

std::vector<SweepPoint>
ExpandSweep(const ExperimentSpec& spec)
{
    const std::vector<uint16_t> bws =
        spec.bandwidthList.empty() ? std::vector<uint16_t>{spec.base.bandwidthMhz} : spec.bandwidthList;
    const std::vector<uint32_t> ras =
        spec.nRaList.empty() ? std::vector<uint32_t>{spec.base.nRa} : spec.nRaList;
    std::vector<SweepPoint> points;
    for (auto bw : bws)
    {
        for (auto n : spec.nStasList)
        {
            for (auto ra : ras)
            {
                points.push_back(SweepPoint{bw, n, ra});
            }
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

SimConfig
ConfigFor(const ExperimentSpec& spec, const SweepPoint& point)
{
    SimConfig config = spec.base;
    config.bandwidthMhz = point.bandwidthMhz;
    config.nStas = point.nStas;
    config.nRa = point.nRa;
    if (!spec.ruTonesExplicit)
    {
        config.ruTones = DefaultTonesFor(point.bandwidthMhz);
    }
    return config;
}

namespace
{

std::string
TraceFileName(const ResultRow& row)
{
    return "trace_bw" + std::to_string(row.point.bandwidthMhz) + "_n" + std::to_string(row.point.nStas) +
           "_ra" + std::to_string(row.point.nRa) + "_run" + std::to_string(row.run) + ".tsv";
}

std::vector<ResultRow>
RunAll(const ExperimentSpec& spec, unsigned jobs, const std::filesystem::path* traceDir)
{
    struct Job
    {
        SweepPoint point;
        uint32_t run;
    };
    std::vector<Job> work;
    for (const auto& point : ExpandSweep(spec))
    {
        for (uint32_t run = 0; run < spec.base.nRuns; ++run)
        {
            work.push_back(Job{point, run});
        }
    }
    std::vector<ResultRow> rows(work.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;

    auto worker = [&] {
        while (true)
        {
            const size_t i = next.fetch_add(1);
            if (i >= work.size())
            {
                return;
            }
            try
            {
                const Job& job = work[i];
                const SimConfig config = ConfigFor(spec, job.point);
                const uint64_t seed = spec.base.seed + job.run;
                RunOptions options;
                options.trace = traceDir != nullptr;
                const RunResult result = Run(config, seed, options);
                const Metrics& m = result.metrics;
                rows[i] = ResultRow{job.point,
                                    job.run,
                                    seed,
                                    m.ThroughputMbps(),
                                    m.RaSuccessRate(),
                                    m.RaCollisionRate(),
                                    m.RaIdleRate(),
                                    m.MeanDelayUs()};
                if (traceDir)
                {
                    std::ofstream out(*traceDir / TraceFileName(rows[i]));
                    result.trace.Write(out);
                }
            }
            catch (...)
            {
                std::lock_guard lock(failureMutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = work.size();
            }
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<size_t>(1, work.size()))));
    std::vector<std::thread> threads;
    for (unsigned j = 1; j < jobs; ++j)
    {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    return rows;
}

} // namespace

std::vector<ResultRow>
RunExperiments(const ExperimentSpec& spec, unsigned jobs)
{
    return RunAll(spec, jobs, nullptr);
}

void
WriteResultsCsv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << RESULTS_HEADER << '\n';
    for (const auto& r : rows)
    {
        os << r.point.bandwidthMhz << ',' << r.point.nStas << ',' << r.point.nRa << ',' << r.run << ','
           << r.seed << ',' << FormatValue(r.throughputMbps) << ',' << FormatValue(r.raSuccessRate)
           << ',' << FormatValue(r.raCollisionRate) << ',' << FormatValue(r.raIdleRate) << ','
           << FormatValue(r.meanDelayUs) << '\n';
    }
}

void
WriteSummaryCsv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << SUMMARY_HEADER << '\n';
    std::map<SweepPoint, std::vector<const ResultRow*>> groups;
    for (const auto& r : rows)
    {
        groups[r.point].push_back(&r);
    }
    const std::vector<double ResultRow::*> fields = {&ResultRow::throughputMbps,
                                                     &ResultRow::raSuccessRate,
                                                     &ResultRow::raCollisionRate,
                                                     &ResultRow::raIdleRate,
                                                     &ResultRow::meanDelayUs};
    for (const auto& [point, group] : groups)
    {
        os << point.bandwidthMhz << ',' << point.nStas << ',' << point.nRa << ',' << group.size();
        for (auto field : fields)
        {
            double sum = 0.0;
            for (const auto* r : group)
            {
                sum += Reparse(r->*field);
            }
            const double mean = sum / static_cast<double>(group.size());
            double sq = 0.0;
            for (const auto* r : group)
            {
                const double d = Reparse(r->*field) - mean;
                sq += d * d;
            }
            const double std = group.size() > 1 ? std::sqrt(sq / static_cast<double>(group.size() - 1)) : 0.0;
            os << ',' << FormatValue(mean) << ',' << FormatValue(std);
        }
        os << '\n';
    }
}

std::vector<ResultRow>
RunAndWrite(const ExperimentSpec& spec, unsigned jobs)
{
    std::error_code ec;
    std::filesystem::create_directories(spec.outDir, ec);
    const auto traceDir = spec.outDir / "traces";
    if (spec.trace)
    {
        std::filesystem::create_directories(traceDir, ec);
    }
    std::ofstream results(spec.outDir / "results.csv");
    std::ofstream summary(spec.outDir / "summary.csv");
    if (!results || !summary)
    {
        throw std::runtime_error("cannot write to output directory " + spec.outDir.string());
    }
    auto rows = RunAll(spec, jobs, spec.trace ? &traceDir : nullptr);
    WriteResultsCsv(results, rows);
    WriteSummaryCsv(summary, rows);
    return rows;
}

std::vector<OracleComparison>
CompareWithOracle(const ExperimentSpec& spec, const std::vector<ResultRow>& rows)
{
    std::map<SweepPoint, std::pair<double, uint32_t>> simulated;
    for (const auto& r : rows)
    {
        auto& [sum, count] = simulated[r.point];
        sum += r.throughputMbps;
        ++count;
    }
    std::vector<OracleComparison> report;
    for (const auto& [point, acc] : simulated)
    {
        const double sim = acc.first / acc.second;
        const SaturationEstimate est =
            EstimateSaturation(ConfigFor(spec, point), spec.oracleCycles, spec.base.seed);
        const double deviation =
            est.throughputMbps > 0.0 ? std::abs(sim - est.throughputMbps) / est.throughputMbps : 0.0;
        report.push_back(OracleComparison{point, sim, est.throughputMbps, deviation,
                                          deviation <= spec.oracleTolerance});
    }
    return report;
}

void
WriteOracleReport(std::ostream& os, const std::vector<OracleComparison>& report)
{
    os << "bandwidth_mhz,n_stas,n_ra,simulated_mbps,estimated_mbps,relative_deviation,result\n";
    for (const auto& c : report)
    {
        os << c.point.bandwidthMhz << ',' << c.point.nStas << ',' << c.point.nRa << ','
           << FormatValue(c.simulatedMbps) << ',' << FormatValue(c.estimatedMbps) << ','
           << FormatValue(c.relativeDeviation) << ',' << (c.pass ? "pass" : "FAIL") << '\n';
    }
}

} // namespace uora
