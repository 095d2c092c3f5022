/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_EXPERIMENT_H
#define UORA_EXPERIMENT_H

#include "uora/engine.h"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace uora
{

struct ExperimentSpec
{
    SimConfig base;
    std::vector<uint32_t> nStasList{9, 18, 27, 36, 45, 54, 63, 72, 81, 90, 99};
    std::vector<uint32_t> nRaList;
    std::vector<uint16_t> bandwidthList;
    /// True when ru_tones was given; otherwise each bandwidth picks its own RU size.
    bool ruTonesExplicit{false};
    std::filesystem::path outDir{"results"};
    bool trace{false};
    /// Allowed relative deviation between simulator and estimator.
    double oracleTolerance{0.10};
    uint64_t oracleCycles{200'000};
};

/// RU size used for a bandwidth unless the configuration names one.
RuTones DefaultTonesFor(uint16_t bandwidthMhz);

/**
 * Parses "key = value" lines; '#' starts a comment. Unknown keys, bad values
 * and invalid resulting configurations throw ConfigError naming the line.
 */
ExperimentSpec ParseConfig(std::istream& in, const std::string& sourceName = "<config>");
ExperimentSpec LoadConfig(const std::filesystem::path& path);

struct SweepPoint
{
    uint16_t bandwidthMhz;
    uint32_t nStas;
    uint32_t nRa;

    auto operator<=>(const SweepPoint&) const = default;
};

/// Sweep points in output order: bandwidth, then STA count, then n_ra.
std::vector<SweepPoint> ExpandSweep(const ExperimentSpec& spec);

/// The base configuration specialized to one sweep point.
SimConfig ConfigFor(const ExperimentSpec& spec, const SweepPoint& point);

struct ResultRow
{
    SweepPoint point;
    uint32_t run;
    uint64_t seed;
    double throughputMbps;
    double raSuccessRate;
    double raCollisionRate;
    double raIdleRate;
    double meanDelayUs;
};

/// Runs every (sweep point, run) with up to `jobs` in parallel. Rows come
/// back sorted by sweep point and run whatever the job count.
std::vector<ResultRow> RunExperiments(const ExperimentSpec& spec, unsigned jobs = 1);

extern const char* const RESULTS_HEADER;
extern const char* const SUMMARY_HEADER;

void WriteResultsCsv(std::ostream& os, const std::vector<ResultRow>& rows);
/// Mean and sample standard deviation per sweep point, computed from the
/// values as written to results.csv.
void WriteSummaryCsv(std::ostream& os, const std::vector<ResultRow>& rows);

/// Writes results.csv, summary.csv and (with tracing on) one trace per run.
std::vector<ResultRow> RunAndWrite(const ExperimentSpec& spec, unsigned jobs = 1);

struct OracleComparison
{
    SweepPoint point;
    double simulatedMbps;
    double estimatedMbps;
    double relativeDeviation;
    bool pass;
};

/// Mean simulated throughput against the saturation estimator per sweep point.
std::vector<OracleComparison> CompareWithOracle(const ExperimentSpec& spec,
                                                const std::vector<ResultRow>& rows);

void WriteOracleReport(std::ostream& os, const std::vector<OracleComparison>& report);

} // namespace uora

#endif /* UORA_EXPERIMENT_H */
