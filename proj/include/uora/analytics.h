/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#ifndef UORA_ANALYTICS_H
#define UORA_ANALYTICS_H

#include "uora/engine.h"
#include "uora/time.h"

#include <cstdint>
#include <map>

namespace uora
{

/// n transmitters each picking one of m RUs uniformly: mean number of singleton RUs.
double ExpectedSuccessCount(uint32_t n, uint32_t m);

struct SuccessDistribution
{
    /// k successes -> probability
    std::map<uint32_t, double> probability;
    /// Per-entry standard error; all zero for an exact result.
    std::map<uint32_t, double> standardError;
    bool exact{true};
    uint64_t samples{0};

    double Mean() const;
    /// Standard error of Mean(); zero when exact.
    double MeanStandardError() const;
};

/// Largest m^n enumerated exhaustively.
constexpr uint64_t EXACT_ENUMERATION_LIMIT = 10'000'000;

/**
 * Distribution of the singleton-RU count. Enumerates all m^n assignments when
 * that is at most EXACT_ENUMERATION_LIMIT, otherwise samples.
 */
SuccessDistribution ComputeSuccessDistribution(uint32_t n,
                                               uint32_t m,
                                               uint64_t seed = 1,
                                               uint64_t samples = 1'000'000);

/// Same as above but always sampled, for cross-checking the exact path.
SuccessDistribution SampleSuccessDistribution(uint32_t n,
                                              uint32_t m,
                                              uint64_t seed,
                                              uint64_t samples);

/// Frame counts that determine the airtime of one cycle.
struct CycleShape
{
    size_t bsrpAllocations{0};
    /// Decoded BSRs; zero skips the first Multi-STA BA.
    size_t bsrSuccesses{0};
    /// Zero means the AP sent no Basic trigger.
    size_t basicAllocations{0};
    /// Longest data PPDU in MPDUs; zero for a phase of QoS Nulls only.
    uint32_t dataMpdus{0};
    /// Decoded data PPDUs; zero skips the second Multi-STA BA.
    size_t dataSuccesses{0};
};

/**
 * access gap + BSRP TF + SIFS + BSR + [SIFS + M-BA] + SIFS + Basic TF + SIFS
 * + data + [SIFS + M-BA]. Beacons are not included.
 */
Time CycleTime(const DurationModel& durations, const CycleShape& shape);

/// Cycle in which every RU of the layout is allocated in both triggers and
/// every data RU carries a full grant that is acknowledged.
Time CycleTimeEstimate(const SimConfig& config);

struct SaturationEstimate
{
    double throughputMbps{0.0};
    double meanCycleUs{0.0};
    /// Data PPDUs acknowledged per cycle.
    double meanServedPerCycle{0.0};
    double meanBsrSuccesses{0.0};
    uint64_t cycles{0};
};

/**
 * Full-buffer throughput estimate. Runs the scheduler and back-off state
 * machines cycle by cycle, without the event engine, with every station
 * permanently backlogged. Throughput is the ratio of delivered bits to the
 * summed cycle durations. The cycles are split over `workers` independent
 * chains seeded (seed, worker).
 */
SaturationEstimate EstimateSaturation(const SimConfig& config,
                                      uint64_t cycles = 1'000'000,
                                      uint64_t seed = 1,
                                      uint32_t workers = 1);

} // namespace uora

#endif /* UORA_ANALYTICS_H */
