/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/analytics.h"

#include "uora/random.h"
#include "uora/scheduler.h"
#include "uora/uora-backoff.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <stdexcept>
#include <vector>

namespace uora
{

double
ExpectedSuccessCount(uint32_t n, uint32_t m)
{
    if (m == 0)
    {
        throw std::invalid_argument("at least one RU is needed");
    }
    if (n == 0)
    {
        return 0.0;
    }
    return n * std::pow(1.0 - 1.0 / m, static_cast<double>(n - 1));
}

double
SuccessDistribution::Mean() const
{
    double mean = 0.0;
    for (const auto& [k, p] : probability)
    {
        mean += k * p;
    }
    return mean;
}

double
SuccessDistribution::MeanStandardError() const
{
    if (exact || samples < 2)
    {
        return 0.0;
    }
    const double mean = Mean();
    double var = 0.0;
    for (const auto& [k, p] : probability)
    {
        var += p * (k - mean) * (k - mean);
    }
    return std::sqrt(var / static_cast<double>(samples));
}

namespace
{

bool
FitsEnumeration(uint32_t n, uint32_t m)
{
    uint64_t total = 1;
    for (uint32_t i = 0; i < n; ++i)
    {
        total *= m;
        if (total > EXACT_ENUMERATION_LIMIT)
        {
            return false;
        }
    }
    return true;
}

SuccessDistribution
EnumerateSuccessDistribution(uint32_t n, uint32_t m)
{
    // odometer over all assignments with incremental occupancy bookkeeping
    std::vector<uint32_t> choice(n, 0);
    std::vector<uint32_t> occupancy(m, 0);
    occupancy[0] = n;
    uint32_t singles = (n == 1) ? 1 : 0;
    std::vector<uint64_t> histogram(std::min(n, m) + 1, 0);
    uint64_t total = 0;

    auto move = [&](uint32_t from, uint32_t to) {
        singles -= (occupancy[from] == 1);
        singles += (occupancy[from] == 2);
        --occupancy[from];
        singles -= (occupancy[to] == 1);
        singles += (occupancy[to] == 0);
        ++occupancy[to];
    };

    while (true)
    {
        ++histogram[singles];
        ++total;
        uint32_t digit = 0;
        while (digit < n && choice[digit] == m - 1)
        {
            move(m - 1, 0);
            choice[digit] = 0;
            ++digit;
        }
        if (digit == n)
        {
            break;
        }
        move(choice[digit], choice[digit] + 1);
        ++choice[digit];
    }

    SuccessDistribution dist;
    dist.exact = true;
    dist.samples = total;
    for (uint32_t k = 0; k < histogram.size(); ++k)
    {
        if (histogram[k] > 0)
        {
            dist.probability[k] = static_cast<double>(histogram[k]) / static_cast<double>(total);
            dist.standardError[k] = 0.0;
        }
    }
    return dist;
}

} // namespace

SuccessDistribution
SampleSuccessDistribution(uint32_t n, uint32_t m, uint64_t seed, uint64_t samples)
{
    if (m == 0 || samples == 0)
    {
        throw std::invalid_argument("sampling needs at least one RU and one sample");
    }
    RandomStream rng(seed, 0);
    std::vector<uint32_t> occupancy(m);
    std::vector<uint64_t> histogram(std::min(n, m) + 1, 0);
    for (uint64_t s = 0; s < samples; ++s)
    {
        std::fill(occupancy.begin(), occupancy.end(), 0);
        for (uint32_t i = 0; i < n; ++i)
        {
            ++occupancy[rng.UniformInt(0, m - 1)];
        }
        ++histogram[std::count(occupancy.begin(), occupancy.end(), 1u)];
    }
    SuccessDistribution dist;
    dist.exact = false;
    dist.samples = samples;
    const auto total = static_cast<double>(samples);
    for (uint32_t k = 0; k < histogram.size(); ++k)
    {
        if (histogram[k] > 0)
        {
            const double p = histogram[k] / total;
            dist.probability[k] = p;
            dist.standardError[k] = std::sqrt(p * (1.0 - p) / total);
        }
    }
    return dist;
}

SuccessDistribution
ComputeSuccessDistribution(uint32_t n, uint32_t m, uint64_t seed, uint64_t samples)
{
    if (m == 0)
    {
        throw std::invalid_argument("at least one RU is needed");
    }
    if (FitsEnumeration(n, m))
    {
        return EnumerateSuccessDistribution(n, m);
    }
    return SampleSuccessDistribution(n, m, seed, samples);
}

Time
CycleTime(const DurationModel& durations, const CycleShape& shape)
{
    const Time sifs = durations.Sifs();
    Time t = durations.AccessGap() + durations.Trigger(shape.bsrpAllocations) + sifs +
             durations.BsrPpdu();
    if (shape.bsrSuccesses > 0)
    {
        t += sifs + durations.MultiStaBa(shape.bsrSuccesses);
    }
    if (shape.basicAllocations == 0)
    {
        return t;
    }
    t += sifs + durations.Trigger(shape.basicAllocations) + sifs;
    t += shape.dataMpdus > 0 ? durations.DataPpdu(shape.dataMpdus) : durations.QosNullPpdu();
    if (shape.dataSuccesses > 0)
    {
        t += sifs + durations.MultiStaBa(shape.dataSuccesses);
    }
    return t;
}

Time
CycleTimeEstimate(const SimConfig& config)
{
    const DurationModel durations(config);
    const size_t rus = durations.Layout().GetCount();
    return CycleTime(durations, CycleShape{rus, rus, rus, durations.MaxMpdusPerGrant(), rus});
}

namespace
{

struct ChainTotals
{
    uint64_t bits{0};
    Time airtime{0};
    uint64_t served{0};
    uint64_t bsrSuccesses{0};
    uint64_t cycles{0};
};

ChainTotals
RunSaturationChain(const SimConfig& config, const DurationModel& durations, uint64_t cycles, uint64_t seed, uint64_t worker)
{
    const RuLayout& layout = durations.Layout();
    RoundRobinScheduler scheduler(config.MakePolicy());
    std::vector<std::unique_ptr<RandomStream>> rngs;
    std::vector<UoraBackoff> backoffs;
    std::vector<bool> pending(config.nStas + 1, true);
    const uint64_t streamBase = worker << 24;
    rngs.reserve(config.nStas);
    backoffs.reserve(config.nStas);
    for (Aid aid = 1; aid <= config.nStas; ++aid)
    {
        scheduler.Associate(aid);
        rngs.push_back(std::make_unique<RandomStream>(seed, streamBase + aid));
        backoffs.emplace_back(config.eocwMin, config.eocwMax, *rngs.back());
    }
    const uint32_t reportBytes = config.queueLimitPackets * config.payloadBytes;
    const uint32_t grantMpdus = durations.MaxMpdusPerGrant();
    const uint64_t grantBits = static_cast<uint64_t>(grantMpdus) * config.payloadBytes * 8;

    ChainTotals totals;
    std::vector<Transmission> transmissions;
    std::vector<Aid> raTransmitters;
    std::map<Aid, uint32_t> reports;

    auto contend = [&](Aid aid, uint32_t nRa, const std::vector<uint8_t>& raRus) {
        UoraBackoff& backoff = backoffs[aid - 1];
        if (backoff.ProcessTrigger(nRa) != TriggerDecision::TRANSMIT)
        {
            return false;
        }
        transmissions.push_back({aid, UoraBackoff::SelectRaRu(raRus, *rngs[aid - 1])});
        raTransmitters.push_back(aid);
        return true;
    };
    auto settle = [&](const RuOutcomes& outcomes) {
        for (Aid aid : raTransmitters)
        {
            const auto ru = std::find_if(transmissions.begin(), transmissions.end(),
                                         [aid](const Transmission& t) { return t.aid == aid; })
                                ->ruIndex;
            if (outcomes[ru].state == RuState::SUCCESS)
            {
                backoffs[aid - 1].OnSuccess(*rngs[aid - 1]);
            }
            else
            {
                backoffs[aid - 1].OnFailure(*rngs[aid - 1]);
            }
        }
    };

    for (uint64_t c = 0; c < cycles; ++c)
    {
        CycleShape shape;
        const TriggerFrame bsrp = scheduler.BuildBsrpTrigger(layout, durations.BsrpUlLengthUs());
        shape.bsrpAllocations = bsrp.allocations.size();
        const auto bsrpRa = bsrp.RandomAccessRus();
        const uint32_t nRaBsrp = bsrp.CountRandomAccess();
        transmissions.clear();
        raTransmitters.clear();
        reports.clear();
        for (Aid aid = 1; aid <= config.nStas; ++aid)
        {
            if (auto ru = bsrp.FindScheduledRu(aid))
            {
                transmissions.push_back({aid, *ru});
                reports[aid] = reportBytes;
                continue;
            }
            const bool wants = config.bsrContention == BsrContention::BACKLOGGED || pending[aid];
            if (nRaBsrp > 0 && wants && contend(aid, nRaBsrp, bsrpRa))
            {
                reports[aid] = reportBytes;
            }
        }
        RuOutcomes outcomes = ResolveReception(transmissions, layout.GetCount(), config.captureFirst);
        settle(outcomes);
        for (const auto& ru : outcomes)
        {
            if (ru.state == RuState::SUCCESS)
            {
                ++shape.bsrSuccesses;
                pending[ru.stations.front()] = false;
            }
        }
        scheduler.IngestBsrResults(outcomes, reports);

        auto basic = scheduler.BuildBasicTrigger(layout, UnusedRus(outcomes), durations.DataUlLengthUs());
        if (basic)
        {
            shape.basicAllocations = basic->allocations.size();
            const auto basicRa = basic->RandomAccessRus();
            const uint32_t nRaBasic = basic->CountRandomAccess();
            transmissions.clear();
            raTransmitters.clear();
            for (Aid aid = 1; aid <= config.nStas; ++aid)
            {
                if (auto ru = basic->FindScheduledRu(aid))
                {
                    transmissions.push_back({aid, *ru});
                }
                else if (nRaBasic > 0)
                {
                    contend(aid, nRaBasic, basicRa);
                }
            }
            shape.dataMpdus = transmissions.empty() ? 0 : grantMpdus;
            outcomes = ResolveReception(transmissions, layout.GetCount(), config.captureFirst);
            for (const auto& ru : outcomes)
            {
                if (ru.state == RuState::SUCCESS)
                {
                    const Aid aid = ru.stations.front();
                    ++shape.dataSuccesses;
                    scheduler.NotifyDelivered(aid, grantMpdus * config.payloadBytes);
                    pending[aid] = true;
                }
            }
            settle(outcomes);
        }
        totals.bits += shape.dataSuccesses * grantBits;
        totals.served += shape.dataSuccesses;
        totals.bsrSuccesses += shape.bsrSuccesses;
        totals.airtime += CycleTime(durations, shape);
        ++totals.cycles;
    }
    return totals;
}

} // namespace

SaturationEstimate
EstimateSaturation(const SimConfig& config, uint64_t cycles, uint64_t seed, uint32_t workers)
{
    const DurationModel durations(config);
    workers = std::max<uint32_t>(1, workers);
    std::vector<std::future<ChainTotals>> chains;
    for (uint32_t w = 0; w < workers; ++w)
    {
        const uint64_t share = cycles / workers + (w < cycles % workers ? 1 : 0);
        chains.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                                    [&config, &durations, share, seed, w] {
                                        return RunSaturationChain(config, durations, share, seed, w);
                                    }));
    }
    ChainTotals sum;
    for (auto& chain : chains)
    {
        const ChainTotals t = chain.get();
        sum.bits += t.bits;
        sum.airtime += t.airtime;
        sum.served += t.served;
        sum.bsrSuccesses += t.bsrSuccesses;
        sum.cycles += t.cycles;
    }

    SaturationEstimate estimate;
    estimate.cycles = sum.cycles;
    if (sum.cycles == 0)
    {
        return estimate;
    }
    const double airtimeUs = ToMicroSeconds(sum.airtime);
    estimate.throughputMbps = static_cast<double>(sum.bits) / airtimeUs;
    estimate.meanCycleUs = airtimeUs / static_cast<double>(sum.cycles);
    estimate.meanServedPerCycle = static_cast<double>(sum.served) / static_cast<double>(sum.cycles);
    estimate.meanBsrSuccesses = static_cast<double>(sum.bsrSuccesses) / static_cast<double>(sum.cycles);
    return estimate;
}

} // namespace uora
