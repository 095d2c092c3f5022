/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/analytics.h"
#include "uora/phy-medium.h"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace uora;

namespace
{

// Counts singleton RUs over every assignment by recursion; shares nothing with the library.
void
BruteForce(uint32_t n, uint32_t m, std::vector<uint32_t>& occ, uint32_t i, std::vector<uint64_t>& hist)
{
    if (i == n)
    {
        uint32_t singles = 0;
        for (uint32_t c : occ)
        {
            singles += (c == 1);
        }
        ++hist[singles];
        return;
    }
    for (uint32_t ru = 0; ru < m; ++ru)
    {
        ++occ[ru];
        BruteForce(n, m, occ, i + 1, hist);
        --occ[ru];
    }
}

std::vector<uint64_t>
BruteHistogram(uint32_t n, uint32_t m)
{
    std::vector<uint32_t> occ(m, 0);
    std::vector<uint64_t> hist(n + 1, 0);
    BruteForce(n, m, occ, 0, hist);
    return hist;
}

} // namespace

TEST_CASE("expected success count: small cases")
{
    CHECK(ExpectedSuccessCount(0, 5) == 0.0);
    for (uint32_t m = 1; m <= 9; ++m)
    {
        CHECK(ExpectedSuccessCount(1, m) == 1.0);
    }
    const auto hist = BruteHistogram(3, 3);
    uint64_t singles = 0;
    uint64_t total = 0;
    for (size_t k = 0; k < hist.size(); ++k)
    {
        singles += k * hist[k];
        total += hist[k];
    }
    CHECK(total == 27);
    CHECK(singles == 36);
    CHECK(ExpectedSuccessCount(3, 3) == doctest::Approx(36.0 / 27.0).epsilon(1e-14));
}

TEST_CASE("expected success count is bounded and unimodal")
{
    for (uint32_t m = 1; m <= 12; ++m)
    {
        double prev = 0.0;
        bool falling = false;
        uint32_t peak = 0;
        double best = -1.0;
        for (uint32_t n = 0; n <= 10 * m; ++n)
        {
            const double e = ExpectedSuccessCount(n, m);
            REQUIRE(e <= std::min<double>(n, m) + 1e-12);
            if (e < prev - 1e-12)
            {
                falling = true;
            }
            else if (falling && e > prev + 1e-12)
            {
                FAIL("second rise at n=" << n << " m=" << m);
            }
            if (e > best)
            {
                best = e;
                peak = n;
            }
            prev = e;
        }
        CHECK(peak >= m - 1);
        CHECK(peak <= m + 1);
    }
}

TEST_CASE("exact distribution equals brute force")
{
    for (uint32_t n = 0; n <= 6; ++n)
    {
        for (uint32_t m = 1; m <= 5; ++m)
        {
            const auto hist = BruteHistogram(n, m);
            const auto dist = ComputeSuccessDistribution(n, m);
            REQUIRE(dist.exact);
            double total = 0.0;
            for (const auto& [k, p] : dist.probability)
            {
                total += p;
            }
            REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
            const double denom = std::pow(static_cast<double>(m), n);
            for (size_t k = 0; k < hist.size(); ++k)
            {
                const double p = dist.probability.count(k) ? dist.probability.at(k) : 0.0;
                REQUIRE(p == doctest::Approx(hist[k] / denom).epsilon(1e-12));
            }
            REQUIRE(dist.Mean() == doctest::Approx(ExpectedSuccessCount(n, m)).epsilon(1e-9));
        }
    }
}

TEST_CASE("distribution examples")
{
    const auto two = ComputeSuccessDistribution(2, 2);
    CHECK(two.probability.size() == 2);
    CHECK(two.probability.at(0) == 0.5);
    CHECK(two.probability.at(2) == 0.5);
    const auto lone = ComputeSuccessDistribution(1, 5);
    CHECK(lone.probability.size() == 1);
    CHECK(lone.probability.at(1) == 1.0);
}

TEST_CASE("sampling agrees with enumeration")
{
    for (auto [n, m] : {std::pair{4u, 4u}, std::pair{6u, 3u}, std::pair{7u, 9u}})
    {
        const auto exact = ComputeSuccessDistribution(n, m);
        const auto sampled = SampleSuccessDistribution(n, m, 17, 200'000);
        CHECK_FALSE(sampled.exact);
        for (const auto& [k, p] : exact.probability)
        {
            const double q = sampled.probability.count(k) ? sampled.probability.at(k) : 0.0;
            const double se = std::sqrt(p * (1.0 - p) / 200'000.0);
            CHECK(std::abs(q - p) <= 4.0 * se + 1e-12);
        }
        CHECK(std::abs(sampled.Mean() - exact.Mean()) <= 3.0 * sampled.MeanStandardError());
    }
    // beyond the enumeration bound the result is sampled
    const auto big = ComputeSuccessDistribution(18, 9, 3, 100'000);
    CHECK_FALSE(big.exact);
    CHECK(std::abs(big.Mean() - ExpectedSuccessCount(18, 9)) <= 4.0 * big.MeanStandardError());
}

TEST_CASE("cycle time adds up the frame sequence")
{
    SimConfig c;
    const DurationModel d(c);
    const Time full = CycleTime(d, CycleShape{9, 9, 9, 1, 9});
    const Time expected = MicroSeconds(124) + d.Trigger(9) + d.BsrPpdu() + d.MultiStaBa(9) + d.Trigger(9) +
                          d.DataPpdu(1) + d.MultiStaBa(9) + 5 * MicroSeconds(16);
    CHECK(full == expected);
    CHECK(CycleTimeEstimate(c) == expected);
    // no BSR decoded, no Basic trigger
    CHECK(CycleTime(d, CycleShape{9, 0, 0, 0, 0}) == MicroSeconds(124) + d.Trigger(9) + MicroSeconds(16) + d.BsrPpdu());
}

TEST_CASE("single-station estimate is the closed form")
{
    SimConfig c;
    c.nStas = 1;
    const auto est = EstimateSaturation(c, 1000, 1);
    const DurationModel d(c);
    const double expected = 1700.0 * 8.0 / ToMicroSeconds(CycleTime(d, CycleShape{9, 1, 1, 1, 1}));
    CHECK(est.throughputMbps == doctest::Approx(expected).epsilon(1e-12));
    CHECK(est.meanServedPerCycle == 1.0);
}

TEST_CASE("estimates respect capacity and the bandwidth ratio")
{
    SimConfig narrow;
    narrow.nStas = 9;
    SimConfig wide = narrow;
    wide.bandwidthMhz = 80;
    wide.ruTones = RuTones::TONES_106;
    const auto a = EstimateSaturation(narrow, 20'000, 1);
    const auto b = EstimateSaturation(wide, 20'000, 1);
    PhyRateTable table;
    CHECK(a.throughputMbps <= 9 * table.GetDataRate(RuTones::TONES_26, 8, Time(800)));
    CHECK(b.throughputMbps <= 8 * table.GetDataRate(RuTones::TONES_106, 8, Time(800)));
    const double ratio = b.throughputMbps / a.throughputMbps;
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.3);
}

TEST_CASE("estimate is deterministic and splits across workers")
{
    SimConfig c;
    c.nStas = 45;
    const auto a = EstimateSaturation(c, 10'000, 4);
    const auto b = EstimateSaturation(c, 10'000, 4);
    CHECK(a.throughputMbps == b.throughputMbps);
    const auto split = EstimateSaturation(c, 10'000, 4, 3);
    CHECK(split.cycles == 10'000);
    CHECK(split.throughputMbps == doctest::Approx(a.throughputMbps).epsilon(0.02));
}
