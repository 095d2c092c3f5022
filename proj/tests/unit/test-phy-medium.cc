/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/errors.h"
#include "uora/phy-medium.h"
#include "uora/random.h"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace uora;

namespace
{

const Time GI_08 = Time(800);

} // namespace

TEST_CASE("RU geometry")
{
    CHECK(RuLayout(20, RuTones::TONES_26).GetCount() == 9);
    CHECK(RuLayout(20, RuTones::TONES_52).GetCount() == 4);
    CHECK(RuLayout(80, RuTones::TONES_106).GetCount() == 8);
    CHECK(RuLayout(160, RuTones::TONES_242).GetCount() == 8);
    CHECK_THROWS_AS(RuLayout(25, RuTones::TONES_26), ConfigError);
    CHECK(DataSubcarriers(RuTones::TONES_26) == 24);
    CHECK(DataSubcarriers(RuTones::TONES_52) == 48);
    CHECK(DataSubcarriers(RuTones::TONES_106) == 102);
    CHECK(DataSubcarriers(RuTones::TONES_242) == 234);
}

TEST_CASE("rate spot values")
{
    PhyRateTable table;
    // 24 subcarriers x 8 bits x 3/4 per 13.6 us symbol
    CHECK(table.GetDataRate(RuTones::TONES_26, 8, GI_08) == doctest::Approx(144.0 / 13.6).epsilon(1e-12));
    CHECK(table.GetDataRate(RuTones::TONES_106, 8, GI_08) == doctest::Approx(45.0).epsilon(1e-12));
    // MCS 0: BPSK 1/2
    CHECK(table.GetDataRate(RuTones::TONES_242, 0, Time(3200)) == doctest::Approx(117.0 / 16.0).epsilon(1e-12));
    // MCS 11: 1024-QAM 5/6
    CHECK(table.GetDataRate(RuTones::TONES_52, 11, Time(1600)) == doctest::Approx(400.0 / 14.4).epsilon(1e-12));
    CHECK(PhyRateTable::GetSymbolDuration(GI_08) == Time(13600));
    CHECK_THROWS_AS(table.GetDataRate(RuTones::TONES_26, 12, GI_08), ConfigError);
}

TEST_CASE("rate overrides")
{
    PhyRateTable table;
    std::istringstream in("# custom\n26,8,0.8,20.0\n\n106, 3, 1.6, 12.5\n");
    table.LoadOverrides(in);
    CHECK(table.GetDataRate(RuTones::TONES_26, 8, GI_08) == 20.0);
    CHECK(table.GetDataRate(RuTones::TONES_106, 3, Time(1600)) == 12.5);

    std::istringstream bad("26,8\n");
    CHECK_THROWS_AS(table.LoadOverrides(bad), ConfigError);
    CHECK_THROWS_AS(table.LoadOverridesFromFile("/nonexistent/rates.txt"), ConfigError);
}

TEST_CASE("frame duration")
{
    PhyRateTable table;
    CHECK(FrameDuration(table, 0, RuTones::TONES_26, 8, GI_08) == MicroSeconds(40));
    // 1700 B = 13600 bits over 144 bits/symbol -> 95 symbols
    const Time oneMpdu = FrameDuration(table, 1700, RuTones::TONES_26, 8, GI_08);
    CHECK(oneMpdu == MicroSeconds(40) + 95 * Time(13600));
    CHECK(oneMpdu <= MicroSeconds(2080));
    // 612 bits/symbol: 13600 bits -> 23 symbols
    CHECK(FrameDuration(table, 1700, RuTones::TONES_106, 8, GI_08) == MicroSeconds(40) + 23 * Time(13600));
}

TEST_CASE("frame duration is a staircase with symbol-sized steps")
{
    PhyRateTable table;
    const Time symbol = PhyRateTable::GetSymbolDuration(GI_08);
    Time prev = FrameDuration(table, 0, RuTones::TONES_26, 8, GI_08);
    for (uint64_t bytes = 1; bytes <= 4000; ++bytes)
    {
        const Time d = FrameDuration(table, bytes, RuTones::TONES_26, 8, GI_08);
        REQUIRE(d >= prev);
        REQUIRE((d - prev == Time(0) || d - prev == symbol));
        REQUIRE((d - MicroSeconds(40)) % symbol == Time(0));
        prev = d;
    }
}

TEST_CASE("control frames at 6 Mb/s")
{
    // 20 us preamble + ceil((16 + 8 * bytes + 6) / 24) x 4 us
    CHECK(ControlFrameDuration(0, ControlRate{}) == MicroSeconds(24));
    CHECK(ControlFrameDuration(14, ControlRate{}) == MicroSeconds(20 + 6 * 4));
    CHECK(TriggerFrameBytes(4) == 48);
    CHECK(MultiStaBlockAckBytes(2) == 46);
    CHECK(ControlFrameDuration(TriggerFrameBytes(9), ControlRate{}) == MicroSeconds(20 + 26 * 4));
}

TEST_CASE("reception: worked example")
{
    const std::vector<Transmission> tx = {{2, 0}, {8, 0}, {3, 2}, {5, 3}};
    const RuOutcomes out = ResolveReception(tx, 4);
    REQUIRE(out.size() == 4);
    CHECK(out[0].state == RuState::COLLISION);
    CHECK(out[0].stations == std::vector<Aid>{2, 8});
    CHECK(out[1].state == RuState::IDLE);
    CHECK(out[2].state == RuState::SUCCESS);
    CHECK(out[2].stations == std::vector<Aid>{3});
    CHECK(out[3].stations == std::vector<Aid>{5});

    const RuOutcomes captured = ResolveReception(tx, 4, true);
    CHECK(captured[0].state == RuState::SUCCESS);
    CHECK(captured[0].stations == std::vector<Aid>{2});
}

TEST_CASE("reception: edge cases")
{
    const RuOutcomes idle = ResolveReception({}, 9);
    CHECK(std::all_of(idle.begin(), idle.end(), [](const RuReception& r) { return r.state == RuState::IDLE; }));
    const std::vector<Transmission> dup = {{1, 0}, {1, 1}};
    CHECK_THROWS_AS(ResolveReception(dup, 2), std::logic_error);
    const std::vector<Transmission> outside = {{1, 5}};
    CHECK_THROWS_AS(ResolveReception(outside, 2), std::logic_error);
}

TEST_CASE("reception is order independent and accounts for every RU")
{
    RandomStream rng(99, 0);
    for (int trial = 0; trial < 2000; ++trial)
    {
        const auto rus = static_cast<uint32_t>(rng.UniformInt(1, 9));
        const auto n = rng.UniformInt(0, 20);
        std::vector<Transmission> tx;
        for (uint64_t i = 0; i < n; ++i)
        {
            tx.push_back({static_cast<Aid>(i + 1), static_cast<uint32_t>(rng.UniformInt(0, rus - 1))});
        }
        const RuOutcomes base = ResolveReception(tx, rus);
        for (size_t i = tx.size(); i > 1; --i)
        {
            std::swap(tx[i - 1], tx[rng.UniformInt(0, i - 1)]);
        }
        REQUIRE(ResolveReception(tx, rus) == base);

        size_t transmitters = 0;
        for (const auto& r : base)
        {
            transmitters += r.stations.size();
            REQUIRE((r.state == RuState::IDLE) == r.stations.empty());
            REQUIRE((r.state == RuState::SUCCESS) == (r.stations.size() == 1));
        }
        REQUIRE(base.size() == rus);
        REQUIRE(transmitters == n);
    }
}

TEST_CASE("padding to the longest PPDU")
{
    const std::vector<Time> one = {MicroSeconds(500)};
    CHECK(PadToLongest(one) == MicroSeconds(500));
    const std::vector<Time> three = {MicroSeconds(300), MicroSeconds(500), MicroSeconds(480)};
    CHECK(PadToLongest(three) == MicroSeconds(500));
    CHECK_THROWS_AS(PadToLongest({}), std::logic_error);
}
