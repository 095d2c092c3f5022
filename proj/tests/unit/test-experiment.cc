/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

#include "uora/errors.h"
#include "uora/experiment.h"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

using namespace uora;

namespace
{

ExperimentSpec
Parse(const std::string& text)
{
    std::istringstream in(text);
    return ParseConfig(in, "test.cfg");
}

std::vector<std::vector<std::string>>
SplitCsv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
        {
            fields.push_back(f);
        }
        rows.push_back(fields);
    }
    return rows;
}

} // namespace

TEST_CASE("empty config gives the defaults")
{
    const ExperimentSpec spec = Parse("");
    CHECK(spec.base.bandwidthMhz == 20);
    CHECK(spec.base.ruTones == RuTones::TONES_26);
    CHECK(spec.base.mcsIndex == 8);
    CHECK(spec.base.giUs == 0.8);
    CHECK(spec.base.txopUs == 2080);
    CHECK(spec.base.beaconIntervalUs == 204800);
    CHECK(spec.base.eocwMin == 5);
    CHECK(spec.base.eocwMax == 7);
    CHECK(spec.base.accessReqIntervalUs == 124);
    CHECK(spec.base.payloadBytes == 1700);
    CHECK(spec.base.GetPacketIntervalUs() == 520);
    CHECK(spec.base.simDurationUs == 15'000'000);
    CHECK(spec.base.nRuns == 5);
    CHECK(spec.nStasList == std::vector<uint32_t>{9, 18, 27, 36, 45, 54, 63, 72, 81, 90, 99});
    CHECK(ExpandSweep(spec).size() == 11);
}

TEST_CASE("single keys override only themselves")
{
    const ExperimentSpec spec = Parse("# comment\n  n_ra = 5   # trailing\n");
    CHECK(spec.base.nRa == 5);
    CHECK(spec.base.payloadBytes == 1700);
    CHECK(ExpandSweep(spec).front().nRa == 5);
}

TEST_CASE("sweep lists and bandwidth-specific RU sizes")
{
    const ExperimentSpec spec = Parse("bandwidth_list = 80, 20\nn_ra_list = 3,8\nn_stas_list = 9\n");
    const auto points = ExpandSweep(spec);
    REQUIRE(points.size() == 4);
    CHECK(points[0] == SweepPoint{20, 9, 3});
    CHECK(points[3] == SweepPoint{80, 9, 8});
    CHECK(ConfigFor(spec, points[3]).ruTones == RuTones::TONES_106);
    CHECK(ConfigFor(spec, points[0]).ruTones == RuTones::TONES_26);

    const ExperimentSpec pinned = Parse("ru_tones = 52\nbandwidth_mhz = 40\nn_stas = 4\n");
    CHECK(ConfigFor(pinned, ExpandSweep(pinned).front()).ruTones == RuTones::TONES_52);
    CHECK(ExpandSweep(pinned).size() == 1);
}

TEST_CASE("errors name the offending line")
{
    auto message = [](const std::string& text) {
        try
        {
            Parse(text);
        }
        catch (const ConfigError& e)
        {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(message("n_ra = 3\nbogus = 1\n").find("test.cfg:2") != std::string::npos);
    CHECK(message("n_ra = 3\nbogus = 1\n").find("bogus") != std::string::npos);
    CHECK(message("bandwidth_mhz = 25\n").find("test.cfg:1") != std::string::npos);
    CHECK(message("txop_us = fast\n").find("test.cfg:1") != std::string::npos);
    CHECK(message("just words\n").find("test.cfg:1") != std::string::npos);
    CHECK(message("n_ra = 12\n").find("n_ra") != std::string::npos);
    CHECK(message("n_runs = 0\n") != "no error");
    CHECK(message("traffic = bursty\n") != "no error");
    CHECK_THROWS_AS(LoadConfig("/nonexistent/sim.cfg"), ConfigError);
}

TEST_CASE("results are ordered, reproducible and job-count independent")
{
    const ExperimentSpec spec =
        Parse("n_stas_list = 3, 9\nn_ra_list = 1, 3\nn_runs = 2\nsim_duration_us = 100000\nseed = 40\n");
    const auto one = RunExperiments(spec, 1);
    const auto many = RunExperiments(spec, 4);
    std::ostringstream a;
    std::ostringstream b;
    WriteResultsCsv(a, one);
    WriteResultsCsv(b, many);
    CHECK(a.str() == b.str());

    const auto rows = SplitCsv(a.str());
    REQUIRE(rows.size() == 1 + 8);
    CHECK(rows[0].size() == 10);
    CHECK(a.str().rfind(std::string(RESULTS_HEADER) + "\n", 0) == 0);
    CHECK(rows[1][4] == "40");
    CHECK(rows[2][4] == "41");
}

TEST_CASE("summary means recompute from results")
{
    const ExperimentSpec spec = Parse("n_stas_list = 5, 20\nn_runs = 3\nsim_duration_us = 100000\n");
    const auto rows = RunExperiments(spec, 2);
    std::ostringstream results;
    std::ostringstream summary;
    WriteResultsCsv(results, rows);
    WriteSummaryCsv(summary, rows);

    std::map<std::string, std::vector<std::vector<double>>> groups;
    const auto r = SplitCsv(results.str());
    for (size_t i = 1; i < r.size(); ++i)
    {
        std::vector<double> values;
        for (size_t c = 5; c < 10; ++c)
        {
            values.push_back(std::strtod(r[i][c].c_str(), nullptr));
        }
        groups[r[i][0] + "," + r[i][1] + "," + r[i][2]].push_back(values);
    }
    const auto s = SplitCsv(summary.str());
    REQUIRE(s.size() == 3);
    CHECK(s[0].size() == 14);
    for (size_t i = 1; i < s.size(); ++i)
    {
        const auto& g = groups.at(s[i][0] + "," + s[i][1] + "," + s[i][2]);
        CHECK(s[i][3] == std::to_string(g.size()));
        for (size_t f = 0; f < 5; ++f)
        {
            double sum = 0.0;
            for (const auto& v : g)
            {
                sum += v[f];
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", sum / g.size());
            CHECK(s[i][4 + 2 * f] == buf);
        }
    }
}

TEST_CASE("one run has zero spread")
{
    const ExperimentSpec spec = Parse("n_stas = 4\nn_runs = 1\nsim_duration_us = 50000\n");
    std::ostringstream summary;
    WriteSummaryCsv(summary, RunExperiments(spec));
    const auto s = SplitCsv(summary.str());
    REQUIRE(s.size() == 2);
    for (size_t f = 0; f < 5; ++f)
    {
        CHECK(s[1][5 + 2 * f] == "0.000000");
    }
}

TEST_CASE("oracle comparison")
{
    const ExperimentSpec single =
        Parse("n_stas = 1\nn_runs = 2\nsim_duration_us = 1000000\noracle_cycles = 2000\noracle_tolerance = 0.02\n");
    const auto report = CompareWithOracle(single, RunExperiments(single));
    REQUIRE(report.size() == 1);
    CHECK(report[0].pass);
    CHECK(report[0].relativeDeviation < 0.02);
    CHECK(CompareWithOracle(single, {}).empty());
}
