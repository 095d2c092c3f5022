/*
 * Copyright (c) 2026
 *
 * SPDX-License-Identifier: GPL-2.0-only
 */

// Batch runner: sweeps STA counts, RA RU counts and bandwidths, writes
// results.csv and summary.csv, and optionally checks the simulator against
// the saturation estimator.

#include "uora/errors.h"
#include "uora/experiment.h"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

int
main(int argc, char** argv)
{
    CLI::App app{"UL OFDMA random access simulator"};
    std::string configPath;
    std::string outDir = "results";
    std::optional<uint64_t> seed;
    bool trace = false;
    bool compareOracle = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    app.add_option("--config", configPath, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", outDir, "output directory");
    app.add_option("--seed", seed, "base seed; run r uses seed + r");
    app.add_flag("--trace", trace, "write a per-run event trace");
    app.add_flag("--compare-oracle", compareOracle, "compare throughput with the saturation estimator");
    app.add_option("--jobs", jobs, "parallel runs")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    uora::ExperimentSpec spec;
    try
    {
        spec = configPath.empty() ? uora::ExperimentSpec{} : uora::LoadConfig(configPath);
    }
    catch (const uora::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    spec.outDir = outDir;
    spec.trace = spec.trace || trace;
    if (seed)
    {
        spec.base.seed = *seed;
    }

    std::vector<uora::ResultRow> rows;
    try
    {
        rows = uora::RunAndWrite(spec, jobs);
    }
    catch (const uora::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << "wrote " << rows.size() << " runs to " << spec.outDir.string() << '\n';

    if (compareOracle)
    {
        const auto report = uora::CompareWithOracle(spec, rows);
        uora::WriteOracleReport(std::cout, report);
        for (const auto& c : report)
        {
            if (!c.pass)
            {
                return 2;
            }
        }
    }
    return 0;
}
