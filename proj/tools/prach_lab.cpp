// SPDX-License-Identifier: Apache-2.0
#include "prach/prach.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::vector<prach::DetectorConfig> parse_detectors(const std::vector<std::string>& items)
{
    // detector[/combiner], e.g. baseline/cc, cfo-aware
    std::vector<prach::DetectorConfig> out;
    for (const auto& item : items) {
        prach::DetectorConfig c;
        const auto slash = item.find('/');
        c.detector = prach::detector_from_string(item.substr(0, slash));
        if (slash != std::string::npos)
            c.combiner = prach::combiner_from_string(item.substr(slash + 1));
        out.push_back(c);
    }
    return out;
}

void write_file(const fs::path& path, const prach::ExperimentResult& r)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw prach::Error("cannot open " + path.string() + " for writing");
    prach::write_csv(f, r);
    if (!f)
        throw prach::Error("write failed: " + path.string());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"prach-lab: PRACH preamble detection experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Monte Carlo run of one scenario file");
    std::string scenario_path, out_path;
    long occasions = 100000;
    std::uint64_t seed = 0;
    int jobs = 1;
    std::vector<std::string> detectors;
    bool per_lag = false;
    bool no_analytic = false;
    std::string adapt = "calibrated";
    run->add_option("--scenario", scenario_path, "scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--occasions", occasions, "occasions per SNR point")->check(CLI::Range(1000L, 1000000000L));
    auto* seed_opt = run->add_option("--seed", seed, "overrides the scenario seed");
    run->add_option("--out", out_path, "output CSV (stdout when omitted)");
    run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--detectors", detectors, "detector[/pc|cc] list, e.g. baseline/cc cfo-aware");
    run->add_flag("--per-lag", per_lag, "also report per-lag false alarm rates");
    run->add_flag("--no-analytic", no_analytic, "skip analytic columns");
    run->add_option("--adapt-method", adapt, "threshold adaptation")->check(CLI::IsMember({"calibrated", "analytic"}));

    auto* fig = app.add_subcommand("figure", "regenerate the data of one figure");
    std::string fig_name, fig_out = ".";
    prach::FigureOptions fopt;
    fopt.seed = 42;
    fig->add_option("name", fig_name, "fig4 .. fig11")->required()->check(CLI::IsMember(prach::figure_names()));
    fig->add_option("--occasions", fopt.occasions, "occasions per SNR point")->check(CLI::Range(1000L, 1000000000L));
    fig->add_option("--out", fig_out, "output directory");
    fig->add_option("--seed", fopt.seed, "base seed");
    fig->add_option("--jobs", fopt.jobs, "worker threads")->check(CLI::PositiveNumber);
    fig->add_option("--analytic-mc", fopt.analytic_mc, "samples for the CFO false alarm integrals");

    auto* self = app.add_subcommand("selftest", "quick oracle and property checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            prach::RunPlan plan;
            plan.scenario = prach::load_scenario(scenario_path);
            plan.occasions = occasions;
            plan.jobs = jobs;
            if (*seed_opt)
                plan.seed = seed;
            plan.configs = parse_detectors(detectors);
            plan.per_lag = per_lag;
            plan.analytic = !no_analytic;
            plan.adapt_method = adapt == "analytic" ? prach::AdaptMethod::analytic : prach::AdaptMethod::calibrated;
            const auto result = prach::run(plan);
            if (out_path.empty())
                prach::write_csv(std::cout, result);
            else
                write_file(out_path, result);
        } else if (*fig) {
            const auto result = prach::figure_suite(fig_name, fopt);
            const fs::path path = fs::path(fig_out) / (fig_name + ".csv");
            write_file(path, result);
            std::cout << path.string() << ": " << result.rows.size() << " rows\n";
        } else if (*self) {
            return prach::selftest(std::cout) ? 0 : 1;
        }
    } catch (const prach::ValidationError& e) {
        for (const auto& i : e.issues())
            std::cerr << "invalid " << i.field << ": " << i.message << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
