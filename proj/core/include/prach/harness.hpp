// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/receiver.hpp"
#include "prach/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prach {

enum class DetectorKind { baseline, cfo_aware, conventional, cfo_aware_adapted };

std::string_view to_string(DetectorKind d);
DetectorKind detector_from_string(std::string_view s);

struct DetectorConfig {
    DetectorKind detector = DetectorKind::baseline;
    Combiner combiner = Combiner::pc;
};

enum class AdaptMethod { calibrated, analytic };

struct RunPlan {
    Scenario scenario;
    std::vector<DetectorConfig> configs; // empty: default_configs(scenario)
    long occasions = 100000;
    int jobs = 1;
    std::optional<std::uint64_t> seed; // overrides scenario.seed
    bool analytic = true;
    long analytic_mc = 20000;
    AdaptMethod adapt_method = AdaptMethod::calibrated;
    long calibration_occasions = 0; // 0: twice `occasions`
    int group_span = 0;
    bool per_lag = false;
};

struct ResultRow {
    std::string scenario_id;
    double snr_db = 0.0;
    std::string detector;
    std::string combiner;
    std::string coherence;
    std::string metric; // p_td, p_fa (p_fa_lag when per-lag rows are requested)
    std::optional<double> analytic;
    double empirical = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    long n_occasions = 0;
    std::uint64_t seed = 0;
    long events = 0;
    long trials = 0;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<std::pair<double, double>> adapted_scale; // (snr, base scale) when adaptation ran

    const ResultRow* find(std::string_view scenario_id, double snr_db, DetectorKind d, Combiner c,
                          std::string_view metric) const;
    void append(const ExperimentResult& other);
};

// 95% Wilson score interval
std::pair<double, double> wilson_interval(long events, long trials, double z = 1.959963984540054);

std::vector<DetectorConfig> default_configs(const Scenario& s);

// Compares the mu shortcut with the full received-grid path for one channel draw; throws on mismatch.
double check_fast_path(const Scenario& s, std::uint64_t seed);

ExperimentResult run(const RunPlan& plan);

// Base-threshold scale for the CFO-aware detector estimated by simulating the detector on an
// independent stream and solving for the target occasion false alarm rate.
double adapt_base_scale_calibrated(const Scenario& s, double snr_db, long occasions, std::uint64_t seed,
                                   int group_span = 0);

void write_csv(std::ostream& out, const ExperimentResult& r);
std::string format_g9(double v);

// Experiment suites that regenerate the data of the published figures.
std::vector<std::string> figure_names();
struct FigureOptions {
    long occasions = 100000;
    int jobs = 1;
    std::uint64_t seed = 42;
    long analytic_mc = 20000;
};
ExperimentResult figure_suite(std::string_view name, const FigureOptions& opt);
std::vector<Scenario> figure_scenarios(std::string_view name);

} // namespace prach
