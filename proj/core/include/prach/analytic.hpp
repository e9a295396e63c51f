// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/receiver.hpp"
#include "prach/rng.hpp"
#include "prach/scenario.hpp"

#include <utility>
#include <vector>

namespace prach {

struct CaseParams {
    Combiner combiner = Combiner::pc;
    Coherence coherence = Coherence::independent;
    int n_ant = 1;
    int n_rep = 1;
    double sigma2_z = 0.0; // per-component variance of the correlator noise

    bool cfo_capable() const
    {
        return combiner == Combiner::pc && (coherence == Coherence::independent || n_rep == 1);
    }
};

// sigma_z^2 = sigma_w^2 / length at the given SNR
CaseParams make_case(const Scenario& s, Combiner c, double snr_db);

enum class Hypothesis { h0, h1 };
enum class CfoMode { exact, none };

// Total variance of mu_{u0}[k] per lag (sigma_h^2 = 1).
struct VarianceProfile {
    std::vector<double> sigma2;
    Hypothesis hypothesis = Hypothesis::h0;
    int root = 0;
};

// H0 sums devices on other roots, H1 adds the devices on u0.
VarianceProfile variance_profile(const Scenario& s, int u0, Hypothesis h, CfoMode mode);

// sigma-hat^2 used for threshold design: expected interferers / length.
double design_sigma2(const Scenario& s);

double ccdf_psi(const CaseParams& c, double sigma2, double psi);
double threshold(const CaseParams& c, double sigma2_h0, double p_fa_sample);
double p_td(const CaseParams& c, double sigma2_h1, double thr);

int inter_sample_distance(int u, int length);

struct ThresholdSet {
    double base = 0.0;
    std::vector<double> cfo_per_lag;
    std::vector<double> effective;
};

std::vector<double> cfo_threshold_profile(const CaseParams& c, const VarianceProfile& h0, double p_fa_sample);
ThresholdSet make_threshold_set(double base, std::vector<double> cfo_per_lag);

// 1 - prod over roots and lags of (1 - CCDF(thr[r][k])), skipping the listed (root index, lag) pairs.
double total_pfa_analytic(const CaseParams& c,
                          const std::vector<std::vector<double>>& thresholds,
                          const std::vector<std::vector<double>>& sigma2,
                          const std::vector<std::pair<int, int>>& excluded = {});

struct McEstimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    long samples = 0;
};

// Probability that the replica at (k_t + d) mod length is selected instead of the device's true peak.
// `thr` belongs to the device's root; `h0` is the interference profile on that root.
McEstimate p_fa_cfo_device(const Scenario& s, int device, const CaseParams& c, const ThresholdSet& thr,
                           const VarianceProfile& h0, long n_mc, Rng& rng);

double p_td_cfo(const Scenario& s, int device, const CaseParams& c, const ThresholdSet& thr, const VarianceProfile& h1);

// Thresholds of the CFO-aware detector for every configured root at one SNR.
struct CfoThresholds {
    CaseParams cs;
    double p_fa_sample = 0.0;
    std::vector<ThresholdSet> per_root;
    std::vector<VarianceProfile> h0;
    std::vector<VarianceProfile> h1;
};

CfoThresholds cfo_thresholds(const Scenario& s, double snr_db, double base_scale = 1.0);

// p_noise_plus_inter: false alarms from noise and other-root interference at the effective thresholds.
double noise_plus_inter(const Scenario& s, const CfoThresholds& t);

// noise_plus_inter + sum over devices of p_fa_cfo_device
McEstimate predicted_pfa_cfo(const Scenario& s, const CfoThresholds& t, long n_mc, std::uint64_t seed);

// Base threshold scale f solving predicted_pfa_cfo(f) = p_fa_des.
double adapt_base_scale_analytic(const Scenario& s, double snr_db, long n_mc, std::uint64_t seed);

} // namespace prach
