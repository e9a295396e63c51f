// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/scenario.hpp"

#include <utility>
#include <vector>

namespace prach {

enum class PeakClass { true_candidate, discarded_cfo_replica, discarded_interference };

struct Peak {
    int root_index = 0;
    int lag = 0;
    double psi = 0.0;
    PeakClass cls = PeakClass::true_candidate;
};

struct DetectionReport {
    std::vector<Peak> peaks; // every candidate exactly once

    void clear() { peaks.clear(); }
    std::vector<std::pair<int, int>> accepted() const;
    bool accepted_at(int root_index, int lag) const;
};

using PsiSet = std::vector<std::vector<double>>; // [root index][lag]

// Accept every lag with psi > threshold of its root.
void detect_baseline(const PsiSet& psi, const std::vector<double>& thr, DetectionReport& out);
DetectionReport detect_baseline(const PsiSet& psi, const std::vector<double>& thr);

// Replica power |c_{u_src, kappa, eps_src, u_dst}[k]|^2 as seen by the detector, using one nominal
// CFO per source root (first device on that root, else 0).
class InterferenceModel {
public:
    InterferenceModel() = default;
    static InterferenceModel nominal(const Scenario& s);
    static InterferenceModel none(int n_root, int length);

    // power on root `dst` at lag k from a true peak on root `src` at lag k_src
    double power(int src, int k_src, int dst, int k) const;

    int length() const { return length_; }

private:
    int length_ = 0;
    int n_root_ = 0;
    int n_cs_ = 1;
    int n_shift_ = 0;
    bool empty_ = true;
    // [(src * n_root + dst) * n_shift + v][k], exact for cyclic shift v * n_cs
    std::vector<std::vector<double>> table_;
};

struct CfoDetectorParams {
    std::vector<double> base;  // per root
    std::vector<int> d;        // inter-sample distance per root
    double noise_floor = 0.0;  // 2 sigma_z^2
    double gamma_inv = 0.0;    // Gamma^{-1}(n_ant n_rep, p_fa_sample)
    const InterferenceModel* interference = nullptr;
    int group_span = 0;        // 0: full residue class b = 1..length-1; else |b| <= group_span
    std::vector<double> base_scale_per_root; // empty = 1
};

struct CfoThresholds;

// Detector parameters for a scenario at one SNR (base threshold times base_scale on every root).
CfoDetectorParams make_cfo_params(const Scenario& s, const CfoThresholds& t, const InterferenceModel* model,
                                  int group_span = 0);
CfoDetectorParams make_cfo_params(const Scenario& s, double snr_db, const InterferenceModel* model,
                                  double base_scale = 1.0, int group_span = 0);

struct Candidate {
    int lag;
    double psi;
};

// Candidates strictly above the base threshold are grouped along b*d and checked against the
// interference-aware CFO threshold.
void detect_cfo_aware(const PsiSet& psi, const CfoDetectorParams& p, DetectionReport& out);
DetectionReport detect_cfo_aware(const PsiSet& psi, const CfoDetectorParams& p);
// Same algorithm on pre-extracted candidate lists (entries below the base threshold are ignored).
void classify_candidates(const std::vector<std::vector<Candidate>>& cands, const CfoDetectorParams& p,
                         DetectionReport& out);

// beta = Gamma^{-1}(dof_half, p) / dof_half
double conventional_beta(int dof_half, double p_fa_sample);
// threshold beta * mean(psi) per root
void detect_conventional(const PsiSet& psi, double beta, DetectionReport& out);
DetectionReport detect_conventional(const PsiSet& psi, double beta);

} // namespace prach
