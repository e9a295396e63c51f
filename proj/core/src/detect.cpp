// SPDX-License-Identifier: Apache-2.0
#include "prach/detect.hpp"

#include "prach/analytic.hpp"
#include "prach/correlation.hpp"
#include "prach/error.hpp"
#include "prach/specfun.hpp"
#include "prach/zadoff_chu.hpp"

#include <algorithm>
#include <numeric>

namespace prach {

std::vector<std::pair<int, int>> DetectionReport::accepted() const
{
    std::vector<std::pair<int, int>> out;
    for (const auto& p : peaks)
        if (p.cls == PeakClass::true_candidate)
            out.emplace_back(p.root_index, p.lag);
    return out;
}

bool DetectionReport::accepted_at(int root_index, int lag) const
{
    for (const auto& p : peaks)
        if (p.cls == PeakClass::true_candidate && p.root_index == root_index && p.lag == lag)
            return true;
    return false;
}

void detect_baseline(const PsiSet& psi, const std::vector<double>& thr, DetectionReport& out)
{
    out.clear();
    if (thr.size() != psi.size())
        throw DomainError("detect_baseline: one threshold per root required");
    for (std::size_t r = 0; r < psi.size(); ++r)
        for (std::size_t k = 0; k < psi[r].size(); ++k)
            if (psi[r][k] > thr[r])
                out.peaks.push_back({static_cast<int>(r), static_cast<int>(k), psi[r][k], PeakClass::true_candidate});
}

DetectionReport detect_baseline(const PsiSet& psi, const std::vector<double>& thr)
{
    DetectionReport r;
    detect_baseline(psi, thr, r);
    return r;
}

InterferenceModel InterferenceModel::none(int n_root, int length)
{
    InterferenceModel m;
    m.length_ = length;
    m.n_root_ = n_root;
    m.empty_ = true;
    return m;
}

InterferenceModel InterferenceModel::nominal(const Scenario& s)
{
    InterferenceModel m;
    m.length_ = s.length();
    m.n_root_ = s.n_root();
    m.n_cs_ = s.n_cs;
    m.n_shift_ = s.length() / s.n_cs;
    m.empty_ = false;
    std::vector<double> eps(m.n_root_, 0.0);
    std::vector<bool> set(m.n_root_, false);
    for (const auto& d : s.devices) {
        const int r = s.root_index(d.root);
        if (r >= 0 && !set[r]) {
            eps[r] = d.cfo;
            set[r] = true;
        }
    }
    m.table_.resize(static_cast<std::size_t>(m.n_root_) * m.n_root_ * m.n_shift_);
    for (int src = 0; src < m.n_root_; ++src)
        for (int dst = 0; dst < m.n_root_; ++dst)
            for (int v = 0; v < m.n_shift_; ++v) {
                const auto c = closed_form_cfo_corr(s.roots[src], v * s.n_cs, eps[src], s.roots[dst], m.length_);
                auto& row = m.table_[(static_cast<std::size_t>(src) * m.n_root_ + dst) * m.n_shift_ + v];
                row.resize(m.length_);
                for (int k = 0; k < m.length_; ++k)
                    row[k] = std::norm(c.values[k]);
            }
    return m;
}

double InterferenceModel::power(int src, int k_src, int dst, int k) const
{
    if (empty_)
        return 0.0;
    const int len = length_;
    const std::size_t base = (static_cast<std::size_t>(src) * n_root_ + dst) * n_shift_;
    const int kappa = (len - k_src) % len;
    if (kappa % n_cs_ == 0 && kappa / n_cs_ < n_shift_)
        return table_[base + kappa / n_cs_][k];
    // off-grid peak: shift the zero-shift profile
    return table_[base][((k - k_src) % len + len) % len];
}

namespace {

struct Ranked {
    int root;
    int lag;
    double psi;
};

bool in_group(int delta, int d_inv, int len, int span)
{
    if (delta == 0)
        return false;
    if (span <= 0)
        return true;
    const long long b = (static_cast<long long>(delta) * d_inv) % len;
    return b <= span || len - b <= span;
}

void run_cfo_aware(std::vector<std::vector<Ranked>>& per_root, const CfoDetectorParams& p, int len, DetectionReport& out)
{
    out.clear();
    const std::size_t n_root = per_root.size();
    std::vector<std::size_t> true_idx;
    for (std::size_t r = 0; r < n_root; ++r) {
        auto& c = per_root[r];
        std::sort(c.begin(), c.end(), [](const Ranked& a, const Ranked& b) {
            return a.psi > b.psi || (a.psi == b.psi && a.lag < b.lag);
        });
        const int d = p.d.at(r);
        const int d_inv = p.group_span > 0 ? mod_inverse(d, len) : 1;
        std::vector<char> done(c.size(), 0);
        std::vector<std::size_t> slot(c.size());
        const std::size_t first = out.peaks.size();
        for (std::size_t i = 0; i < c.size(); ++i)
            out.peaks.push_back({c[i].root, c[i].lag, c[i].psi, PeakClass::discarded_cfo_replica});
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (done[i])
                continue;
            done[i] = 1;
            out.peaks[first + i].cls = PeakClass::true_candidate;
            true_idx.push_back(first + i);
            for (std::size_t j = i + 1; j < c.size(); ++j) {
                if (done[j])
                    continue;
                const int delta = ((c[j].lag - c[i].lag) % len + len) % len;
                if (in_group(delta, d_inv, len, p.group_span))
                    done[j] = 1;
            }
        }
    }
    if (!p.interference)
        return;
    // interference check, strongest first, against the candidates already accepted
    std::stable_sort(true_idx.begin(), true_idx.end(), [&](std::size_t a, std::size_t b) {
        return out.peaks[a].psi > out.peaks[b].psi;
    });
    std::vector<std::size_t> kept;
    for (std::size_t a : true_idx) {
        Peak& pa = out.peaks[a];
        double inter = 0.0;
        for (std::size_t b : kept) {
            const Peak& pb = out.peaks[b];
            inter += p.interference->power(pb.root_index, pb.lag, pa.root_index, pa.lag);
        }
        if (pa.psi < (p.noise_floor + inter) * p.gamma_inv)
            pa.cls = PeakClass::discarded_interference;
        else
            kept.push_back(a);
    }
}

double scaled_base(const CfoDetectorParams& p, std::size_t r)
{
    const double s = p.base_scale_per_root.empty() ? 1.0 : p.base_scale_per_root.at(r);
    return p.base.at(r) * s;
}

} // namespace

void detect_cfo_aware(const PsiSet& psi, const CfoDetectorParams& p, DetectionReport& out)
{
    if (p.base.size() != psi.size() || p.d.size() != psi.size())
        throw DomainError("detect_cfo_aware: per-root parameters required");
    std::vector<std::vector<Ranked>> per_root(psi.size());
    int len = 0;
    for (std::size_t r = 0; r < psi.size(); ++r) {
        len = static_cast<int>(psi[r].size());
        const double t = scaled_base(p, r);
        for (int k = 0; k < len; ++k)
            if (psi[r][k] > t)
                per_root[r].push_back({static_cast<int>(r), k, psi[r][k]});
    }
    run_cfo_aware(per_root, p, len, out);
}

DetectionReport detect_cfo_aware(const PsiSet& psi, const CfoDetectorParams& p)
{
    DetectionReport r;
    detect_cfo_aware(psi, p, r);
    return r;
}

void classify_candidates(const std::vector<std::vector<Candidate>>& cands, const CfoDetectorParams& p,
                         DetectionReport& out)
{
    if (p.base.size() != cands.size() || p.d.size() != cands.size())
        throw DomainError("classify_candidates: per-root parameters required");
    const int len = p.interference ? p.interference->length() : 0;
    if (len == 0)
        throw DomainError("classify_candidates: interference model required");
    std::vector<std::vector<Ranked>> per_root(cands.size());
    for (std::size_t r = 0; r < cands.size(); ++r) {
        const double t = scaled_base(p, r);
        for (const auto& c : cands[r])
            if (c.psi > t)
                per_root[r].push_back({static_cast<int>(r), c.lag, c.psi});
    }
    run_cfo_aware(per_root, p, len, out);
}

CfoDetectorParams make_cfo_params(const Scenario& s, const CfoThresholds& t, const InterferenceModel* model,
                                  int group_span)
{
    CfoDetectorParams p;
    for (const auto& r : t.per_root)
        p.base.push_back(r.base);
    for (int u : s.roots)
        p.d.push_back(inter_sample_distance(u, s.length()));
    p.noise_floor = 2.0 * t.cs.sigma2_z;
    p.gamma_inv = inv_upper_inc_gamma_reg(t.cs.n_ant * t.cs.n_rep, t.p_fa_sample);
    p.interference = model;
    p.group_span = group_span;
    return p;
}

CfoDetectorParams make_cfo_params(const Scenario& s, double snr_db, const InterferenceModel* model, double base_scale,
                                  int group_span)
{
    return make_cfo_params(s, cfo_thresholds(s, snr_db, base_scale), model, group_span);
}

double conventional_beta(int dof_half, double p_fa_sample)
{
    return inv_upper_inc_gamma_reg(dof_half, p_fa_sample) / dof_half;
}

void detect_conventional(const PsiSet& psi, double beta, DetectionReport& out)
{
    out.clear();
    for (std::size_t r = 0; r < psi.size(); ++r) {
        if (psi[r].size() < 16)
            throw DomainError("detect_conventional: at least 16 lags are needed for the floor estimate");
        const double mean = std::accumulate(psi[r].begin(), psi[r].end(), 0.0) / static_cast<double>(psi[r].size());
        const double t = beta * mean;
        for (std::size_t k = 0; k < psi[r].size(); ++k)
            if (psi[r][k] > t)
                out.peaks.push_back({static_cast<int>(r), static_cast<int>(k), psi[r][k], PeakClass::true_candidate});
    }
}

DetectionReport detect_conventional(const PsiSet& psi, double beta)
{
    DetectionReport r;
    detect_conventional(psi, beta, r);
    return r;
}

} // namespace prach
