// SPDX-License-Identifier: Apache-2.0
#include "prach/analytic.hpp"

#include "prach/correlation.hpp"
#include "prach/error.hpp"
#include "prach/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace prach {

CaseParams make_case(const Scenario& s, Combiner c, double snr_db)
{
    return {c, s.coherence, s.n_ant, s.n_rep(), noise_var_from_snr(snr_db) / s.length()};
}

VarianceProfile variance_profile(const Scenario& s, int u0, Hypothesis h, CfoMode mode)
{
    const int len = s.length();
    check_root(u0, len);
    VarianceProfile vp{std::vector<double>(len, 0.0), h, u0};
    if (mode == CfoMode::none) {
        int n_inter = 0;
        for (const auto& d : s.devices)
            n_inter += d.root != u0;
        const double v = n_inter / static_cast<double>(len) + (h == Hypothesis::h1 ? 1.0 : 0.0);
        std::fill(vp.sigma2.begin(), vp.sigma2.end(), v);
        return vp;
    }
    for (const auto& d : s.devices) {
        if (h == Hypothesis::h0 && d.root == u0)
            continue;
        const auto c = closed_form_cfo_corr(d.root, s.shift_samples(d), d.cfo, u0, len);
        for (int k = 0; k < len; ++k)
            vp.sigma2[k] += std::norm(c.values[k]);
    }
    return vp;
}

double design_sigma2(const Scenario& s) { return s.design_n_inter() / s.length(); }

namespace {

void check_case(const CaseParams& c)
{
    if (c.n_ant < 1 || c.n_rep < 1)
        throw DomainError("case parameters: counts must be >= 1");
    if (!(c.sigma2_z > 0.0))
        throw DomainError("case parameters: noise variance must be positive");
}

GeneralizedChiSquareMix pc_identical_mix(const CaseParams& c, double sigma2)
{
    return {c.n_ant * c.n_rep, c.n_ant, c.sigma2_z, c.n_rep * sigma2 / (2.0 * c.sigma2_z)};
}

// Gamma-law cases: CCDF = Q(shape, psi / scale).
struct GammaLaw {
    int shape;
    double scale;
};

GammaLaw gamma_law(const CaseParams& c, double sigma2)
{
    const double nr = c.n_rep;
    if (c.combiner == Combiner::pc)
        return {c.n_ant * c.n_rep, 2.0 * c.sigma2_z + sigma2};
    if (c.coherence == Coherence::independent)
        return {c.n_ant, nr * (2.0 * c.sigma2_z + sigma2)};
    return {c.n_ant, 2.0 * nr * c.sigma2_z + nr * nr * sigma2};
}

bool is_mixture(const CaseParams& c)
{
    return c.combiner == Combiner::pc && c.coherence == Coherence::identical && c.n_rep > 1;
}

} // namespace

double ccdf_psi(const CaseParams& c, double sigma2, double psi)
{
    check_case(c);
    if (sigma2 < 0.0)
        throw DomainError("ccdf_psi: negative variance");
    if (psi <= 0.0)
        return 1.0;
    if (is_mixture(c))
        return mix_ccdf(pc_identical_mix(c, sigma2), psi);
    const auto g = gamma_law(c, sigma2);
    return upper_inc_gamma_reg(g.shape, psi / g.scale);
}

double threshold(const CaseParams& c, double sigma2_h0, double p_fa_sample)
{
    check_case(c);
    if (!(p_fa_sample > 0.0 && p_fa_sample < 1.0))
        throw DomainError("threshold: probability must lie in (0,1)");
    if (!is_mixture(c)) {
        const auto g = gamma_law(c, sigma2_h0);
        return g.scale * inv_upper_inc_gamma_reg(g.shape, p_fa_sample);
    }
    const auto mix = pc_identical_mix(c, sigma2_h0);
    const double logp = std::log(p_fa_sample);
    auto f = [&](double x) {
        const double q = mix_ccdf(mix, x);
        return (q > 0.0 ? std::log(q) : -1e300) - logp;
    };
    // bracket by doubling from the mean; Markov gives 10 mean / p as a hard cap
    const double cap = 10.0 * mix.mean() / p_fa_sample;
    double lo = 0.0, hi = mix.mean();
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > cap)
            throw ConvergenceError("threshold: failed to bracket the quantile");
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    if (iters >= 200)
        throw ConvergenceError("threshold: root solve did not converge");
    return 0.5 * (r.first + r.second);
}

double p_td(const CaseParams& c, double sigma2_h1, double thr) { return ccdf_psi(c, sigma2_h1, thr); }

int inter_sample_distance(int u, int length)
{
    check_root(u, length);
    const int du = mod_inverse(u, length);
    return 2 * du >= length ? length - du : du;
}

std::vector<double> cfo_threshold_profile(const CaseParams& c, const VarianceProfile& h0, double p_fa_sample)
{
    check_case(c);
    if (!c.cfo_capable())
        throw UnsupportedCase("CFO thresholds are defined for power combining with independent repetitions");
    const double g = inv_upper_inc_gamma_reg(c.n_ant * c.n_rep, p_fa_sample);
    std::vector<double> out(h0.sigma2.size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (2.0 * c.sigma2_z + h0.sigma2[k]) * g;
    return out;
}

ThresholdSet make_threshold_set(double base, std::vector<double> cfo_per_lag)
{
    ThresholdSet t{base, std::move(cfo_per_lag), {}};
    t.effective.resize(t.cfo_per_lag.size());
    for (std::size_t k = 0; k < t.effective.size(); ++k)
        t.effective[k] = std::max(base, t.cfo_per_lag[k]);
    return t;
}

double total_pfa_analytic(const CaseParams& c,
                          const std::vector<std::vector<double>>& thresholds,
                          const std::vector<std::vector<double>>& sigma2,
                          const std::vector<std::pair<int, int>>& excluded)
{
    if (thresholds.size() != sigma2.size())
        throw DomainError("total_pfa_analytic: root count mismatch");
    const std::set<std::pair<int, int>> skip(excluded.begin(), excluded.end());
    double log_none = 0.0;
    for (std::size_t r = 0; r < thresholds.size(); ++r) {
        if (thresholds[r].size() != sigma2[r].size())
            throw DomainError("total_pfa_analytic: lag count mismatch");
        for (std::size_t k = 0; k < thresholds[r].size(); ++k) {
            if (skip.count({static_cast<int>(r), static_cast<int>(k)}))
                continue;
            const double p = ccdf_psi(c, sigma2[r][k], thresholds[r][k]);
            if (p >= 1.0)
                return 1.0;
            log_none += std::log1p(-p);
        }
    }
    return -std::expm1(log_none);
}

McEstimate p_fa_cfo_device(const Scenario& s, int device, const CaseParams& c, const ThresholdSet& thr,
                           const VarianceProfile& h0, long n_mc, Rng& rng)
{
    check_case(c);
    if (!c.cfo_capable())
        throw UnsupportedCase("p_fa_cfo_device requires power combining with independent repetitions");
    if (n_mc < 2)
        throw DomainError("p_fa_cfo_device: need at least two samples");
    const Device& dev = s.devices.at(device);
    const int len = s.length();
    const int kt = s.true_lag(dev);
    const int kf = (kt + inter_sample_distance(dev.root, len)) % len;
    const auto prof = closed_form_cfo_corr(dev.root, s.shift_samples(dev), dev.cfo, dev.root, len);
    const double ct = std::norm(prof.values[kt]);
    const double cf = std::norm(prof.values[kf]);

    const int n = c.n_ant * c.n_rep;
    const double st = c.sigma2_z + 0.5 * h0.sigma2.at(kt);
    const double sf = c.sigma2_z + 0.5 * h0.sigma2.at(kf);
    const double tp = thr.base;
    const double tf = thr.effective.at(kf);

    McEstimate est;
    if (cf == 0.0)
        return est;

    // Only the excess over the noise-only exceedance at k_f is attributed to the device;
    // the noise part is already in noise_plus_inter.
    const NoncentralChiSquare f0{n, sf, 0.0};
    const double f0_tf = f0.ccdf(tf);

    Gaussian normal(rng);
    const long pairs = n_mc / 2;
    double sum = 0.0, sum2 = 0.0, sum1 = 0.0, sum_2 = 0.0;
    for (long p = 0; p < pairs; ++p) {
        const double u = rng.uniform();
        double pair_val = 0.0;
        for (int side = 0; side < 2; ++side) {
            const double uu = side == 0 ? u : 1.0 - u;
            const double gain = boost::math::gamma_p_inv(static_cast<double>(n), uu); // sum |h|^2
            const double nt = ct * gain / st;
            const double nf = cf * gain / sf;
            const NoncentralChiSquare ft{n, st, nt};
            const NoncentralChiSquare ff{n, sf, nf};

            const double a = std::sqrt(nt) + normal();
            double chi = a * a;
            for (int j = 1; j < 2 * n; ++j) {
                const double z = normal();
                chi += z * z;
            }
            const double psi_t = st * chi;

            double e1 = 0.0;
            if (psi_t > tp) {
                const double x = std::max(psi_t, tf);
                e1 = std::max(0.0, ff.ccdf(x) - f0.ccdf(x));
            }
            const double e2 = std::max(0.0, ff.ccdf(tf) - f0_tf) * ft.cdf(tp);
            sum1 += e1;
            sum_2 += e2;
            pair_val += 0.5 * (e1 + e2);
        }
        sum += pair_val;
        sum2 += pair_val * pair_val;
    }
    const double np = static_cast<double>(pairs);
    est.value = sum / np;
    const double var = std::max(0.0, (sum2 / np - est.value * est.value) * np / (np - 1.0));
    const double half = 1.959963984540054 * std::sqrt(var / np);
    est.ci_low = std::max(0.0, est.value - half);
    est.ci_high = est.value + half;
    est.p1 = sum1 / (2.0 * np);
    est.p2 = sum_2 / (2.0 * np);
    est.samples = 2 * pairs;
    return est;
}

double p_td_cfo(const Scenario& s, int device, const CaseParams& c, const ThresholdSet& thr, const VarianceProfile& h1)
{
    if (!c.cfo_capable())
        throw UnsupportedCase("p_td_cfo requires power combining with independent repetitions");
    const int kt = s.true_lag(s.devices.at(device));
    return ccdf_psi(c, h1.sigma2.at(kt), thr.effective.at(kt));
}

CfoThresholds cfo_thresholds(const Scenario& s, double snr_db, double base_scale)
{
    CfoThresholds t;
    t.cs = make_case(s, Combiner::pc, snr_db);
    if (!t.cs.cfo_capable())
        throw UnsupportedCase("the CFO-aware detector requires independent repetitions or a single repetition");
    t.p_fa_sample = fa_budget(s.p_fa_des, s.n_root(), s.length());
    const double base = base_scale * threshold(t.cs, design_sigma2(s), t.p_fa_sample);
    for (int u : s.roots) {
        t.h0.push_back(variance_profile(s, u, Hypothesis::h0, CfoMode::exact));
        t.h1.push_back(variance_profile(s, u, Hypothesis::h1, CfoMode::exact));
        t.per_root.push_back(make_threshold_set(base, cfo_threshold_profile(t.cs, t.h0.back(), t.p_fa_sample)));
    }
    return t;
}

double noise_plus_inter(const Scenario& s, const CfoThresholds& t)
{
    std::vector<std::vector<double>> thr, var;
    for (std::size_t r = 0; r < t.per_root.size(); ++r) {
        thr.push_back(t.per_root[r].effective);
        var.push_back(t.h0[r].sigma2);
    }
    std::vector<std::pair<int, int>> excluded;
    for (const auto& d : s.devices)
        excluded.emplace_back(s.root_index(d.root), s.true_lag(d));
    return total_pfa_analytic(t.cs, thr, var, excluded);
}

McEstimate predicted_pfa_cfo(const Scenario& s, const CfoThresholds& t, long n_mc, std::uint64_t seed)
{
    McEstimate total;
    const double npi = noise_plus_inter(s, t);
    total.value = npi;
    double var = 0.0;
    for (int g = 0; g < s.n_dev(); ++g) {
        Rng rng = make_stream(seed, StreamPurpose::analytic, static_cast<std::uint64_t>(g));
        const int r = s.root_index(s.devices[g].root);
        const auto e = p_fa_cfo_device(s, g, t.cs, t.per_root[r], t.h0[r], n_mc, rng);
        total.value += e.value;
        total.p1 += e.p1;
        total.p2 += e.p2;
        const double half = 0.5 * (e.ci_high - e.ci_low);
        var += half * half;
        total.samples += e.samples;
    }
    const double half = std::sqrt(var);
    total.ci_low = std::max(0.0, total.value - half);
    total.ci_high = total.value + half;
    return total;
}

double adapt_base_scale_analytic(const Scenario& s, double snr_db, long n_mc, std::uint64_t seed)
{
    auto pfa = [&](double f) { return predicted_pfa_cfo(s, cfo_thresholds(s, snr_db, f), n_mc, seed).value; };
    double lo = std::log(1.0 / 16.0), hi = std::log(16.0);
    if (pfa(std::exp(lo)) <= s.p_fa_des)
        return std::exp(lo);
    if (pfa(std::exp(hi)) >= s.p_fa_des)
        return std::exp(hi);
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (pfa(std::exp(mid)) > s.p_fa_des)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

} // namespace prach
