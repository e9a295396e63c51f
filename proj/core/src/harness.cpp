// SPDX-License-Identifier: Apache-2.0
#include "prach/harness.hpp"

#include "prach/analytic.hpp"
#include "prach/detect.hpp"
#include "prach/error.hpp"
#include "prach/specfun.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

namespace prach {

std::string_view to_string(DetectorKind d)
{
    switch (d) {
    case DetectorKind::baseline:
        return "baseline";
    case DetectorKind::cfo_aware:
        return "cfo-aware";
    case DetectorKind::conventional:
        return "conventional";
    case DetectorKind::cfo_aware_adapted:
        return "cfo-aware-adapted";
    }
    return "?";
}

DetectorKind detector_from_string(std::string_view s)
{
    for (auto d : {DetectorKind::baseline, DetectorKind::cfo_aware, DetectorKind::conventional,
                   DetectorKind::cfo_aware_adapted})
        if (s == to_string(d))
            return d;
    throw DomainError("unknown detector '" + std::string(s) + "'");
}

const ResultRow* ExperimentResult::find(std::string_view scenario_id, double snr_db, DetectorKind d, Combiner c,
                                        std::string_view metric) const
{
    for (const auto& r : rows)
        if (r.scenario_id == scenario_id && std::abs(r.snr_db - snr_db) < 1e-9 && r.detector == to_string(d) &&
            r.combiner == to_string(c) && r.metric == metric)
            return &r;
    return nullptr;
}

void ExperimentResult::append(const ExperimentResult& other)
{
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    adapted_scale.insert(adapted_scale.end(), other.adapted_scale.begin(), other.adapted_scale.end());
}

std::pair<double, double> wilson_interval(long events, long trials, double z)
{
    if (trials <= 0)
        throw DomainError("wilson_interval: no trials");
    const double n = static_cast<double>(trials);
    const double p = events / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // the bounds are exact at the edges
    const double lo = events == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = events == trials ? 1.0 : std::min(1.0, centre + half);
    return {std::min(lo, p), std::max(hi, p)};
}

std::vector<DetectorConfig> default_configs(const Scenario& s)
{
    std::vector<DetectorConfig> out{{DetectorKind::baseline, Combiner::pc}};
    if (s.n_rep() > 1)
        out.push_back({DetectorKind::baseline, Combiner::cc});
    const bool capable = s.coherence == Coherence::independent || s.n_rep() == 1;
    if (capable)
        out.push_back({DetectorKind::cfo_aware, Combiner::pc});
    out.push_back({DetectorKind::conventional, Combiner::pc});
    return out;
}

double check_fast_path(const Scenario& s, std::uint64_t seed)
{
    ensure_valid(s);
    Rng rng = make_stream(seed, StreamPurpose::check, 0);
    const ChannelRealization ch = draw_channel(s, rng);
    const ProfileCache cache(s);
    const ReceivedGrid grid = assemble_received(s, ch, 0.0, rng);
    double worst = 0.0;
    for (int u : s.roots) {
        const auto full = correlate(grid, u);
        const auto fast = mu_fast(s, ch, u, cache);
        for (std::size_t j = 0; j < full.phi.size(); ++j)
            worst = std::max(worst, std::abs(full.phi[j] - fast.phi[j]));
    }
    if (worst > 1e-9)
        throw Error("fast correlator path disagrees with the full signal path (max error " + std::to_string(worst) + ")");
    return worst;
}

namespace {

constexpr long chunk_size = 1000;

struct Counts {
    long fa = 0;
    long fa_lag = 0;
    long td = 0;
    long td_trials = 0;
};

struct Target {
    int device;
    int root_index;
    int lag;
};

struct SnrSetup {
    double snr_db = 0.0;
    double sigma_z = 0.0;
    CaseParams pc, cc;
    double p_sample = 0.0;
    double thr_pc = 0.0, thr_cc = 0.0;
    double beta_pc = 0.0, beta_cc = 0.0;
    CfoDetectorParams cfo;
    CfoDetectorParams cfo_adapted;
    double adapted_scale = 1.0;
};

class Engine {
public:
    Engine(const Scenario& s, std::vector<DetectorConfig> cfgs, std::vector<SnrSetup> setups)
        : s_(s), cache_(s), cfgs_(std::move(cfgs)), setups_(std::move(setups))
    {
        const int len = s_.length();
        is_true_.assign(s_.n_root(), std::vector<char>(len, 0));
        for (int g = 0; g < s_.n_dev(); ++g) {
            const auto& d = s_.devices[g];
            const int r = s_.root_index(d.root);
            is_true_[r][s_.true_lag(d)] = 1;
            if (d.root == s_.reference_root())
                targets_.push_back({g, r, s_.true_lag(d)});
        }
        for (const auto& c : cfgs_) {
            need_pc_ |= c.combiner == Combiner::pc;
            need_cc_ |= c.combiner == Combiner::cc;
        }
        n_true_lags_ = 0;
        for (const auto& row : is_true_)
            n_true_lags_ += std::count(row.begin(), row.end(), 1);
    }

    const std::vector<Target>& targets() const { return targets_; }
    long free_lags() const { return static_cast<long>(s_.n_root()) * s_.length() - n_true_lags_; }

    // counts laid out [snr][config]
    void run_chunk(std::uint64_t seed, long chunk, long count, std::vector<Counts>& out) const
    {
        const int len = s_.length();
        const int n_root = s_.n_root();
        const std::size_t block = static_cast<std::size_t>(s_.n_rep()) * s_.n_ant * len;
        Rng rng = make_stream(seed, StreamPurpose::occasion, static_cast<std::uint64_t>(chunk));
        Gaussian normal(rng);
        ChannelRealization ch;
        std::vector<CVec> mu(n_root, CVec(block)), noise(n_root, CVec(block));
        CVec phi(block);
        PsiSet psi_pc(n_root, std::vector<double>(len)), psi_cc(n_root, std::vector<double>(len));
        DetectionReport rep;
        out.assign(setups_.size() * cfgs_.size(), Counts{});

        for (long o = 0; o < count; ++o) {
            draw_channel(s_, normal, ch);
            for (int r = 0; r < n_root; ++r) {
                mu_fast(s_, ch, r, cache_, mu[r].data());
                for (auto& z : noise[r]) {
                    const double re = normal();
                    z = cplx(re, normal());
                }
            }
            for (std::size_t si = 0; si < setups_.size(); ++si) {
                const SnrSetup& st = setups_[si];
                for (int r = 0; r < n_root; ++r) {
                    for (std::size_t j = 0; j < block; ++j)
                        phi[j] = mu[r][j] + st.sigma_z * noise[r][j];
                    if (need_pc_)
                        combine_pc(phi.data(), s_.n_rep(), s_.n_ant, len, psi_pc[r].data());
                    if (need_cc_)
                        combine_cc(phi.data(), s_.n_rep(), s_.n_ant, len, psi_cc[r].data());
                }
                for (std::size_t ci = 0; ci < cfgs_.size(); ++ci) {
                    const auto& cfg = cfgs_[ci];
                    const PsiSet& psi = cfg.combiner == Combiner::pc ? psi_pc : psi_cc;
                    switch (cfg.detector) {
                    case DetectorKind::baseline:
                        detect_baseline(psi, std::vector<double>(n_root, cfg.combiner == Combiner::pc ? st.thr_pc : st.thr_cc), rep);
                        break;
                    case DetectorKind::cfo_aware:
                        detect_cfo_aware(psi, st.cfo, rep);
                        break;
                    case DetectorKind::cfo_aware_adapted:
                        detect_cfo_aware(psi, st.cfo_adapted, rep);
                        break;
                    case DetectorKind::conventional:
                        detect_conventional(psi, cfg.combiner == Combiner::pc ? st.beta_pc : st.beta_cc, rep);
                        break;
                    }
                    tally(rep, out[si * cfgs_.size() + ci]);
                }
            }
        }
    }

private:
    void tally(const DetectionReport& rep, Counts& c) const
    {
        long lag_fa = 0;
        for (const auto& p : rep.peaks)
            if (p.cls == PeakClass::true_candidate && !is_true_[p.root_index][p.lag])
                ++lag_fa;
        c.fa += lag_fa > 0;
        c.fa_lag += lag_fa;
        for (const auto& t : targets_) {
            c.td += rep.accepted_at(t.root_index, t.lag);
            ++c.td_trials;
        }
    }

    const Scenario& s_;
    ProfileCache cache_;
    std::vector<DetectorConfig> cfgs_;
    std::vector<SnrSetup> setups_;
    std::vector<std::vector<char>> is_true_;
    std::vector<Target> targets_;
    long n_true_lags_ = 0;
    bool need_pc_ = false;
    bool need_cc_ = false;
};

template <class Fn>
void parallel_chunks(long n_chunks, int jobs, Fn&& fn)
{
    const long workers = std::max(1L, std::min<long>(jobs, n_chunks));
    if (workers == 1) {
        for (long c = 0; c < n_chunks; ++c)
            fn(c);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (long c = next++; c < n_chunks; c = next++)
                    fn(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err)
                    err = std::current_exception();
            }
        });
    for (auto& t : pool)
        t.join();
    if (err)
        std::rethrow_exception(err);
}

} // namespace

double adapt_base_scale_calibrated(const Scenario& s, double snr_db, long occasions, std::uint64_t seed, int group_span)
{
    ensure_valid(s);
    const CfoThresholds t = cfo_thresholds(s, snr_db, 1.0);
    const InterferenceModel model = InterferenceModel::nominal(s);
    CfoDetectorParams params = make_cfo_params(s, t, &model, group_span);
    const double f_lo = 0.25, f_hi = 8.0;
    const double floor_thr = f_lo * *std::min_element(params.base.begin(), params.base.end());

    const int len = s.length();
    const int n_root = s.n_root();
    const std::size_t block = static_cast<std::size_t>(s.n_rep()) * s.n_ant * len;
    const double sigma_z = std::sqrt(t.cs.sigma2_z);
    const ProfileCache cache(s);
    std::vector<std::vector<char>> is_true(n_root, std::vector<char>(len, 0));
    for (const auto& d : s.devices)
        is_true[s.root_index(d.root)][s.true_lag(d)] = 1;

    // With full-class grouping only the per-root maximum can become a true candidate,
    // so it is the only value that needs to be kept.
    std::vector<std::vector<std::vector<Candidate>>> store;
    store.reserve(occasions);
    const long n_chunks = (occasions + chunk_size - 1) / chunk_size;
    ChannelRealization ch;
    CVec mu(block);
    std::vector<double> psi(len);
    for (long c = 0; c < n_chunks; ++c) {
        Rng rng = make_stream(seed, StreamPurpose::calibration, static_cast<std::uint64_t>(c));
        Gaussian normal(rng);
        const long count = std::min(chunk_size, occasions - c * chunk_size);
        for (long o = 0; o < count; ++o) {
            draw_channel(s, normal, ch);
            std::vector<std::vector<Candidate>> occ(n_root);
            for (int r = 0; r < n_root; ++r) {
                mu_fast(s, ch, r, cache, mu.data());
                for (auto& z : mu) {
                    const double re = normal();
                    z += sigma_z * cplx(re, normal());
                }
                combine_pc(mu.data(), s.n_rep(), s.n_ant, len, psi.data());
                if (group_span == 0) {
                    const auto it = std::max_element(psi.begin(), psi.end());
                    if (*it > floor_thr)
                        occ[r].push_back({static_cast<int>(it - psi.begin()), *it});
                } else {
                    for (int k = 0; k < len; ++k)
                        if (psi[k] > floor_thr)
                            occ[r].push_back({k, psi[k]});
                }
            }
            store.push_back(std::move(occ));
        }
    }

    DetectionReport rep;
    auto rate = [&](double f) {
        params.base_scale_per_root.assign(n_root, f);
        long fa = 0;
        for (const auto& occ : store) {
            classify_candidates(occ, params, rep);
            for (const auto& p : rep.peaks)
                if (p.cls == PeakClass::true_candidate && !is_true[p.root_index][p.lag]) {
                    ++fa;
                    break;
                }
        }
        return static_cast<double>(fa) / static_cast<double>(store.size());
    };

    // keep the design threshold when it already meets the target within calibration noise
    const double se = std::sqrt(s.p_fa_des * (1.0 - s.p_fa_des) / static_cast<double>(store.size()));
    if (std::abs(rate(1.0) - s.p_fa_des) <= 2.0 * se)
        return 1.0;
    double lo = std::log(f_lo), hi = std::log(f_hi);
    if (rate(f_lo) <= s.p_fa_des)
        return f_lo;
    if (rate(f_hi) > s.p_fa_des)
        return f_hi;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rate(std::exp(mid)) > s.p_fa_des)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(hi);
}

ExperimentResult run(const RunPlan& plan)
{
    const Scenario& s = plan.scenario;
    ensure_valid(s);
    if (plan.occasions < 1000)
        throw DomainError("run: at least 1000 occasions per SNR point are required");
    const std::uint64_t seed = plan.seed.value_or(s.seed);
    std::vector<DetectorConfig> cfgs = plan.configs.empty() ? default_configs(s) : plan.configs;
    bool any_cfo = false, any_adapted = false;
    for (const auto& c : cfgs) {
        const bool cfo = c.detector == DetectorKind::cfo_aware || c.detector == DetectorKind::cfo_aware_adapted;
        if (cfo && c.combiner != Combiner::pc)
            throw UnsupportedCase("the CFO-aware detector is defined for power combining only");
        any_cfo |= cfo;
        any_adapted |= c.detector == DetectorKind::cfo_aware_adapted;
    }

    check_fast_path(s, seed);

    const InterferenceModel model = any_cfo ? InterferenceModel::nominal(s) : InterferenceModel::none(s.n_root(), s.length());
    const double p_sample = fa_budget(s.p_fa_des, s.n_root(), s.length());
    const double s2_design = design_sigma2(s);
    const long n_cal = plan.calibration_occasions > 0 ? plan.calibration_occasions : 2 * plan.occasions;

    ExperimentResult result;
    std::vector<SnrSetup> setups;
    for (double snr : s.snr_db) {
        SnrSetup st;
        st.snr_db = snr;
        st.pc = make_case(s, Combiner::pc, snr);
        st.cc = make_case(s, Combiner::cc, snr);
        st.sigma_z = std::sqrt(st.pc.sigma2_z);
        st.p_sample = p_sample;
        st.thr_pc = threshold(st.pc, s2_design, p_sample);
        st.thr_cc = threshold(st.cc, s2_design, p_sample);
        st.beta_pc = conventional_beta(s.n_ant * s.n_rep(), p_sample);
        st.beta_cc = conventional_beta(s.n_ant, p_sample);
        if (any_cfo) {
            const CfoThresholds t = cfo_thresholds(s, snr, 1.0);
            st.cfo = make_cfo_params(s, t, &model, plan.group_span);
            if (any_adapted) {
                st.adapted_scale = plan.adapt_method == AdaptMethod::calibrated
                    ? adapt_base_scale_calibrated(s, snr, n_cal, seed, plan.group_span)
                    : adapt_base_scale_analytic(s, snr, plan.analytic_mc, seed);
                st.cfo_adapted = st.cfo;
                st.cfo_adapted.base_scale_per_root.assign(s.n_root(), st.adapted_scale);
                result.adapted_scale.emplace_back(snr, st.adapted_scale);
            }
        }
        setups.push_back(std::move(st));
    }

    const Engine engine(s, cfgs, setups);
    const long n_chunks = (plan.occasions + chunk_size - 1) / chunk_size;
    std::vector<std::vector<Counts>> per_chunk(n_chunks);
    parallel_chunks(n_chunks, plan.jobs, [&](long c) {
        const long count = std::min(chunk_size, plan.occasions - c * chunk_size);
        engine.run_chunk(seed, c, count, per_chunk[c]);
    });
    std::vector<Counts> total(setups.size() * cfgs.size());
    for (const auto& chunk : per_chunk)
        for (std::size_t j = 0; j < total.size(); ++j) {
            total[j].fa += chunk[j].fa;
            total[j].fa_lag += chunk[j].fa_lag;
            total[j].td += chunk[j].td;
            total[j].td_trials += chunk[j].td_trials;
        }

    // analytic counterparts
    // every device leaks into every lag, so the full profile is the null law at non-transmitting lags
    std::vector<VarianceProfile> h1;
    for (int u : s.roots)
        h1.push_back(variance_profile(s, u, Hypothesis::h1, CfoMode::exact));
    std::vector<std::pair<int, int>> excluded;
    for (const auto& d : s.devices)
        excluded.emplace_back(s.root_index(d.root), s.true_lag(d));
    const auto& targets = engine.targets();

    for (std::size_t si = 0; si < setups.size(); ++si) {
        const SnrSetup& st = setups[si];
        for (std::size_t ci = 0; ci < cfgs.size(); ++ci) {
            const auto& cfg = cfgs[ci];
            const Counts& c = total[si * cfgs.size() + ci];
            std::optional<double> an_td, an_fa;
            if (plan.analytic) {
                try {
                    const CaseParams& cs = cfg.combiner == Combiner::pc ? st.pc : st.cc;
                    if (cfg.detector == DetectorKind::baseline) {
                        const double thr = cfg.combiner == Combiner::pc ? st.thr_pc : st.thr_cc;
                        if (!targets.empty()) {
                            double acc = 0.0;
                            for (const auto& t : targets)
                                acc += p_td(cs, h1[t.root_index].sigma2[t.lag], thr);
                            an_td = acc / static_cast<double>(targets.size());
                        }
                        std::vector<std::vector<double>> thr_all(s.n_root(), std::vector<double>(s.length(), thr));
                        std::vector<std::vector<double>> var;
                        for (const auto& v : h1)
                            var.push_back(v.sigma2);
                        an_fa = total_pfa_analytic(cs, thr_all, var, excluded);
                    } else if (cfg.detector == DetectorKind::cfo_aware || cfg.detector == DetectorKind::cfo_aware_adapted) {
                        const double scale = cfg.detector == DetectorKind::cfo_aware ? 1.0 : st.adapted_scale;
                        const CfoThresholds t = cfo_thresholds(s, st.snr_db, scale);
                        if (!targets.empty()) {
                            double acc = 0.0;
                            for (const auto& tg : targets)
                                acc += p_td_cfo(s, tg.device, t.cs, t.per_root[tg.root_index], t.h1[tg.root_index]);
                            an_td = acc / static_cast<double>(targets.size());
                        }
                        an_fa = plan.analytic_mc >= 2 ? predicted_pfa_cfo(s, t, plan.analytic_mc, seed).value
                                                      : noise_plus_inter(s, t);
                    }
                } catch (const ConvergenceError&) {
                    // leave the analytic column empty
                }
            }
            ResultRow base;
            base.scenario_id = s.id;
            base.snr_db = st.snr_db;
            base.detector = std::string(to_string(cfg.detector));
            base.combiner = std::string(to_string(cfg.combiner));
            base.coherence = std::string(to_string(s.coherence));
            base.n_occasions = plan.occasions;
            base.seed = seed;

            if (!targets.empty()) {
                ResultRow r = base;
                r.metric = "p_td";
                r.analytic = an_td;
                r.events = c.td;
                r.trials = c.td_trials;
                r.empirical = static_cast<double>(c.td) / static_cast<double>(c.td_trials);
                std::tie(r.ci_low, r.ci_high) = wilson_interval(c.td, c.td_trials);
                result.rows.push_back(r);
            }
            {
                ResultRow r = base;
                r.metric = "p_fa";
                r.analytic = an_fa;
                r.events = c.fa;
                r.trials = plan.occasions;
                r.empirical = static_cast<double>(c.fa) / static_cast<double>(plan.occasions);
                std::tie(r.ci_low, r.ci_high) = wilson_interval(c.fa, plan.occasions);
                result.rows.push_back(r);
            }
            if (plan.per_lag) {
                ResultRow r = base;
                r.metric = "p_fa_lag";
                r.trials = plan.occasions * engine.free_lags();
                r.events = c.fa_lag;
                r.empirical = static_cast<double>(c.fa_lag) / static_cast<double>(r.trials);
                std::tie(r.ci_low, r.ci_high) = wilson_interval(c.fa_lag, r.trials);
                r.analytic = p_sample;
                if (cfg.detector == DetectorKind::conventional || cfg.detector == DetectorKind::cfo_aware_adapted)
                    r.analytic.reset();
                result.rows.push_back(r);
            }
        }
    }
    return result;
}

std::string format_g9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string csv_field(const std::string& v)
{
    if (v.find_first_of(",\"\r\n") == std::string::npos)
        return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

void write_csv(std::ostream& out, const ExperimentResult& r)
{
    out << "scenario_id,snr_db,detector,combiner,coherence,metric,analytic,empirical,ci_low,ci_high,n_occasions,seed\r\n";
    for (const auto& row : r.rows) {
        out << csv_field(row.scenario_id) << ',' << format_g9(row.snr_db) << ',' << csv_field(row.detector) << ','
            << csv_field(row.combiner) << ',' << csv_field(row.coherence) << ',' << csv_field(row.metric) << ','
            << (row.analytic ? format_g9(*row.analytic) : std::string()) << ',' << format_g9(row.empirical) << ','
            << format_g9(row.ci_low) << ',' << format_g9(row.ci_high) << ',' << row.n_occasions << ',' << row.seed
            << "\r\n";
    }
}

} // namespace prach
