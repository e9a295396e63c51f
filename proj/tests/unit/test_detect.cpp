#include "prach/analytic.hpp"
#include "prach/correlation.hpp"
#include "prach/detect.hpp"
#include "prach/receiver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace prach;

namespace {

Scenario c0(std::vector<Device> devs)
{
    Scenario s;
    s.format = PrachFormat::by_name("C0");
    s.roots = {51, 138};
    s.devices = std::move(devs);
    s.snr_db = {0.0};
    return s;
}

// noiseless PC statistic with unit gains
PsiSet noiseless_psi(const Scenario& s)
{
    PsiSet psi(s.n_root(), std::vector<double>(s.length(), 0.0));
    for (int r = 0; r < s.n_root(); ++r) {
        CVec mu(s.length());
        for (const auto& d : s.devices) {
            const auto c = closed_form_cfo_corr(d.root, s.shift_samples(d), d.cfo, s.roots[r], s.length()).values;
            for (int k = 0; k < s.length(); ++k)
                mu[k] += c[k];
        }
        for (int k = 0; k < s.length(); ++k)
            psi[r][k] = std::norm(mu[k]);
    }
    return psi;
}

PsiSet noisy(const PsiSet& base, double sz2, std::uint64_t seed)
{
    Rng rng = make_stream(seed, StreamPurpose::test, 0);
    Gaussian g(rng);
    PsiSet out = base;
    for (auto& row : out)
        for (auto& v : row) {
            const double re = std::sqrt(v) + std::sqrt(sz2) * g();
            const double im = std::sqrt(sz2) * g();
            v = re * re + im * im;
        }
    return out;
}

} // namespace

TEST(Baseline, Examples)
{
    PsiSet zero(2, std::vector<double>(139, 0.0));
    EXPECT_TRUE(detect_baseline(zero, {1.0, 1.0}).peaks.empty());
    zero[1][17] = 2.0;
    const auto r = detect_baseline(zero, {1.0, 1.0});
    ASSERT_EQ(r.accepted().size(), 1u);
    EXPECT_TRUE(r.accepted_at(1, 17));
}

TEST(CfoAware, NoCandidates)
{
    const auto s = c0({});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, 0.0, &model);
    PsiSet zero(2, std::vector<double>(139, 0.0));
    EXPECT_TRUE(detect_cfo_aware(zero, p).peaks.empty());
}

TEST(CfoAware, ReplicaIsDiscarded)
{
    const auto s = c0({});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, 0.0, &model);
    PsiSet psi(2, std::vector<double>(139, 0.0));
    psi[0][100] = 5.0;
    psi[0][(100 + 30) % 139] = 3.0;
    const auto r = detect_cfo_aware(psi, p);
    ASSERT_EQ(r.peaks.size(), 2u);
    EXPECT_TRUE(r.accepted_at(0, 100));
    for (const auto& pk : r.peaks)
        if (pk.lag != 100)
            EXPECT_EQ(pk.cls, PeakClass::discarded_cfo_replica);
}

TEST(CfoAware, NoiselessCfoDeviceSingleAcceptance)
{
    const auto s = c0({{51, 2, 0.3, ""}});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, 10.0, &model);
    const auto psi = noiseless_psi(s);
    const auto r = detect_cfo_aware(psi, p);
    const auto acc = r.accepted();
    ASSERT_EQ(acc.size(), 1u);
    EXPECT_EQ(acc[0], std::make_pair(0, s.true_lag(s.devices[0])));
    // the baseline accepts the replicas as well
    EXPECT_GT(detect_baseline(psi, p.base).accepted().size(), 1u);
}

TEST(CfoAware, TieGoesToLowestLag)
{
    const auto s = c0({});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, 0.0, &model);
    PsiSet psi(2, std::vector<double>(139, 0.0));
    psi[0][90] = 4.0;
    psi[0][(90 + 30) % 139] = 4.0;
    const auto r = detect_cfo_aware(psi, p);
    EXPECT_TRUE(r.accepted_at(0, 90));
    EXPECT_FALSE(r.accepted_at(0, 120));
}

TEST(CfoAware, SubsetPartitionDeterminism)
{
    const auto s = c0({{51, 2, 0.3, ""}, {138, 5, 0.3, ""}});
    const InterferenceModel model = InterferenceModel::nominal(s);
    for (double snr : {-12.0, -6.0, 0.0}) {
        const auto t = cfo_thresholds(s, snr);
        for (int span : {0, 2}) {
            const auto p = make_cfo_params(s, t, &model, span);
            for (std::uint64_t seed = 0; seed < 40; ++seed) {
                const auto psi = noisy(noiseless_psi(s), t.cs.sigma2_z, seed);
                const auto r = detect_cfo_aware(psi, p);
                const auto b = detect_baseline(psi, p.base);
                const auto b_acc = b.accepted();
                std::set<std::pair<int, int>> base(b_acc.begin(), b_acc.end());
                for (const auto& a : r.accepted())
                    EXPECT_TRUE(base.count(a));
                // every candidate exactly once
                std::set<std::pair<int, int>> seen;
                for (const auto& pk : r.peaks)
                    EXPECT_TRUE(seen.insert({pk.root_index, pk.lag}).second);
                EXPECT_EQ(seen, base);
                const auto again = detect_cfo_aware(psi, p);
                ASSERT_EQ(again.peaks.size(), r.peaks.size());
                for (std::size_t i = 0; i < r.peaks.size(); ++i) {
                    EXPECT_EQ(again.peaks[i].lag, r.peaks[i].lag);
                    EXPECT_EQ(again.peaks[i].cls, r.peaks[i].cls);
                }
            }
        }
    }
}

TEST(CfoAware, MatchesBaselineWithoutCfo)
{
    // one device per root, unit gains: grouping and interference checks change nothing
    const auto s = c0({{51, 2, 0.0, ""}, {138, 7, 0.0, ""}});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto p = make_cfo_params(s, 10.0, &model);
    const auto psi = noiseless_psi(s);
    EXPECT_EQ(detect_cfo_aware(psi, p).accepted(), detect_baseline(psi, p.base).accepted());
}

TEST(CfoAware, ClassifyCandidatesEquivalent)
{
    const auto s = c0({{51, 2, 0.3, ""}, {138, 5, -0.2, ""}});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto t = cfo_thresholds(s, -8.0);
    const auto p = make_cfo_params(s, t, &model);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto psi = noisy(noiseless_psi(s), t.cs.sigma2_z, 100 + seed);
        std::vector<std::vector<Candidate>> cands(2);
        for (int r = 0; r < 2; ++r)
            for (int k = 0; k < 139; ++k)
                cands[r].push_back({k, psi[r][k]});
        DetectionReport a, b;
        detect_cfo_aware(psi, p, a);
        classify_candidates(cands, p, b);
        EXPECT_EQ(a.accepted(), b.accepted());
    }
}

TEST(InterferenceModel, ExactOnGrid)
{
    const auto s = c0({{51, 2, 0.3, ""}, {138, 5, -0.2, ""}});
    const InterferenceModel model = InterferenceModel::nominal(s);
    const auto c = closed_form_cfo_corr(51, 39, 0.3, 138, 139).values;
    const int k_src = (139 - 39) % 139;
    for (int k = 0; k < 139; ++k)
        EXPECT_NEAR(model.power(0, k_src, 1, k), std::norm(c[k]), 1e-15);
    EXPECT_EQ(InterferenceModel::none(2, 139).power(0, 3, 1, 4), 0.0);
}

TEST(Conventional, ThresholdAndErrors)
{
    EXPECT_NEAR(conventional_beta(1, 1e-3), std::log(1e3), 1e-12);
    PsiSet psi(1, std::vector<double>(20, 1.0));
    psi[0][4] = 40.0;
    // mean = (19 + 40) / 20 = 2.95, threshold = beta * mean
    const double beta = 10.0;
    const auto r = detect_conventional(psi, beta);
    ASSERT_EQ(r.accepted().size(), 1u);
    EXPECT_TRUE(r.accepted_at(0, 4));
    EXPECT_TRUE(detect_conventional(psi, 20.0).accepted().empty());
    PsiSet short_psi(1, std::vector<double>(8, 1.0));
    EXPECT_THROW(detect_conventional(short_psi, 2.0), DomainError);
}

TEST(Conventional, AcceptsReplicasAtHighSnr)
{
    const auto s = c0({{51, 2, 0.3, ""}});
    const auto psi = noiseless_psi(s);
    const double beta = conventional_beta(1, fa_budget(1e-3, 2, 139));
    EXPECT_GT(detect_conventional(psi, beta).accepted().size(), 1u);
}
