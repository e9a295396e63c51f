#include "prach/channel.hpp"
#include "prach/correlation.hpp"
#include "prach/receiver.hpp"
#include "prach/specfun.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace prach;

namespace {

Scenario make(const char* fmt, Coherence c, int n_ant, std::vector<Device> devs)
{
    Scenario s;
    s.format = PrachFormat::by_name(fmt);
    s.roots = {51, 138};
    s.devices = std::move(devs);
    s.n_ant = n_ant;
    s.coherence = c;
    s.snr_db = {0.0};
    return s;
}

} // namespace

TEST(Correlate, NoiselessSameRootDevice)
{
    const auto s = make("C0", Coherence::independent, 1, {{51, 3, 0.0, ""}});
    ChannelRealization ch{1, 1, 1, Coherence::independent, {cplx(1, 0)}};
    Rng rng = make_stream(1, StreamPurpose::test, 0);
    const auto out = correlate(assemble_received(s, ch, 0.0, rng), 51);
    const int kt = s.true_lag(s.devices[0]);
    for (int k = 0; k < 139; ++k)
        EXPECT_NEAR(std::abs(out.phi[k]), k == kt ? 1.0 : 0.0, 1e-12);
}

TEST(Correlate, NoiselessCrossRootDevice)
{
    const auto s = make("C0", Coherence::independent, 1, {{138, 3, 0.0, ""}});
    ChannelRealization ch{1, 1, 1, Coherence::independent, {cplx(1, 0)}};
    Rng rng = make_stream(1, StreamPurpose::test, 0);
    const auto out = correlate(assemble_received(s, ch, 0.0, rng), 51);
    for (const auto& v : out.phi)
        EXPECT_NEAR(std::abs(v), 1.0 / std::sqrt(139.0), 1e-12);
}

TEST(Correlate, NoiseVariance)
{
    const auto s = make("C0", Coherence::independent, 1, {});
    Rng rng = make_stream(2, StreamPurpose::test, 0);
    const auto ch = draw_channel(s, rng);
    const double sigma_w = noise_sigma_from_snr(-5.0);
    double acc = 0.0;
    long n = 0;
    for (int t = 0; t < 800; ++t) {
        const auto out = correlate(assemble_received(s, ch, sigma_w, rng), 51);
        for (const auto& v : out.phi) {
            acc += v.real() * v.real();
            ++n;
        }
    }
    const double want = sigma_w * sigma_w / 139.0;
    EXPECT_NEAR(acc / n, want, 0.02 * want);
}

TEST(Combine, ArithmeticExamples)
{
    CorrelatorOutput phi{2, 1, 3, 51, CVec(6, cplx(1, 0))};
    for (double v : combine_pc(phi).psi)
        EXPECT_DOUBLE_EQ(v, 2.0);
    for (double v : combine_cc(phi).psi)
        EXPECT_DOUBLE_EQ(v, 4.0);
    CorrelatorOutput one{1, 2, 3, 51, {cplx(1, 2), cplx(0, 1), cplx(3, 0), cplx(-1, 0), cplx(0, 0), cplx(1, 1)}};
    EXPECT_EQ(combine_pc(one).psi, combine_cc(one).psi);
}

TEST(Combine, CauchySchwarzOrdering)
{
    Rng rng = make_stream(3, StreamPurpose::test, 0);
    Gaussian g(rng);
    for (int t = 0; t < 200; ++t) {
        CorrelatorOutput phi{4, 2, 11, 51, CVec(4 * 2 * 11)};
        for (auto& v : phi.phi)
            v = g.complex();
        const auto pc = combine_pc(phi).psi;
        const auto cc = combine_cc(phi).psi;
        for (int k = 0; k < 11; ++k)
            EXPECT_LE(cc[k], 4.0 * pc[k] * (1 + 1e-12));
    }
}

TEST(Combine, IdenticalChannelNoiseless)
{
    const auto s = make("B2", Coherence::identical, 2, {{51, 1, 0.0, ""}});
    Rng rng = make_stream(4, StreamPurpose::test, 0);
    const auto ch = draw_channel(s, rng);
    const ProfileCache cache(s);
    const auto mu = mu_fast(s, ch, 51, cache);
    const int kt = s.true_lag(s.devices[0]);
    double h2 = 0.0;
    for (int i = 0; i < 2; ++i)
        h2 += std::norm(ch.at(0, 0, i));
    EXPECT_NEAR(combine_cc(mu).psi[kt], 16.0 * h2, 1e-10);
    EXPECT_NEAR(combine_pc(mu).psi[kt], 4.0 * h2, 1e-10);
    EXPECT_NEAR(combine_cc(mu).psi[kt], 4.0 * combine_pc(mu).psi[kt], 1e-10);
}

TEST(MuFast, MatchesFullPath)
{
    const auto s = make("B1", Coherence::independent, 2, {{51, 1, 0.3, ""}, {138, 6, -0.2, ""}, {51, 4, 0.0, ""}});
    Rng rng = make_stream(5, StreamPurpose::test, 0);
    const ProfileCache cache(s);
    for (int t = 0; t < 5; ++t) {
        const auto ch = draw_channel(s, rng);
        const auto grid = assemble_received(s, ch, 0.0, rng);
        for (int u : s.roots) {
            const auto full = correlate(grid, u);
            const auto fast = mu_fast(s, ch, u, cache);
            for (std::size_t j = 0; j < full.phi.size(); ++j)
                EXPECT_NEAR(std::abs(full.phi[j] - fast.phi[j]), 0.0, 1e-12);
        }
    }
}

TEST(MuFast, DistributionMatchesFullPathWithNoise)
{
    // two-sample KS between psi from the full path and from mu + correlator noise
    const auto s = make("C0", Coherence::independent, 1, {{51, 2, 0.3, ""}, {138, 3, 0.0, ""}});
    const ProfileCache cache(s);
    const double sigma_w = noise_sigma_from_snr(-6.0);
    const double sigma_z = sigma_w / std::sqrt(139.0);
    Rng ra = make_stream(6, StreamPurpose::test, 0);
    Rng rb = make_stream(6, StreamPurpose::test, 1);
    Gaussian nb(rb);
    const int n = 20000;
    const int lag = (s.true_lag(s.devices[0]) + 30) % 139;
    std::vector<double> a(n), b(n);
    for (int t = 0; t < n; ++t) {
        const auto ch = draw_channel(s, ra);
        a[t] = combine_pc(correlate(assemble_received(s, ch, sigma_w, ra), 51)).psi[lag];
        const auto ch2 = draw_channel(s, rb);
        auto mu = mu_fast(s, ch2, 51, cache);
        const double re = nb();
        mu.phi[lag] += sigma_z * cplx(re, nb());
        b[t] = std::norm(mu.phi[lag]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / n));
    }
    // 99.9% two-sample critical value
    EXPECT_LT(d, 1.9495 * std::sqrt(2.0 / n));
}

TEST(Combine, NoiseOnlyPcIsScaledChiSquare)
{
    const auto s = make("B1", Coherence::independent, 2, {});
    const ProfileCache cache(s);
    Rng rng = make_stream(7, StreamPurpose::test, 0);
    Gaussian g(rng);
    const double sz2 = 0.37;
    const int n = 40000;
    std::vector<double> x(n);
    for (auto& v : x) {
        CorrelatorOutput phi{2, 2, 1, 51, CVec(4)};
        for (auto& z : phi.phi) {
            const double re = g();
            z = std::sqrt(sz2) * cplx(re, g());
        }
        v = combine_pc(phi).psi[0] / sz2;
    }
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = lower_inc_gamma_reg(4.0, x[i] / 2.0);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    EXPECT_LT(d, 1.9495 / std::sqrt(static_cast<double>(n)));
}
