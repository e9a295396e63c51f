#include "prach/correlation.hpp"
#include "prach/error.hpp"
#include "prach/rng.hpp"
#include "prach/zadoff_chu.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace prach;

TEST(ZcRoot, TinyExample)
{
    const auto x = zc_root(1, 3);
    ASSERT_EQ(x.samples.size(), 3u);
    EXPECT_NEAR(std::abs(x.samples[0] - cplx(1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(x.samples[1] - std::polar(1.0, -2.0 * std::numbers::pi / 3.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(x.samples[2] - cplx(1, 0)), 0.0, 1e-15);
}

TEST(ZcRoot, MatchesDefinitionAndUnitModulus)
{
    for (int len : {139, 839})
        for (int u : {1, 51, 138}) {
            const auto x = zc_root(u, len);
            for (int n = 0; n < len; ++n) {
                EXPECT_NEAR(std::abs(x.samples[n]), 1.0, 1e-15);
                const double ph = -std::numbers::pi * u * n * (n + 1.0) / len;
                EXPECT_NEAR(std::abs(x.samples[n] - std::polar(1.0, ph)), 0.0, 1e-9);
            }
        }
}

TEST(ZcRoot, Autocorrelation839)
{
    const auto x = zc_root(2, 839);
    const auto c = circ_corr(x.samples, x.samples).values;
    EXPECT_NEAR(std::abs(c[0]), 1.0, 1e-12);
    for (int k = 1; k < 839; ++k)
        EXPECT_LT(std::abs(c[k]), 1e-12);
}

TEST(ZcRoot, RejectsBadRoots)
{
    EXPECT_THROW(zc_root(0, 139), InvalidRoot);
    EXPECT_THROW(zc_root(139, 139), InvalidRoot);
    EXPECT_THROW(zc_root(5, 140), InvalidRoot);
    EXPECT_THROW(zc_root(-3, 139), InvalidRoot);
}

TEST(CyclicShift, Definition)
{
    const auto x = zc_root(51, 139);
    const auto same = cyclic_shift(x, 0);
    EXPECT_EQ(same.samples, x.samples);
    const auto y = cyclic_shift(x, 13);
    for (int n = 0; n < 139; ++n)
        EXPECT_EQ(y.samples[n], x.samples[(n + 13) % 139]);
    EXPECT_THROW(cyclic_shift(x, 139), DomainError);
    EXPECT_THROW(cyclic_shift(x, -1), DomainError);
}

TEST(CyclicShift, PeakLocation)
{
    const auto x = zc_root(51, 139);
    const auto c = circ_corr(cyclic_shift(x, 13).samples, x.samples).values;
    const int peak = (139 - 13) % 139;
    EXPECT_NEAR(std::abs(c[peak]), 1.0, 1e-12);
    for (int k = 0; k < 139; ++k)
        if (k != peak)
            EXPECT_LT(std::abs(c[k]), 1e-12);
}

TEST(CsSet, Sizes)
{
    const auto a = cs_set(139, 13);
    ASSERT_EQ(a.shifts.size(), 10u);
    EXPECT_EQ(a.shifts.front(), 0);
    EXPECT_EQ(a.shifts.back(), 117);
    EXPECT_EQ(cs_set(139, 139).shifts, std::vector<int>{0});
    EXPECT_EQ(cs_set(839, 13).shifts.size(), 64u);
    EXPECT_THROW(cs_set(139, 0), DomainError);
    EXPECT_THROW(cs_set(139, 140), DomainError);
}

TEST(CsSet, DistinctShiftsAreOrthogonal)
{
    const auto set = cs_set(139, 13);
    const auto x = zc_root(77, 139);
    for (std::size_t a = 0; a < set.shifts.size(); ++a)
        for (std::size_t b = a + 1; b < set.shifts.size(); ++b) {
            const auto c = circ_corr(cyclic_shift(x, set, static_cast<int>(a)).samples,
                                     cyclic_shift(x, set, static_cast<int>(b)).samples)
                               .values;
            const int peak = ((set.shifts[b] - set.shifts[a]) % 139 + 139) % 139;
            for (int k = 0; k < 139; ++k)
                EXPECT_NEAR(std::abs(c[k]), k == peak ? 1.0 : 0.0, 1e-12);
        }
}

TEST(ApplyCfo, IdentityCases)
{
    const auto x = zc_root(51, 139);
    EXPECT_EQ(apply_cfo(x, 0.0), x.samples);
    const auto full = apply_cfo(x, 139.0);
    for (int n = 0; n < 139; ++n)
        EXPECT_NEAR(std::abs(full[n] - x.samples[n]), 0.0, 1e-12);
}

TEST(ApplyCfo, ReplicaOrdering)
{
    // maxima of the CFO profile sit at k_t + b d with d = 30 and decrease with |b|
    const int len = 139;
    const auto x = zc_root(51, len);
    const auto y = apply_cfo(cyclic_shift(x, 26), 0.3);
    const auto c = circ_corr(y, x.samples).values;
    const int kt = len - 26;
    const int d = 30;
    std::vector<double> mag(len);
    for (int k = 0; k < len; ++k)
        mag[k] = std::abs(c[k]);
    EXPECT_EQ(std::max_element(mag.begin(), mag.end()) - mag.begin(), kt % len);
    // the first replica is the second largest sample
    std::vector<double> sorted = mag;
    std::sort(sorted.rbegin(), sorted.rend());
    EXPECT_EQ(mag[(kt + d) % len], sorted[1]);
    for (int b = 1; b < 4; ++b)
        EXPECT_GT(mag[(kt + b * d) % len], mag[(kt + (b + 1) * d) % len]);
}

TEST(Dft, OnesAndRoundTrip)
{
    const CVec ones(4, cplx(1, 0));
    const auto f = dft(ones);
    EXPECT_NEAR(std::abs(f[0] - cplx(4, 0)), 0.0, 1e-14);
    for (int k = 1; k < 4; ++k)
        EXPECT_NEAR(std::abs(f[k]), 0.0, 1e-14);

    Rng rng = make_stream(3, StreamPurpose::test, 0);
    Gaussian g(rng);
    for (int len : {139, 839}) {
        CVec x(len);
        for (auto& v : x)
            v = g.complex();
        const auto X = dft(x);
        const auto back = idft(X);
        double e = 0.0, t = 0.0, f2 = 0.0;
        for (int n = 0; n < len; ++n) {
            e = std::max(e, std::abs(back[n] - x[n]));
            t += std::norm(x[n]);
            f2 += std::norm(X[n]);
        }
        EXPECT_LT(e, 1e-12);
        EXPECT_NEAR(t, f2 / len, 1e-10 * t);
    }
}

TEST(ModInverse, ExtendedEuclid)
{
    EXPECT_EQ(mod_inverse(51, 139), 30);
    EXPECT_EQ(mod_inverse(1, 139), 1);
    for (int u = 1; u < 139; ++u)
        EXPECT_EQ((mod_inverse(u, 139) * u) % 139, 1);
}
