#include "prach/error.hpp"
#include "prach/specfun.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

using namespace prach;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000)
{
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Rice density of R = sqrt(X), X noncentral chi-square with 2M dof and noncentrality a^2
double marcum_by_quadrature(int m, double a, double b)
{
    auto pdf = [&](double x) {
        if (x == 0.0)
            return 0.0;
        return x * std::pow(x / a, m - 1) * std::exp(-0.5 * (x - a) * (x - a)) *
               std::cyl_bessel_i(m - 1, a * x) * std::exp(-a * x);
    };
    return simpson(pdf, b, b + a + 40.0, 40000);
}

} // namespace

TEST(UpperIncGamma, TrivialValues)
{
    EXPECT_DOUBLE_EQ(upper_inc_gamma_reg(1.0, 0.0), 1.0);
    EXPECT_NEAR(upper_inc_gamma_reg(1.0, std::log(2.0)), 0.5, 1e-15);
}

TEST(UpperIncGamma, MatchesQuadrature)
{
    // mpmath reference, 40 digits
    const double frozen = 0.54381311588332951800;
    const double oracle = simpson([](double t) { return t * t * std::exp(-t); }, 2.5, 80.0) / 2.0;
    EXPECT_NEAR(oracle, frozen, 1e-12);
    EXPECT_NEAR(upper_inc_gamma_reg(3.0, 2.5), frozen, 1e-12 * frozen);
}

TEST(UpperIncGamma, DomainErrors)
{
    EXPECT_THROW(upper_inc_gamma_reg(0.0, 1.0), DomainError);
    EXPECT_THROW(upper_inc_gamma_reg(1.0, -1.0), DomainError);
    EXPECT_THROW(inv_upper_inc_gamma_reg(1.0, 0.0), DomainError);
    EXPECT_THROW(inv_upper_inc_gamma_reg(1.0, 1.0), DomainError);
}

TEST(UpperIncGamma, MonotoneWithLimits)
{
    for (double a : {0.5, 1.0, 3.0, 17.0, 120.0}) {
        double prev = upper_inc_gamma_reg(a, 0.0);
        EXPECT_EQ(prev, 1.0);
        for (int i = 1; i <= 400; ++i) {
            const double v = upper_inc_gamma_reg(a, 0.01 * i * i);
            EXPECT_LE(v, prev);
            prev = v;
        }
        EXPECT_LT(upper_inc_gamma_reg(a, 1e4), 1e-300);
    }
}

TEST(InverseIncGamma, Examples)
{
    EXPECT_NEAR(inv_upper_inc_gamma_reg(1.0, std::exp(-3.0)), 3.0, 1e-12);
    EXPECT_NEAR(inv_upper_inc_gamma_reg(1.0, 3.5987e-6), 12.534937888829639, 1e-9);
    const double x = inv_upper_inc_gamma_reg(4.0, 0.5);
    EXPECT_NEAR(x, 3.6720607488508961, 1e-10);
    // bisection oracle
    double lo = 0.0, hi = 50.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (upper_inc_gamma_reg(4.0, mid) > 0.5 ? lo : hi) = mid;
    }
    EXPECT_NEAR(x, 0.5 * (lo + hi), 1e-10);
}

TEST(InverseIncGamma, RoundTripGrid)
{
    for (int a = 1; a <= 32; ++a)
        for (double lp = -9.0; lp <= 0.0; lp += 0.25) {
            for (double p : {std::pow(10.0, lp) * (1.0 - 1e-9), 1.0 - std::pow(10.0, lp) * 0.999999}) {
                if (!(p > 0.0 && p < 1.0))
                    continue;
                const double x = inv_upper_inc_gamma_reg(a, p);
                EXPECT_NEAR(upper_inc_gamma_reg(a, x), p, 1e-9 * std::max(p, 1e-3)) << "a=" << a << " p=" << p;
                // reg o inv o reg
                const double y = 0.37 * a + 0.1 * (lp + 10.0);
                EXPECT_NEAR(inv_upper_inc_gamma_reg(a, upper_inc_gamma_reg(a, y)), y, 1e-9 * y);
            }
        }
}

TEST(MarcumQ, TrivialValues)
{
    EXPECT_NEAR(marcum_q(1, 0.0, 2.0), std::exp(-2.0), 1e-15);
    EXPECT_DOUBLE_EQ(marcum_q(2, 1.0, 0.0), 1.0);
}

TEST(MarcumQ, MatchesRiceQuadrature)
{
    // mpmath references
    EXPECT_NEAR(marcum_q(1, 1.5, 2.0), 0.42367928047800051519, 1e-12);
    EXPECT_NEAR(marcum_q(3, 2.0, 3.0), 0.51096638787748584609, 1e-12);
    for (int m : {1, 2, 4})
        for (double a : {0.3, 1.5, 4.0})
            for (double b : {0.5, 2.0, 5.0})
                EXPECT_NEAR(marcum_q(m, a, b), marcum_by_quadrature(m, a, b), 1e-9) << m << ' ' << a << ' ' << b;
}

TEST(MarcumQ, ComplementIsPoissonSeries)
{
    // 1 - Q_M(a,b) = sum_j e^{-a^2/2} (a^2/2)^j / j! * P(M + j, b^2/2)
    for (int m : {1, 3, 6})
        for (double a : {0.5, 3.0, 9.0, 30.0})
            for (double b : {0.2, 3.0, 9.5, 31.0}) {
                const double lam = 0.5 * a * a;
                double series = 0.0;
                for (int j = 0; j < 4000; ++j) {
                    const double w = std::exp(-lam + j * std::log(lam) - std::lgamma(j + 1.0));
                    series += w * lower_inc_gamma_reg(m + j, 0.5 * b * b);
                }
                EXPECT_NEAR(1.0 - marcum_q(m, a, b), series, 1e-10);
                EXPECT_NEAR(marcum_q_complement(m, a, b), series, 1e-10);
            }
}

TEST(NoncentralChiSquare, CdfCcdfPdf)
{
    const NoncentralChiSquare d{2, 0.7, 3.0};
    EXPECT_NEAR(d.cdf(4.0) + d.ccdf(4.0), 1.0, 1e-14);
    // pdf integrates to the cdf
    EXPECT_NEAR(simpson([&](double x) { return d.pdf(x); }, 0.0, 4.0), d.cdf(4.0), 1e-9);
    EXPECT_NEAR(d.mean(), 0.7 * (4.0 + 3.0), 1e-15);
}

TEST(ScaledChiSquare, MatchesGamma)
{
    const ScaledChiSquare d{3, 0.5, 0.0};
    EXPECT_NEAR(d.cdf(2.0), lower_inc_gamma_reg(3.0, 2.0), 1e-15);
    EXPECT_NEAR(d.ccdf(2.0), upper_inc_gamma_reg(3.0, 2.0), 1e-15);
    EXPECT_DOUBLE_EQ(d.mean(), 3.0);
}

TEST(MixCdf, Examples)
{
    EXPECT_EQ(mix_cdf({3, 2, 1.0, 0.5}, 0.0), 0.0);
    const ScaledChiSquare reduced{2, 4.0, 0.0};
    EXPECT_NEAR(mix_cdf({2, 2, 1.0, 3.0}, 4.0), reduced.cdf(4.0), 1e-12);
    // negative-binomial series evaluated in mpmath
    EXPECT_NEAR(mix_cdf({4, 1, 1.0, 2.0}, 6.0), 0.17537358362724270209, 1e-12);
}

TEST(MixCdf, SamplingOracle)
{
    // Lambda ~ s_l chi2_{2b}; X | Lambda ~ s_x chi'2_{2a}(Lambda)
    Rng rng = make_stream(11, StreamPurpose::test, 0);
    Gaussian normal(rng);
    const GeneralizedChiSquareMix d{4, 1, 1.0, 2.0};
    const long n = 2000000;
    long below = 0;
    for (long i = 0; i < n; ++i) {
        const double lam = sample_chi2(normal, 1, 2.0);
        const double mu = std::sqrt(lam);
        const double z = normal() + mu;
        double x = z * z;
        for (int j = 1; j < 2 * d.alpha; ++j) {
            const double t = normal();
            x += t * t;
        }
        below += x <= 6.0;
    }
    const double p = mix_cdf(d, 6.0);
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_NEAR(static_cast<double>(below) / n, p, 4 * se);
}

TEST(MixCdf, ReductionAndMonotonicity)
{
    for (int a : {1, 2, 5})
        for (double sl : {0.1, 1.0, 30.0}) {
            const GeneralizedChiSquareMix d{a, a, 0.7, sl};
            const ScaledChiSquare red{a, 0.7 * (1.0 + sl), 0.0};
            double prev = 0.0;
            for (int i = 0; i < 100; ++i) {
                const double x = 0.05 * i * i * (1.0 + sl);
                EXPECT_NEAR(mix_cdf(d, x), red.cdf(x), 1e-12);
            }
            for (int i = 0; i < 1000; ++i) {
                const double v = mix_cdf({2 * a + 1, a, 0.7, sl}, 0.02 * i * (1.0 + sl));
                EXPECT_GE(v, prev - 1e-15);
                prev = v;
            }
        }
}

TEST(MixCdf, ComplementConsistent)
{
    const GeneralizedChiSquareMix d{6, 2, 0.3, 5.0};
    for (double x : {0.1, 1.0, 5.0, 20.0, 80.0})
        EXPECT_NEAR(mix_cdf(d, x) + mix_ccdf(d, x), 1.0, 1e-12);
}

TEST(MixCdf, SeriesAgreesWithQuadrature)
{
    for (int a : {2, 4, 9, 24})
        for (int b : {1, 2, 8})
            for (double sl : {0.1, 1.0, 3.0, 15.0}) {
                if (b > a || b * sl > 20.0)
                    continue;
                const GeneralizedChiSquareMix d{a, b, 0.4, sl};
                const double m = d.mean();
                for (double x : {0.05 * m, 0.5 * m, m, 3.0 * m, 8.0 * m}) {
                    EXPECT_NEAR(mix_cdf(d, x), mix_cdf_quadrature(d, x), 1e-11);
                    const double c = mix_ccdf(d, x);
                    EXPECT_NEAR(mix_ccdf_quadrature(d, x), c, 1e-10 * c + 1e-300);
                }
            }
    EXPECT_NEAR(mix_cdf_quadrature({4, 1, 1.0, 2.0}, 6.0), 0.17537358362724270209, 1e-12);
}

TEST(MixCdf, LargeLambdaScale)
{
    // series would need ~1e5 terms here
    const GeneralizedChiSquareMix d{12, 4, 1e-4, 5e4};
    double prev = 1.0;
    for (double x = 0.01; x < 1e3; x *= 1.5) {
        const double c = mix_ccdf(d, x);
        EXPECT_LE(c, prev);
        EXPECT_NEAR(c + mix_cdf(d, x), 1.0, 1e-12);
        prev = c;
    }
    // the large gamma dominates: compare with it alone, shifted by the small part's mean
    const double theta_a = 2e-4 * (1.0 + 5e4);
    EXPECT_NEAR(mix_ccdf(d, 80.0), upper_inc_gamma_reg(4, (80.0 - 16e-4) / theta_a), 1e-6);
}

TEST(MixCdf, RejectsBetaAboveAlpha)
{
    EXPECT_THROW(mix_cdf({1, 2, 1.0, 1.0}, 1.0), DomainError);
}

TEST(SampleChi2, Moments)
{
    Rng rng = make_stream(5, StreamPurpose::test, 1);
    Gaussian normal(rng);
    const long n = 1000000;
    double s1 = 0.0, t1 = 0.0, t2 = 0.0;
    for (long i = 0; i < n; ++i) {
        s1 += sample_chi2(normal, 1, 0.5);
        const double v = sample_chi2(normal, 3, 1.0);
        t1 += v;
        t2 += v * v;
    }
    EXPECT_NEAR(s1 / n, 1.0, 0.01);
    const double m = t1 / n;
    EXPECT_NEAR(m, 6.0, 0.06);
    EXPECT_NEAR(t2 / n - m * m, 12.0, 0.12 * 2);
}

TEST(SampleChi2, KolmogorovSmirnov)
{
    Rng rng = make_stream(9, StreamPurpose::test, 2);
    Gaussian normal(rng);
    const int n = 20000;
    std::vector<double> x(n);
    for (auto& v : x)
        v = sample_chi2(normal, 2, 1.5);
    std::sort(x.begin(), x.end());
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = lower_inc_gamma_reg(2.0, x[i] / 3.0);
        dmax = std::max({dmax, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    // 99.9% critical value 1.9495 / sqrt(n)
    EXPECT_LT(dmax, 1.9495 / std::sqrt(static_cast<double>(n)));
}
