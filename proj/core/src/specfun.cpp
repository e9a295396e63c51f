// SPDX-License-Identifier: Apache-2.0
#include "prach/specfun.hpp"

#include "prach/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace prach {

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error([&] {
          std::string msg = "invalid scenario";
          for (const auto& i : issues)
              msg += "; " + i.field + ": " + i.message;
          return msg;
      }()),
      issues_(std::move(issues))
{
}

namespace {

void check_gamma_args(double a, double x)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("incomplete gamma: shape must be positive, got " + std::to_string(a));
    if (!(x >= 0.0))
        throw DomainError("incomplete gamma: argument must be nonnegative, got " + std::to_string(x));
}

// log of y^a e^{-y} / Gamma(a+1)
double log_gamma_step(double a, double y)
{
    if (y <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return a * std::log(y) - y - std::lgamma(a + 1.0);
}

struct PoissonRange {
    long lo;
    long hi;
};

PoissonRange poisson_range(double m)
{
    const double s = std::sqrt(m);
    const long lo = std::max(0L, static_cast<long>(std::floor(m - 12.0 * s - 20.0)));
    const long hi = static_cast<long>(std::ceil(m + 12.0 * s + 40.0));
    return {lo, hi};
}

double poisson_logpmf(long j, double m)
{
    if (m == 0.0)
        return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    return -m + static_cast<double>(j) * std::log(m) - std::lgamma(static_cast<double>(j) + 1.0);
}

// Halves of the Poisson-mixture representation of Q_M:
// upper = sum_j w_j Q(M+j, y), lower = sum_j w_j P(M+j, y), each with an additive recurrence.

double marcum_upper(int order, double m, double y)
{
    const auto [lo, hi] = poisson_range(m);
    double upper = 0.0;
    double shape = order + static_cast<double>(lo);
    double q = boost::math::gamma_q(shape, y);
    double logt = log_gamma_step(shape, y);
    double logw = poisson_logpmf(lo, m);
    const double logm = std::log(m);
    const double logy = y > 0.0 ? std::log(y) : 0.0;
    for (long j = lo; j <= hi; ++j) {
        upper += std::exp(logw) * q;
        q = std::min(1.0, q + std::exp(logt));
        shape += 1.0;
        logt += logy - std::log(shape);
        logw += logm - std::log(static_cast<double>(j + 1));
    }
    return upper;
}

double marcum_lower(int order, double m, double y)
{
    const auto [lo, hi] = poisson_range(m);
    double lower = 0.0;
    double shape = order + static_cast<double>(hi);
    double p = boost::math::gamma_p(shape, y);
    const double logm = std::log(m);
    const double logy = y > 0.0 ? std::log(y) : 0.0;
    double logw = poisson_logpmf(hi, m);
    double logt = log_gamma_step(shape - 1.0, y);
    for (long j = hi; j >= lo; --j) {
        lower += std::exp(logw) * p;
        if (j == lo)
            break;
        // P(s-1, y) = P(s, y) + y^{s-1} e^{-y} / Gamma(s)
        p = std::min(1.0, p + std::exp(logt));
        shape -= 1.0;
        logt -= logy - std::log(shape);
        logw -= logm - std::log(static_cast<double>(j));
    }
    return lower;
}

void check_mix(const GeneralizedChiSquareMix& d)
{
    if (d.alpha < 1 || d.beta < 1)
        throw DomainError("generalized chi-square mix: alpha and beta must be >= 1");
    if (d.beta > d.alpha)
        throw DomainError("generalized chi-square mix: beta > alpha is not supported");
    if (!(d.scale_x > 0.0) || !(d.scale_lambda >= 0.0))
        throw DomainError("generalized chi-square mix: invalid scales");
}

constexpr double mix_abs_tol = 1e-13;
constexpr double mix_rel_tol = 1e-14;
// beyond this mean Poisson-weight index the series is slower than quadrature
constexpr double mix_series_limit = 20.0;

bool use_series(const GeneralizedChiSquareMix& d)
{
    return d.beta * d.scale_lambda <= mix_series_limit;
}

// integral over b of f_B(b) g(x - b), B ~ Gamma(k, theta_b), b in [0, min(x, upper)]
template <class G>
double integrate_small_part(double k, double theta_b, double x, G g)
{
    const double upper = std::min(x, theta_b * (k + 40.0 * std::sqrt(k) + 80.0));
    auto f = [&](double b) { return boost::math::gamma_p_derivative(k, b / theta_b) / theta_b * g(x - b); };
    // the density peaks near (k - 1) theta_b; split there so both halves are smooth
    const double mode = std::min(upper, std::max(0.0, (k - 1.0) * theta_b));
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double acc = 0.0;
    if (mode > 0.0)
        acc += GK::integrate(f, 0.0, mode, 6, 1e-11);
    if (upper > mode)
        acc += GK::integrate(f, mode, upper, 6, 1e-11);
    return acc;
}

} // namespace

double upper_inc_gamma_reg(double a, double x)
{
    check_gamma_args(a, x);
    if (x == 0.0)
        return 1.0;
    if (std::isinf(x))
        return 0.0;
    return boost::math::gamma_q(a, x);
}

double lower_inc_gamma_reg(double a, double x)
{
    check_gamma_args(a, x);
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    return boost::math::gamma_p(a, x);
}

double inv_upper_inc_gamma_reg(double a, double p)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("inverse incomplete gamma: shape must be positive");
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("inverse incomplete gamma: probability must lie in (0,1), got " + std::to_string(p));

    // g(x) is increasing in x and vanishes at the root; the log form keeps relative accuracy for small p.
    const bool use_log = p < 0.5;
    const double logp = std::log(p);
    const double one_minus_p = 1.0 - p;
    auto g = [&](double x) {
        if (use_log)
            return logp - std::log(boost::math::gamma_q(a, x));
        return boost::math::gamma_p(a, x) - one_minus_p;
    };
    auto dg = [&](double x) {
        const double dens = boost::math::gamma_p_derivative(a, x);
        if (use_log)
            return dens / boost::math::gamma_q(a, x);
        return dens;
    };

    double lo = 0.0;
    double hi = 2.0 * a + 40.0;
    int expand = 0;
    while (g(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++expand > 60)
            throw ConvergenceError("inverse incomplete gamma: bracket expansion failed");
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double gx = g(x);
        if (gx == 0.0)
            return x;
        if (gx < 0.0)
            lo = x;
        else
            hi = x;
        const double d = dg(x);
        double next = (d > 0.0 && std::isfinite(d)) ? x - gx / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, x) || hi - lo <= 1e-15 * hi)
            return next;
        x = next;
    }
    throw ConvergenceError("inverse incomplete gamma: iteration cap reached");
}

double bessel_i(double nu, double x)
{
    if (x < 0.0)
        throw DomainError("bessel_i: negative argument");
    return std::cyl_bessel_i(nu, x);
}

double marcum_q(int order, double a, double b)
{
    if (order < 1)
        throw DomainError("marcum_q: order must be >= 1");
    if (a < 0.0 || b < 0.0)
        throw DomainError("marcum_q: arguments must be nonnegative");
    if (b == 0.0)
        return 1.0;
    if (a == 0.0)
        return boost::math::gamma_q(static_cast<double>(order), 0.5 * b * b);
    const double m = 0.5 * a * a, y = 0.5 * b * b;
    // start from the side that is more likely to be the small one
    if (y > m + order) {
        const double upper = marcum_upper(order, m, y);
        if (upper < 0.5)
            return std::clamp(upper, 0.0, 1.0);
        return std::clamp(1.0 - marcum_lower(order, m, y), 0.0, 1.0);
    }
    const double lower = marcum_lower(order, m, y);
    if (lower < 0.5)
        return std::clamp(1.0 - lower, 0.0, 1.0);
    return std::clamp(marcum_upper(order, m, y), 0.0, 1.0);
}

double marcum_q_complement(int order, double a, double b)
{
    if (order < 1)
        throw DomainError("marcum_q: order must be >= 1");
    if (a < 0.0 || b < 0.0)
        throw DomainError("marcum_q: arguments must be nonnegative");
    if (b == 0.0)
        return 0.0;
    if (a == 0.0)
        return boost::math::gamma_p(static_cast<double>(order), 0.5 * b * b);
    const double m = 0.5 * a * a, y = 0.5 * b * b;
    if (y > m + order) {
        const double upper = marcum_upper(order, m, y);
        if (upper < 0.5)
            return std::clamp(1.0 - upper, 0.0, 1.0);
        return std::clamp(marcum_lower(order, m, y), 0.0, 1.0);
    }
    const double lower = marcum_lower(order, m, y);
    if (lower < 0.5)
        return std::clamp(lower, 0.0, 1.0);
    return std::clamp(1.0 - marcum_upper(order, m, y), 0.0, 1.0);
}

double ScaledChiSquare::cdf(double x) const
{
    if (x <= offset)
        return 0.0;
    return lower_inc_gamma_reg(dof_half, (x - offset) / (2.0 * scale));
}

double ScaledChiSquare::ccdf(double x) const
{
    if (x <= offset)
        return 1.0;
    return upper_inc_gamma_reg(dof_half, (x - offset) / (2.0 * scale));
}

double NoncentralChiSquare::ccdf(double x) const
{
    if (x <= 0.0)
        return 1.0;
    return marcum_q(dof_half, std::sqrt(noncentrality), std::sqrt(x / scale));
}

double NoncentralChiSquare::cdf(double x) const
{
    if (x <= 0.0)
        return 0.0;
    return marcum_q_complement(dof_half, std::sqrt(noncentrality), std::sqrt(x / scale));
}

double NoncentralChiSquare::pdf(double x) const
{
    if (x < 0.0)
        return 0.0;
    const double m = 0.5 * noncentrality;
    const double y = x / (2.0 * scale);
    const auto [lo, hi] = poisson_range(m);
    double acc = 0.0;
    for (long j = lo; j <= hi; ++j) {
        acc += std::exp(poisson_logpmf(j, m)) * boost::math::gamma_p_derivative(dof_half + static_cast<double>(j), y);
        if (m == 0.0)
            break;
    }
    return acc / (2.0 * scale);
}

double mix_cdf(const GeneralizedChiSquareMix& d, double x)
{
    check_mix(d);
    if (x <= 0.0)
        return 0.0;
    if (d.alpha == d.beta)
        return lower_inc_gamma_reg(d.alpha, x / (2.0 * d.scale_x * (1.0 + d.scale_lambda)));
    const double y = x / (2.0 * d.scale_x);
    if (d.scale_lambda == 0.0)
        return lower_inc_gamma_reg(d.alpha, y);
    if (!use_series(d))
        return mix_cdf_quadrature(d, x);

    const double q = d.scale_lambda / (1.0 + d.scale_lambda);
    const double logq = std::log(d.scale_lambda) - std::log1p(d.scale_lambda);
    double logw = -d.beta * std::log1p(d.scale_lambda);
    double shape = d.alpha;
    double p = boost::math::gamma_p(shape, y);
    double logt = log_gamma_step(shape, y);
    const double logy = std::log(y);
    double acc = 0.0;

    for (int j = 0; j < mix_max_terms; ++j) {
        const double w = std::exp(logw);
        acc += w * p;
        // advance to term j+1
        p = std::max(0.0, p - std::exp(logt));
        shape += 1.0;
        logt += logy - std::log(shape);
        if ((j + 1) % 64 == 0)
            p = boost::math::gamma_p(shape, y);
        logw += logq + std::log((j + d.beta) / static_cast<double>(j + 1));
        const double r = q * (j + 1.0 + d.beta) / (j + 2.0);
        if (r < 1.0) {
            const double tail = p * std::exp(logw) / (1.0 - r);
            if (tail < mix_abs_tol)
                return std::clamp(acc, 0.0, 1.0);
        }
    }
    throw ConvergenceError("mix_cdf: series did not converge within the term cap");
}

double mix_ccdf(const GeneralizedChiSquareMix& d, double x)
{
    check_mix(d);
    if (x <= 0.0)
        return 1.0;
    if (d.alpha == d.beta)
        return upper_inc_gamma_reg(d.alpha, x / (2.0 * d.scale_x * (1.0 + d.scale_lambda)));
    const double y = x / (2.0 * d.scale_x);
    if (d.scale_lambda == 0.0)
        return upper_inc_gamma_reg(d.alpha, y);
    if (!use_series(d))
        return mix_ccdf_quadrature(d, x);

    const double q = d.scale_lambda / (1.0 + d.scale_lambda);
    const double logq = std::log(d.scale_lambda) - std::log1p(d.scale_lambda);
    double logw = -d.beta * std::log1p(d.scale_lambda);
    double shape = d.alpha;
    double qv = boost::math::gamma_q(shape, y);
    double logt = log_gamma_step(shape, y);
    const double logy = std::log(y);
    double acc = 0.0;

    for (int j = 0; j < mix_max_terms; ++j) {
        acc += std::exp(logw) * qv;
        qv = std::min(1.0, qv + std::exp(logt));
        shape += 1.0;
        logt += logy - std::log(shape);
        logw += logq + std::log((j + d.beta) / static_cast<double>(j + 1));
        const double r = q * (j + 1.0 + d.beta) / (j + 2.0);
        if (r < 1.0) {
            const double tail = std::exp(logw) / (1.0 - r);
            if (tail <= mix_rel_tol * acc || tail < 1e-300)
                return std::clamp(acc, 0.0, 1.0);
        }
    }
    throw ConvergenceError("mix_ccdf: series did not converge within the term cap");
}

double mix_cdf_quadrature(const GeneralizedChiSquareMix& d, double x)
{
    check_mix(d);
    if (x <= 0.0)
        return 0.0;
    const double theta_a = 2.0 * d.scale_x * (1.0 + d.scale_lambda);
    if (d.alpha == d.beta)
        return lower_inc_gamma_reg(d.beta, x / theta_a);
    const double k = d.alpha - d.beta, theta_b = 2.0 * d.scale_x;
    const double v = integrate_small_part(k, theta_b, x, [&](double r) { return boost::math::gamma_p(d.beta, r / theta_a); });
    return std::clamp(v, 0.0, 1.0);
}

double mix_ccdf_quadrature(const GeneralizedChiSquareMix& d, double x)
{
    check_mix(d);
    if (x <= 0.0)
        return 1.0;
    const double theta_a = 2.0 * d.scale_x * (1.0 + d.scale_lambda);
    if (d.alpha == d.beta)
        return upper_inc_gamma_reg(d.beta, x / theta_a);
    const double k = d.alpha - d.beta, theta_b = 2.0 * d.scale_x;
    const double v = boost::math::gamma_q(k, x / theta_b) +
                     integrate_small_part(k, theta_b, x, [&](double r) { return boost::math::gamma_q(d.beta, r / theta_a); });
    return std::clamp(v, 0.0, 1.0);
}

} // namespace prach
