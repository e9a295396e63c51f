// SPDX-License-Identifier: Apache-2.0
#include "prach/correlation.hpp"

#include "prach/error.hpp"

#include <cmath>
#include <numbers>

namespace prach {

namespace {

void check_lengths(std::size_t a, std::size_t b)
{
    if (a != b)
        throw DomainError("correlation: length mismatch");
    if (a == 0)
        throw DomainError("correlation: empty input");
}

long long mod(long long a, long long m)
{
    const long long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

CorrelationProfile circ_corr(std::span<const cplx> x, std::span<const cplx> y)
{
    check_lengths(x.size(), y.size());
    const std::size_t len = x.size();
    CorrelationProfile c;
    c.values.resize(len);
    const double inv = 1.0 / static_cast<double>(len);
    for (std::size_t k = 0; k < len; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < len; ++n)
            acc += x[n] * std::conj(y[(n + len - k) % len]);
        c.values[k] = acc * inv;
    }
    return c;
}

CorrelationProfile circ_corr_dft(std::span<const cplx> x, std::span<const cplx> y)
{
    check_lengths(x.size(), y.size());
    const CVec xf = dft(x);
    const CVec yf = dft(y);
    CVec prod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        prod[i] = xf[i] * std::conj(yf[i]);
    CorrelationProfile c;
    c.values = idft(prod);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& v : c.values)
        v *= inv;
    return c;
}

cplx gauss_sum(long long a, double b, int length)
{
    if (length < 1)
        throw DomainError("gauss_sum: length must be positive");
    const long long two_l = 2LL * length;
    cplx acc{0.0, 0.0};
    for (long long n = 0; n < length; ++n) {
        // a n^2 in units of pi/length, reduced mod 2 length exactly
        const long long quad = mod(mod(a, two_l) * ((n * n) % two_l), two_l);
        const double lin = std::fmod(2.0 * b * static_cast<double>(n), static_cast<double>(two_l));
        acc += std::polar(1.0, std::numbers::pi * (static_cast<double>(quad) - lin) / length);
    }
    return acc;
}

CorrelationProfile closed_form_cfo_corr(int u_g, int shift_g, double eps_g, int u_0, int length)
{
    check_root(u_g, length);
    check_root(u_0, length);
    if (shift_g < 0 || shift_g >= length)
        throw DomainError("closed_form_cfo_corr: shift outside [0, length)");

    const long long L = length;
    const long long two_l = 2 * L;
    const long long ug = u_g;
    const long long u0 = u_0;
    const long long kap = shift_g;
    const double pi_l = std::numbers::pi / static_cast<double>(L);

    // e^{j pi m / L} for m in [0, 2L) and the CFO ramp e^{j 2 pi eps n / L}
    CVec unit(two_l);
    for (long long m = 0; m < two_l; ++m)
        unit[m] = std::polar(1.0, pi_l * static_cast<double>(m));
    CVec ramp(L);
    for (long long n = 0; n < L; ++n)
        ramp[n] = std::polar(1.0, 2.0 * pi_l * std::fmod(eps_g * static_cast<double>(n), static_cast<double>(L)));

    // Summand exponent (units of pi/L): a n^2 - n B(k) + 2 eps n, with
    // a = u0 - ug and B(k) = 2 alpha(k) = 2 ug kap + 2 u0 k + ug - u0.
    const long long a = mod(u0 - ug, two_l);
    std::vector<long long> n2(L);
    for (long long n = 0; n < L; ++n)
        n2[n] = mod(a * ((n * n) % two_l), two_l);

    CorrelationProfile c;
    c.u_g = u_g;
    c.shift_g = shift_g;
    c.u_0 = u_0;
    c.eps_g = eps_g;
    c.values.resize(L);
    const double inv = 1.0 / static_cast<double>(L);
    for (long long k = 0; k < L; ++k) {
        const long long B = mod(2 * ug * kap + 2 * u0 * k + ug - u0, two_l);
        cplx g{0.0, 0.0};
        long long lin = 0; // n B mod 2L
        for (long long n = 0; n < L; ++n) {
            g += unit[mod(n2[n] - lin, two_l)] * ramp[n];
            lin += B;
            if (lin >= two_l)
                lin -= two_l;
        }
        // prefactor exponent (units of pi/L): -ug kap (kap+1) + u0 k (k-1)
        const long long pre = mod(-mod(ug * mod(kap * (kap + 1), two_l), two_l) + mod(u0 * mod(k * (k - 1), two_l), two_l), two_l);
        c.values[k] = unit[pre] * g * inv;
    }
    return c;
}

} // namespace prach
