// SPDX-License-Identifier: Apache-2.0
#include "prach/zadoff_chu.hpp"

#include "prach/error.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace prach {

bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

void check_root(int u, int length)
{
    if (length < 3 || !is_prime(length))
        throw InvalidRoot("sequence length must be an odd prime, got " + std::to_string(length));
    if (u < 1 || u >= length || std::gcd(u, length) != 1)
        throw InvalidRoot("root " + std::to_string(u) + " is not valid for length " + std::to_string(length));
}

ZcSequence zc_root(int u, int length)
{
    check_root(u, length);
    ZcSequence z;
    z.root = u;
    z.length = length;
    z.samples.resize(length);
    // u n (n+1) / 2 is an integer; reduce it mod length before taking the phase.
    for (long long n = 0; n < length; ++n) {
        const long long m = (static_cast<long long>(u) * ((n * (n + 1) / 2) % length)) % length;
        z.samples[n] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / length);
    }
    return z;
}

ZcSequence cyclic_shift(const ZcSequence& x, int kappa)
{
    if (kappa < 0 || kappa >= x.length)
        throw DomainError("cyclic shift must lie in [0, length)");
    ZcSequence y = x;
    y.shift_samples = (x.shift_samples + kappa) % x.length;
    for (int n = 0; n < x.length; ++n)
        y.samples[n] = x.samples[(n + kappa) % x.length];
    return y;
}

ZcSequence cyclic_shift(const ZcSequence& x, const CsSet& set, int shift_index)
{
    if (shift_index < 0 || shift_index >= static_cast<int>(set.shifts.size()))
        throw DomainError("cyclic shift index outside the CS set");
    ZcSequence y = cyclic_shift(x, set.shifts[shift_index]);
    y.shift_index = shift_index;
    return y;
}

CsSet cs_set(int length, int n_cs)
{
    if (n_cs < 1 || n_cs > length)
        throw DomainError("CS granularity must lie in [1, length]");
    CsSet s{length, n_cs, {}};
    for (int v = 0; v < length / n_cs; ++v)
        s.shifts.push_back(v * n_cs);
    return s;
}

CVec apply_cfo(std::span<const cplx> x, double eps)
{
    CVec y(x.begin(), x.end());
    if (eps == 0.0)
        return y;
    const double len = static_cast<double>(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        // eps*n reduced mod len keeps the phase small for large eps
        const double turns = std::fmod(eps * static_cast<double>(n), len);
        y[n] *= std::polar(1.0, 2.0 * std::numbers::pi * turns / len);
    }
    return y;
}

namespace {

CVec direct_transform(std::span<const cplx> x, double sign)
{
    const std::size_t len = x.size();
    CVec tw(len);
    for (std::size_t m = 0; m < len; ++m)
        tw[m] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(len));
    CVec out(len);
    for (std::size_t nu = 0; nu < len; ++nu) {
        cplx acc{0.0, 0.0};
        std::size_t idx = 0;
        for (std::size_t n = 0; n < len; ++n) {
            acc += x[n] * tw[idx];
            idx += nu;
            if (idx >= len)
                idx -= len;
        }
        out[nu] = acc;
    }
    return out;
}

} // namespace

CVec dft(std::span<const cplx> x) { return direct_transform(x, -1.0); }

CVec idft(std::span<const cplx> x)
{
    CVec y = direct_transform(x, 1.0);
    const double inv = 1.0 / static_cast<double>(x.size());
    for (auto& v : y)
        v *= inv;
    return y;
}

int mod_inverse(int u, int length)
{
    long long r0 = length, r1 = ((u % length) + length) % length;
    long long t0 = 0, t1 = 1;
    while (r1 != 0) {
        const long long q = r0 / r1;
        long long tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 != 1)
        throw InvalidRoot("root has no inverse modulo the sequence length");
    return static_cast<int>(((t0 % length) + length) % length);
}

} // namespace prach
