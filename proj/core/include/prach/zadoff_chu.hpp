// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <span>
#include <vector>

namespace prach {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

bool is_prime(int n);

// x_{u,v}[n] = x_u[(n + shift_samples) mod length]
struct ZcSequence {
    int root = 1;
    int length = 0;
    int shift_index = 0;
    int shift_samples = 0;
    CVec samples;
};

struct CsSet {
    int length = 0;
    int granularity = 0;
    std::vector<int> shifts;
};

// Throws InvalidRoot unless 1 <= u < length, gcd(u, length) = 1, length an odd prime.
void check_root(int u, int length);

ZcSequence zc_root(int u, int length);
ZcSequence cyclic_shift(const ZcSequence& x, int kappa);
ZcSequence cyclic_shift(const ZcSequence& x, const CsSet& set, int shift_index);
CsSet cs_set(int length, int n_cs);

// sample n multiplied by exp(j 2 pi eps n / length)
CVec apply_cfo(std::span<const cplx> x, double eps);
inline CVec apply_cfo(const ZcSequence& x, double eps) { return apply_cfo(x.samples, eps); }

// Unnormalized forward transform (kernel e^{-j 2 pi n nu / N}); idft carries the 1/N.
CVec dft(std::span<const cplx> x);
CVec idft(std::span<const cplx> x);

// u^{-1} mod length
int mod_inverse(int u, int length);

} // namespace prach
