// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/zadoff_chu.hpp"

namespace prach {

struct CorrelationProfile {
    CVec values;
    int u_g = 0;
    int shift_g = 0; // cyclic shift of the transmitted sequence, in samples
    int u_0 = 0;
    double eps_g = 0.0;
};

// c[k] = (1/N) sum_n x[n] conj(y[(n-k) mod N])
CorrelationProfile circ_corr(std::span<const cplx> x, std::span<const cplx> y);
// Same quantity through idft(X .* conj(Y)) / N.
CorrelationProfile circ_corr_dft(std::span<const cplx> x, std::span<const cplx> y);

// G(a,b) = sum_n exp(j pi a n^2 / N - j 2 pi b n / N), direct summation
cplx gauss_sum(long long a, double b, int length);

// Correlation of the CFO-shifted, cyclically shifted root u_g against root u_0 (zero shift),
// evaluated through the quadratic Gauss sum with exact phase bookkeeping.
CorrelationProfile closed_form_cfo_corr(int u_g, int shift_g, double eps_g, int u_0, int length);

} // namespace prach
