// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/rng.hpp"

namespace prach {

// Regularized incomplete gammas Q(a,x) = Γ(a,x)/Γ(a) and P(a,x) = 1 - Q(a,x).
double upper_inc_gamma_reg(double a, double x);
double lower_inc_gamma_reg(double a, double x);

// x with Q(a,x) = p.
double inv_upper_inc_gamma_reg(double a, double p);

// Modified Bessel function of the first kind.
double bessel_i(double nu, double x);

// Generalized Marcum Q of integer order M, and its complement 1 - Q_M.
double marcum_q(int order, double a, double b);
double marcum_q_complement(int order, double a, double b);

// X = offset + scale * chi2 with 2*dof_half degrees of freedom.
// scale is the per-real-component variance.
struct ScaledChiSquare {
    int dof_half = 1;
    double scale = 1.0;
    double offset = 0.0;

    double cdf(double x) const;
    double ccdf(double x) const;
    double mean() const { return offset + 2.0 * dof_half * scale; }
};

// X = scale * sum_{i=1}^{2 dof_half} (m_i + N_i)^2 with sum m_i^2 = noncentrality.
struct NoncentralChiSquare {
    int dof_half = 1;
    double scale = 1.0;
    double noncentrality = 0.0;

    double cdf(double x) const;
    double ccdf(double x) const;
    double pdf(double x) const;
    double mean() const { return scale * (2.0 * dof_half + noncentrality); }
};

// X = scale_x * chi2'_{2 alpha}(L) with L ~ scale_lambda * chi2_{2 beta}, beta <= alpha.
struct GeneralizedChiSquareMix {
    int alpha = 1;
    int beta = 1;
    double scale_x = 1.0;
    double scale_lambda = 0.0;

    double mean() const { return 2.0 * scale_x * (alpha + beta * scale_lambda); }
};

double mix_cdf(const GeneralizedChiSquareMix& d, double x);
// Upper tail summed directly so small tail probabilities keep relative accuracy.
double mix_ccdf(const GeneralizedChiSquareMix& d, double x);

// Same laws by quadrature over the decomposition X = A + B with
// A ~ Gamma(beta, 2 scale_x (1 + scale_lambda)), B ~ Gamma(alpha - beta, 2 scale_x).
// Used automatically when the series would need too many terms.
double mix_cdf_quadrature(const GeneralizedChiSquareMix& d, double x);
double mix_ccdf_quadrature(const GeneralizedChiSquareMix& d, double x);

inline constexpr int mix_max_terms = 100000;

template <class Normal>
double sample_chi2(Normal& normal, int dof_half, double scale)
{
    double acc = 0.0;
    for (int i = 0; i < 2 * dof_half; ++i) {
        const double n = normal();
        acc += n * n;
    }
    return scale * acc;
}

} // namespace prach
