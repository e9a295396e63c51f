// SPDX-License-Identifier: Apache-2.0
#include "prach/selftest.hpp"

#include "prach/analytic.hpp"
#include "prach/correlation.hpp"
#include "prach/harness.hpp"
#include "prach/specfun.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <string>

namespace prach {

namespace {

struct Check {
    std::string name;
    std::function<std::string()> body; // empty string on success
};

std::string zc_identities()
{
    for (int len : {139, 839}) {
        const auto x = zc_root(25, len);
        const auto shifted = cyclic_shift(x, 13);
        const auto c = circ_corr(shifted.samples, x.samples).values;
        const int k_t = (len - 13) % len;
        for (int k = 0; k < len; ++k) {
            const double want = k == k_t ? 1.0 : 0.0;
            if (std::abs(std::abs(c[k]) - want) > 1e-12)
                return "same-root delta broken at l=" + std::to_string(len);
        }
        const auto y = zc_root(34, len);
        const auto cross = circ_corr(shifted.samples, y.samples).values;
        for (const auto& v : cross)
            if (std::abs(std::abs(v) - 1.0 / std::sqrt(len)) > 1e-12)
                return "cross-root magnitude broken at l=" + std::to_string(len);
    }
    return {};
}

std::string closed_form()
{
    const int len = 139;
    const auto ref = zc_root(51, len);
    for (int ug : {51, 77, 138})
        for (double eps : {-0.4, 0.0, 0.3}) {
            const auto tx = apply_cfo(cyclic_shift(zc_root(ug, len), 26), eps);
            const auto brute = circ_corr(tx, ref.samples).values;
            const auto cf = closed_form_cfo_corr(ug, 26, eps, 51, len).values;
            double scale = 0.0;
            for (const auto& v : brute)
                scale = std::max(scale, std::abs(v));
            for (int k = 0; k < len; ++k)
                if (std::abs(cf[k] - brute[k]) > 1e-9 * scale)
                    return "closed form differs at u_g=" + std::to_string(ug);
        }
    return {};
}

std::string threshold_round_trip()
{
    const double p = fa_budget(1e-3, 2, 139);
    for (Combiner c : {Combiner::pc, Combiner::cc})
        for (Coherence h : {Coherence::independent, Coherence::identical}) {
            CaseParams cs{c, h, 2, 4, 0.01};
            const double t = threshold(cs, 1.0 / 139.0, p);
            const double back = ccdf_psi(cs, 1.0 / 139.0, t);
            if (std::abs(back - p) > 1e-9 * p)
                return "round trip off for " + std::string(to_string(c)) + "/" + std::string(to_string(h));
        }
    return {};
}

std::string gamma_inverse()
{
    for (double a : {1.0, 4.0, 24.0})
        for (double p : {1e-9, 1e-3, 0.5, 0.99}) {
            const double x = inv_upper_inc_gamma_reg(a, p);
            if (std::abs(upper_inc_gamma_reg(a, x) - p) > 1e-10 * p)
                return "inverse incomplete gamma off at a=" + format_g9(a);
        }
    return {};
}

std::string marcum()
{
    // Q_1(0, b) = exp(-b^2/2), Q_m(a, 0) = 1
    for (double b : {0.1, 1.0, 3.0, 7.0})
        if (std::abs(marcum_q(1, 0.0, b) - std::exp(-0.5 * b * b)) > 1e-12 * std::exp(-0.5 * b * b) + 1e-300)
            return "Q_1(0,b) mismatch";
    for (int m : {1, 3, 8})
        for (double a : {0.5, 2.0, 10.0})
            for (double b : {0.5, 2.0, 12.0}) {
                const double s = marcum_q(m, a, b) + marcum_q_complement(m, a, b);
                if (std::abs(s - 1.0) > 1e-12)
                    return "Q + (1-Q) != 1";
            }
    return {};
}

std::string budget()
{
    const double p = fa_budget(1e-3, 2, 139);
    const double total = 1.0 - std::pow(1.0 - p, 2 * 139);
    if (std::abs(total - 1e-3) > 1e-12)
        return "budget does not aggregate to the target";
    return {};
}

std::string inter_distance()
{
    if (inter_sample_distance(51, 139) != 30)
        return "d(51, 139) != 30";
    return {};
}

} // namespace

bool selftest(std::ostream& out)
{
    const Check checks[] = {
        {"zc correlation identities", zc_identities},
        {"closed-form CFO correlation", closed_form},
        {"threshold round trip", threshold_round_trip},
        {"incomplete gamma inverse", gamma_inverse},
        {"marcum q", marcum},
        {"false alarm budget", budget},
        {"inter-sample distance", inter_distance},
    };
    bool ok = true;
    for (const auto& c : checks) {
        std::string why;
        try {
            why = c.body();
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        out << (why.empty() ? "PASS " : "FAIL ") << c.name;
        if (!why.empty())
            out << ": " << why;
        out << '\n';
        ok &= why.empty();
    }
    return ok;
}

} // namespace prach
