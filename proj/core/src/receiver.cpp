// SPDX-License-Identifier: Apache-2.0
#include "prach/receiver.hpp"

#include "prach/correlation.hpp"
#include "prach/error.hpp"

#include <algorithm>
#include <string>

namespace prach {

std::string_view to_string(Combiner c) { return c == Combiner::pc ? "pc" : "cc"; }

Combiner combiner_from_string(std::string_view s)
{
    if (s == "pc" || s == "PC")
        return Combiner::pc;
    if (s == "cc" || s == "CC")
        return Combiner::cc;
    throw DomainError("unknown combiner '" + std::string(s) + "'");
}

CorrelatorOutput correlate(const ReceivedGrid& grid, int u0)
{
    const int len = grid.length;
    const CVec ref = dft(zc_root(u0, len).samples);
    CorrelatorOutput out{grid.n_rep, grid.n_ant, len, u0, CVec(grid.values.size())};
    CVec prod(len);
    const double inv = 1.0 / len;
    for (int m = 0; m < grid.n_rep; ++m)
        for (int i = 0; i < grid.n_ant; ++i) {
            for (int nu = 0; nu < len; ++nu)
                prod[nu] = grid.at(m, i, nu) * std::conj(ref[nu]);
            const CVec c = idft(prod);
            for (int k = 0; k < len; ++k)
                out.at(m, i, k) = c[k] * inv;
        }
    return out;
}

void combine_pc(const cplx* phi, int n_rep, int n_ant, int length, double* psi)
{
    std::fill(psi, psi + length, 0.0);
    for (int mi = 0; mi < n_rep * n_ant; ++mi) {
        const cplx* row = phi + static_cast<std::size_t>(mi) * length;
        for (int k = 0; k < length; ++k)
            psi[k] += std::norm(row[k]);
    }
}

void combine_cc(const cplx* phi, int n_rep, int n_ant, int length, double* psi)
{
    std::fill(psi, psi + length, 0.0);
    for (int i = 0; i < n_ant; ++i)
        for (int k = 0; k < length; ++k) {
            cplx acc{0.0, 0.0};
            for (int m = 0; m < n_rep; ++m)
                acc += phi[(static_cast<std::size_t>(m) * n_ant + i) * length + k];
            psi[k] += std::norm(acc);
        }
}

DecisionStatistic combine_pc(const CorrelatorOutput& phi)
{
    DecisionStatistic d{std::vector<double>(phi.length), Combiner::pc, phi.root};
    combine_pc(phi.phi.data(), phi.n_rep, phi.n_ant, phi.length, d.psi.data());
    return d;
}

DecisionStatistic combine_cc(const CorrelatorOutput& phi)
{
    DecisionStatistic d{std::vector<double>(phi.length), Combiner::cc, phi.root};
    combine_cc(phi.phi.data(), phi.n_rep, phi.n_ant, phi.length, d.psi.data());
    return d;
}

DecisionStatistic combine(const CorrelatorOutput& phi, Combiner c)
{
    return c == Combiner::pc ? combine_pc(phi) : combine_cc(phi);
}

ProfileCache::ProfileCache(const Scenario& s) : n_root_(s.n_root())
{
    profiles_.reserve(static_cast<std::size_t>(s.n_dev()) * n_root_);
    for (const auto& d : s.devices)
        for (int r = 0; r < n_root_; ++r)
            profiles_.push_back(closed_form_cfo_corr(d.root, s.shift_samples(d), d.cfo, s.roots[r], s.length()).values);
}

void mu_fast(const Scenario& s, const ChannelRealization& ch, int root_index, const ProfileCache& cache, cplx* out)
{
    const int len = s.length();
    const int n_rep = s.n_rep();
    const int n_ant = s.n_ant;
    std::fill(out, out + static_cast<std::size_t>(n_rep) * n_ant * len, cplx{0.0, 0.0});
    for (int g = 0; g < s.n_dev(); ++g) {
        const CVec& c = cache.profile(g, root_index);
        for (int m = 0; m < n_rep; ++m)
            for (int i = 0; i < n_ant; ++i) {
                const cplx h = ch.at(g, m, i);
                cplx* row = out + (static_cast<std::size_t>(m) * n_ant + i) * len;
                for (int k = 0; k < len; ++k)
                    row[k] += h * c[k];
            }
    }
}

CorrelatorOutput mu_fast(const Scenario& s, const ChannelRealization& ch, int u0, const ProfileCache& cache)
{
    const int r = s.root_index(u0);
    if (r < 0)
        throw DomainError("mu_fast: root under test is not configured");
    CorrelatorOutput out{s.n_rep(), s.n_ant, s.length(), u0, CVec(static_cast<std::size_t>(s.n_rep()) * s.n_ant * s.length())};
    mu_fast(s, ch, r, cache, out.phi.data());
    return out;
}

} // namespace prach
