// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/channel.hpp"

#include <string_view>

namespace prach {

// Phi^{m,i}[k] for one root under test.
struct CorrelatorOutput {
    int n_rep = 0;
    int n_ant = 0;
    int length = 0;
    int root = 0;
    CVec phi;

    cplx& at(int m, int i, int k) { return phi[(static_cast<std::size_t>(m) * n_ant + i) * length + k]; }
    const cplx& at(int m, int i, int k) const { return phi[(static_cast<std::size_t>(m) * n_ant + i) * length + k]; }
};

enum class Combiner { pc, cc };

std::string_view to_string(Combiner c);
Combiner combiner_from_string(std::string_view s);

struct DecisionStatistic {
    std::vector<double> psi;
    Combiner combiner = Combiner::pc;
    int root = 0;
};

// Phi = idft(R .* conj(X_{u0})) / length
CorrelatorOutput correlate(const ReceivedGrid& grid, int u0);

DecisionStatistic combine_pc(const CorrelatorOutput& phi);
DecisionStatistic combine_cc(const CorrelatorOutput& phi);
DecisionStatistic combine(const CorrelatorOutput& phi, Combiner c);

// Raw-buffer combiners; phi laid out as (rep, ant, lag).
void combine_pc(const cplx* phi, int n_rep, int n_ant, int length, double* psi);
void combine_cc(const cplx* phi, int n_rep, int n_ant, int length, double* psi);

// Closed-form correlation profiles c_{g, r}[k] of every device against every configured root.
class ProfileCache {
public:
    explicit ProfileCache(const Scenario& s);
    const CVec& profile(int device, int root_index) const { return profiles_[device * n_root_ + root_index]; }
    int n_root() const { return n_root_; }

private:
    int n_root_ = 0;
    std::vector<CVec> profiles_;
};

// Noiseless correlator output mu^{m,i}[k] = sum_g h_g^{m,i} c_g[k].
CorrelatorOutput mu_fast(const Scenario& s, const ChannelRealization& ch, int u0, const ProfileCache& cache);
void mu_fast(const Scenario& s, const ChannelRealization& ch, int root_index, const ProfileCache& cache, cplx* out);

} // namespace prach
