// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/rng.hpp"
#include "prach/scenario.hpp"
#include "prach/zadoff_chu.hpp"

namespace prach {

// Flat Rayleigh gains h_g^{m,i}, total variance 1.
struct ChannelRealization {
    int n_dev = 0;
    int n_rep = 0;
    int n_ant = 0;
    Coherence coherence = Coherence::independent;
    CVec gains;

    cplx& at(int g, int m, int i) { return gains[(static_cast<std::size_t>(g) * n_rep + m) * n_ant + i]; }
    const cplx& at(int g, int m, int i) const { return gains[(static_cast<std::size_t>(g) * n_rep + m) * n_ant + i]; }
};

// Received spectrum R^{m,i}[nu].
struct ReceivedGrid {
    int n_rep = 0;
    int n_ant = 0;
    int length = 0;
    CVec values;

    cplx& at(int m, int i, int nu) { return values[(static_cast<std::size_t>(m) * n_ant + i) * length + nu]; }
    const cplx& at(int m, int i, int nu) const { return values[(static_cast<std::size_t>(m) * n_ant + i) * length + nu]; }
};

ChannelRealization draw_channel(const Scenario& s, Rng& rng);
void draw_channel(const Scenario& s, Gaussian& normal, ChannelRealization& out);

// Time-domain transmitted sequence of a device: shifted root with its CFO ramp.
CVec device_waveform(const Scenario& s, const Device& d);

// R = sum_g H_g X_g + W. W = dft(w) with w per-component variance sigma_w^2, so
// each W[nu] has per-component variance length * sigma_w^2.
ReceivedGrid assemble_received(const Scenario& s, const ChannelRealization& ch, double sigma_w, Rng& rng);

} // namespace prach
