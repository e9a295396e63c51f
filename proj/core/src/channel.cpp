// SPDX-License-Identifier: Apache-2.0
#include "prach/channel.hpp"

#include <cmath>

namespace prach {

void draw_channel(const Scenario& s, Gaussian& normal, ChannelRealization& out)
{
    out.n_dev = s.n_dev();
    out.n_rep = s.n_rep();
    out.n_ant = s.n_ant;
    out.coherence = s.coherence;
    out.gains.resize(static_cast<std::size_t>(out.n_dev) * out.n_rep * out.n_ant);
    for (int g = 0; g < out.n_dev; ++g) {
        for (int m = 0; m < out.n_rep; ++m) {
            for (int i = 0; i < out.n_ant; ++i) {
                if (out.coherence == Coherence::identical && m > 0)
                    out.at(g, m, i) = out.at(g, 0, i);
                else
                    out.at(g, m, i) = normal.complex(1.0);
            }
        }
    }
}

ChannelRealization draw_channel(const Scenario& s, Rng& rng)
{
    Gaussian normal(rng);
    ChannelRealization ch;
    draw_channel(s, normal, ch);
    return ch;
}

CVec device_waveform(const Scenario& s, const Device& d)
{
    const ZcSequence root = zc_root(d.root, s.length());
    return apply_cfo(cyclic_shift(root, s.shift_samples(d)), d.cfo);
}

ReceivedGrid assemble_received(const Scenario& s, const ChannelRealization& ch, double sigma_w, Rng& rng)
{
    const int len = s.length();
    ReceivedGrid grid{s.n_rep(), s.n_ant, len, CVec(static_cast<std::size_t>(s.n_rep()) * s.n_ant * len)};

    for (int g = 0; g < s.n_dev(); ++g) {
        const CVec spec = dft(device_waveform(s, s.devices[g]));
        for (int m = 0; m < grid.n_rep; ++m)
            for (int i = 0; i < grid.n_ant; ++i) {
                const cplx h = ch.at(g, m, i);
                for (int nu = 0; nu < len; ++nu)
                    grid.at(m, i, nu) += h * spec[nu];
            }
    }
    if (sigma_w > 0.0) {
        Gaussian normal(rng);
        const double power = 2.0 * sigma_w * sigma_w * len;
        for (auto& v : grid.values)
            v += normal.complex(power);
    }
    return grid;
}

} // namespace prach
