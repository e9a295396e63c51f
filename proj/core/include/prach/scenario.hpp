// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prach/error.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prach {

struct PrachFormat {
    std::string name;
    int length = 0;
    double scs_khz = 0.0; // metadata only
    int n_rep = 1;

    static PrachFormat by_name(std::string_view name);
};

struct Device {
    int root = 0;
    int cs_index = 0;
    double cfo = 0.0;
    std::string label;
};

enum class Coherence { independent, identical };

std::string_view to_string(Coherence c);
Coherence coherence_from_string(std::string_view s);

struct Scenario {
    std::string id = "scenario";
    PrachFormat format = PrachFormat::by_name("C0");
    std::vector<int> roots;
    int n_cs = 13;
    std::vector<Device> devices;
    int n_ant = 1;
    Coherence coherence = Coherence::independent;
    std::vector<double> snr_db;
    double p_fa_des = 1e-3;
    std::uint64_t seed = 42;
    // expected interferer count used for threshold design; defaults to the actual count
    std::optional<double> n_inter_design;

    int length() const { return format.length; }
    int n_rep() const { return format.n_rep; }
    int n_root() const { return static_cast<int>(roots.size()); }
    int n_dev() const { return static_cast<int>(devices.size()); }
    int reference_root() const { return roots.at(0); }
    int n_inter() const;
    double design_n_inter() const { return n_inter_design.value_or(static_cast<double>(n_inter())); }
    int shift_samples(const Device& d) const { return d.cs_index * n_cs; }
    // lag at which the device's correlation peak appears on its own root
    int true_lag(const Device& d) const;
    // index of root u within roots, or -1
    int root_index(int u) const;
};

// per-real-component noise variance for a per-antenna SNR in dB
double noise_var_from_snr(double snr_db);
double noise_sigma_from_snr(double snr_db);

// per-lag, per-root false alarm budget 1 - (1 - p)^{1/(n_root * length)}
double fa_budget(double p_fa_des, int n_root, int length);

std::vector<ValidationIssue> validate(const Scenario& s);
void ensure_valid(const Scenario& s);

// "a:b:c" ranges or comma lists
std::vector<double> parse_grid(std::string_view text);

Scenario parse_scenario(std::istream& in, std::string id = "scenario");
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& s);

} // namespace prach
