// SPDX-License-Identifier: Apache-2.0
#include "prach/scenario.hpp"

#include "prach/zadoff_chu.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace prach {

PrachFormat PrachFormat::by_name(std::string_view name)
{
    if (name == "0")
        return {"0", 839, 1.25, 1};
    if (name == "C0")
        return {"C0", 139, 15.0, 1};
    if (name == "B1")
        return {"B1", 139, 15.0, 2};
    if (name == "B2")
        return {"B2", 139, 15.0, 4};
    if (name == "B4")
        return {"B4", 139, 15.0, 12};
    throw DomainError("unknown PRACH format '" + std::string(name) + "'");
}

std::string_view to_string(Coherence c)
{
    return c == Coherence::independent ? "independent" : "identical";
}

Coherence coherence_from_string(std::string_view s)
{
    if (s == "independent")
        return Coherence::independent;
    if (s == "identical")
        return Coherence::identical;
    throw DomainError("unknown coherence mode '" + std::string(s) + "'");
}

int Scenario::n_inter() const
{
    if (roots.empty())
        return 0;
    int n = 0;
    for (const auto& d : devices)
        n += d.root != roots.front();
    return n;
}

int Scenario::true_lag(const Device& d) const
{
    const int l = length();
    return (l - shift_samples(d) % l) % l;
}

int Scenario::root_index(int u) const
{
    for (int i = 0; i < n_root(); ++i)
        if (roots[i] == u)
            return i;
    return -1;
}

double noise_var_from_snr(double snr_db) { return 0.5 * std::pow(10.0, -snr_db / 10.0); }

double noise_sigma_from_snr(double snr_db) { return std::sqrt(noise_var_from_snr(snr_db)); }

double fa_budget(double p_fa_des, int n_root, int length)
{
    if (!(p_fa_des > 0.0 && p_fa_des < 1.0))
        throw DomainError("false alarm target must lie in (0,1)");
    if (n_root < 1 || length < 1)
        throw DomainError("fa_budget: counts must be positive");
    return -std::expm1(std::log1p(-p_fa_des) / (static_cast<double>(n_root) * length));
}

std::vector<ValidationIssue> validate(const Scenario& s)
{
    std::vector<ValidationIssue> out;
    const int l = s.format.length;
    if (l < 3 || !is_prime(l))
        out.push_back({"format", "sequence length must be an odd prime"});
    if (s.roots.empty())
        out.push_back({"roots", "at least one root is required"});
    std::set<int> seen;
    for (int u : s.roots) {
        if (u < 1 || u >= l || std::gcd(u, l) != 1)
            out.push_back({"roots", "root " + std::to_string(u) + " invalid for length " + std::to_string(l)});
        if (!seen.insert(u).second)
            out.push_back({"roots", "duplicate root " + std::to_string(u)});
    }
    if (s.n_cs < 1 || s.n_cs > l)
        out.push_back({"n_cs", "granularity must lie in [1, length]"});
    if (s.n_ant < 1)
        out.push_back({"n_ant", "at least one antenna is required"});
    if (!(s.p_fa_des > 0.0 && s.p_fa_des < 1.0))
        out.push_back({"p_fa_des", "must lie in (0,1)"});
    if (s.n_inter_design && !(*s.n_inter_design >= 0.0))
        out.push_back({"n_inter_design", "must be nonnegative"});
    const int n_shifts = (s.n_cs >= 1 && s.n_cs <= l) ? l / s.n_cs : 0;
    std::set<std::pair<int, int>> used;
    for (std::size_t i = 0; i < s.devices.size(); ++i) {
        const auto& d = s.devices[i];
        const std::string field = "devices[" + std::to_string(i) + "]";
        if (s.root_index(d.root) < 0)
            out.push_back({field + ".root", "unknown root"});
        if (d.cs_index < 0 || d.cs_index >= n_shifts)
            out.push_back({field + ".cs", "cyclic shift index outside the CS set"});
        if (!(std::abs(d.cfo) < 0.5))
            out.push_back({field + ".cfo", "CFO out of detector domain"});
        if (!used.insert({d.root, d.cs_index}).second)
            out.push_back({field, "preamble collision with an earlier device"});
    }
    return out;
}

void ensure_valid(const Scenario& s)
{
    auto issues = validate(s);
    if (!issues.empty())
        throw ValidationError(std::move(issues));
}

namespace {

std::string trim(std::string_view v)
{
    const auto b = v.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = v.find_last_not_of(" \t\r\n");
    return std::string(v.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view v, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = v.find(sep, start);
        parts.push_back(trim(v.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

double to_double(const std::string& s, const std::string& field)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(field, "not a number: '" + s + "'");
    }
}

long long to_int(const std::string& s, const std::string& field)
{
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ValidationError(field, "not an integer: '" + s + "'");
    return v;
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::vector<double> parse_grid(std::string_view text)
{
    const std::string t = trim(text);
    std::vector<double> out;
    if (t.find(':') != std::string::npos) {
        const auto p = split(t, ':');
        if (p.size() != 3)
            throw ValidationError("snr_db", "range must be start:stop:step");
        const double a = to_double(p[0], "snr_db");
        const double b = to_double(p[1], "snr_db");
        const double st = to_double(p[2], "snr_db");
        if (!(st > 0.0) || b < a)
            throw ValidationError("snr_db", "range needs a positive step and stop >= start");
        const long n = static_cast<long>(std::floor((b - a) / st + 1e-9));
        for (long i = 0; i <= n; ++i)
            out.push_back(a + static_cast<double>(i) * st);
    } else {
        for (const auto& p : split(t, ','))
            out.push_back(to_double(p, "snr_db"));
    }
    if (out.empty())
        throw ValidationError("snr_db", "empty grid");
    return out;
}

Scenario parse_scenario(std::istream& in, std::string id)
{
    Scenario s;
    s.id = std::move(id);
    s.snr_db = {0.0};
    std::string line;
    int lineno = 0;
    std::vector<ValidationIssue> issues;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(lineno), "expected key=value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key == "id") {
            s.id = value;
        } else if (key == "format") {
            try {
                s.format = PrachFormat::by_name(value);
            } catch (const DomainError& e) {
                throw ValidationError("format", e.what());
            }
        } else if (key == "roots") {
            s.roots.clear();
            for (const auto& p : split(value, ','))
                s.roots.push_back(static_cast<int>(to_int(p, "roots")));
        } else if (key == "n_cs") {
            s.n_cs = static_cast<int>(to_int(value, "n_cs"));
        } else if (key == "device") {
            Device d;
            bool has_root = false;
            for (const auto& kv : split(value, ',')) {
                const auto c = kv.find(':');
                if (c == std::string::npos)
                    throw ValidationError("device", "expected name:value pairs");
                const std::string k = trim(std::string_view(kv).substr(0, c));
                const std::string v = trim(std::string_view(kv).substr(c + 1));
                if (k == "root") {
                    d.root = static_cast<int>(to_int(v, "device.root"));
                    has_root = true;
                } else if (k == "cs") {
                    d.cs_index = static_cast<int>(to_int(v, "device.cs"));
                } else if (k == "cfo") {
                    d.cfo = to_double(v, "device.cfo");
                } else if (k == "label") {
                    d.label = v;
                } else {
                    throw ValidationError("device", "unknown attribute '" + k + "'");
                }
            }
            if (!has_root)
                throw ValidationError("device", "root is required");
            if (d.label.empty())
                d.label = "dev" + std::to_string(s.devices.size());
            s.devices.push_back(d);
        } else if (key == "n_ant") {
            s.n_ant = static_cast<int>(to_int(value, "n_ant"));
        } else if (key == "coherence") {
            try {
                s.coherence = coherence_from_string(value);
            } catch (const DomainError& e) {
                throw ValidationError("coherence", e.what());
            }
        } else if (key == "snr_db") {
            s.snr_db = parse_grid(value);
        } else if (key == "p_fa_des") {
            s.p_fa_des = to_double(value, "p_fa_des");
        } else if (key == "seed") {
            s.seed = static_cast<std::uint64_t>(to_int(value, "seed"));
        } else if (key == "n_inter_design") {
            s.n_inter_design = to_double(value, "n_inter_design");
        } else {
            issues.push_back({key, "unknown key"});
        }
    }
    if (!issues.empty())
        throw ValidationError(std::move(issues));
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open scenario file '" + path + "'");
    return parse_scenario(f, std::filesystem::path(path).stem().string());
}

void write_scenario(std::ostream& out, const Scenario& s)
{
    out << "id=" << s.id << '\n';
    out << "format=" << s.format.name << '\n';
    out << "roots=";
    for (std::size_t i = 0; i < s.roots.size(); ++i)
        out << (i ? "," : "") << s.roots[i];
    out << '\n' << "n_cs=" << s.n_cs << '\n';
    for (const auto& d : s.devices)
        out << "device=root:" << d.root << ",cs:" << d.cs_index << ",cfo:" << format_number(d.cfo) << ",label:" << d.label << '\n';
    out << "n_ant=" << s.n_ant << '\n';
    out << "coherence=" << to_string(s.coherence) << '\n';
    out << "snr_db=";
    for (std::size_t i = 0; i < s.snr_db.size(); ++i)
        out << (i ? "," : "") << format_number(s.snr_db[i]);
    out << '\n' << "p_fa_des=" << format_number(s.p_fa_des) << '\n';
    out << "seed=" << s.seed << '\n';
    if (s.n_inter_design)
        out << "n_inter_design=" << format_number(*s.n_inter_design) << '\n';
}

} // namespace prach
