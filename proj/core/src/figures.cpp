// SPDX-License-Identifier: Apache-2.0
#include "prach/harness.hpp"

#include "prach/error.hpp"

#include <algorithm>

namespace prach {

namespace {

constexpr int target_root = 51;
constexpr int other_root = 138;

Scenario base_scenario(const std::string& id, const std::string& format, int n_ant, Coherence coh,
                       std::vector<double> grid)
{
    Scenario s;
    s.id = id;
    s.format = PrachFormat::by_name(format);
    s.roots = {target_root, other_root};
    s.n_ant = n_ant;
    s.coherence = coh;
    s.snr_db = std::move(grid);
    s.devices.push_back({target_root, 2, 0.0, "target"});
    return s;
}

void add_interferer(Scenario& s, double cfo)
{
    s.devices.push_back({other_root, 5, cfo, "interferer"});
}

std::string coh_tag(Coherence c)
{
    return c == Coherence::independent ? "ind" : "ident";
}

std::string eps_tag(double eps)
{
    return eps == 0.0 ? "eps0" : "eps" + format_g9(eps);
}

std::vector<Scenario> cfo_cases(const std::string& fig, const std::string& format)
{
    const std::vector<double> grid = format == "0" ? parse_grid("-40:20:2") : parse_grid("-30:30:2");
    std::vector<Scenario> out;
    const std::string prefix = fig + "_" + (format == "0" ? std::string("F0") : format) + "_";
    {
        Scenario s = base_scenario(prefix + "eps0", format, 1, Coherence::independent, grid);
        out.push_back(s);
    }
    {
        Scenario s = base_scenario(prefix + "eps0.3", format, 1, Coherence::independent, grid);
        s.devices[0].cfo = 0.3;
        out.push_back(s);
    }
    {
        Scenario s = base_scenario(prefix + "eps0.3_inter", format, 1, Coherence::independent, grid);
        s.devices[0].cfo = 0.3;
        add_interferer(s, 0.3);
        out.push_back(s);
    }
    return out;
}

bool wants(std::string_view fig, const std::string& metric)
{
    if (fig == "fig8" || fig == "fig9" || fig == "fig11")
        return metric == "p_fa";
    return metric == "p_td";
}

} // namespace

std::vector<std::string> figure_names()
{
    return {"fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

std::vector<Scenario> figure_scenarios(std::string_view name)
{
    const std::string fig(name);
    std::vector<Scenario> out;
    if (name == "fig4") {
        for (const char* fmt : {"B1", "B2"})
            for (int n_ant : {1, 2, 4, 8})
                for (Coherence c : {Coherence::independent, Coherence::identical})
                    out.push_back(base_scenario(fig + "_" + fmt + "_ant" + std::to_string(n_ant) + "_" + coh_tag(c), fmt,
                                                n_ant, c, {-20.0}));
    } else if (name == "fig5" || name == "fig6") {
        for (Coherence c : {Coherence::independent, Coherence::identical}) {
            Scenario s = base_scenario(fig + "_B1_" + coh_tag(c), "B1", 1, c, parse_grid("-30:0:2"));
            if (name == "fig6")
                add_interferer(s, 0.0);
            out.push_back(s);
        }
    } else if (name == "fig7") {
        for (const char* fmt : {"C0", "0"})
            for (auto& s : cfo_cases(fig, fmt))
                out.push_back(std::move(s));
    } else if (name == "fig8") {
        out = cfo_cases(fig, "C0");
    } else if (name == "fig9") {
        out = cfo_cases(fig, "0");
    } else if (name == "fig10" || name == "fig11") {
        for (int n_ant : {1, 2, 4, 8}) {
            Scenario s = base_scenario(fig + "_C0_ant" + std::to_string(n_ant) + "_" + eps_tag(0.3) + "_inter", "C0",
                                       n_ant, Coherence::independent, parse_grid("-40:20:2"));
            s.devices[0].cfo = 0.3;
            add_interferer(s, 0.3);
            out.push_back(s);
        }
    } else {
        throw DomainError("unknown figure '" + fig + "'");
    }
    return out;
}

ExperimentResult figure_suite(std::string_view name, const FigureOptions& opt)
{
    ExperimentResult all;
    for (const Scenario& s : figure_scenarios(name)) {
        RunPlan plan;
        plan.scenario = s;
        plan.occasions = opt.occasions;
        plan.jobs = opt.jobs;
        plan.seed = opt.seed;
        plan.analytic_mc = opt.analytic_mc;
        if (name == "fig4" || name == "fig5" || name == "fig6") {
            plan.configs = {{DetectorKind::baseline, Combiner::pc}, {DetectorKind::baseline, Combiner::cc}};
        } else {
            plan.configs = {{DetectorKind::cfo_aware, Combiner::pc}, {DetectorKind::conventional, Combiner::pc}};
            if ((name == "fig10" || name == "fig11") && s.n_ant == 2)
                plan.configs.push_back({DetectorKind::cfo_aware_adapted, Combiner::pc});
        }
        ExperimentResult r = run(plan);
        r.rows.erase(std::remove_if(r.rows.begin(), r.rows.end(),
                                    [&](const ResultRow& row) { return !wants(name, row.metric); }),
                     r.rows.end());
        all.append(r);
    }
    return all;
}

} // namespace prach
