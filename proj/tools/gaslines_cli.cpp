// gaslines: transient simulation, leak localization, oracle verification and
// dispatcher replay for a two-line parallel gas pipeline.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gaslines/commands.hpp"

namespace {

using namespace gaslines;

struct Common {
    std::optional<std::string> variant;
    std::optional<int> nmax;
    std::optional<std::string> out;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--variant", c.variant, "Model variant (reconciled|as_printed)");
    sub->add_option("--nmax", c.nmax, "Series truncation order")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Write results to this file instead of stdout");
}

Scenario load(const std::string& path, const Common& c) {
    Scenario sc = load_scenario(path);
    if (c.variant) sc.series.variant = parse_variant(*c.variant);
    if (c.nmax) sc.series.n_max = *c.nmax;
    return sc;
}

template <typename Fn>
int with_output(const Common& c, Fn&& fn) {
    if (!c.out) return fn(std::cout);
    std::ofstream file(*c.out, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot write '" << *c.out << "'\n";
        return cli::kValidation;
    }
    return fn(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallel gas pipeline leak transients and localization"};
    app.require_subcommand(1);

    Common common;
    std::string scenario_path;
    std::string rule = "grid";

    auto* simulate = app.add_subcommand("simulate", "End-pressure table for a leak scenario");
    cli::SimulateOptions sim;
    std::optional<std::string> field;
    simulate->add_option("scenario", scenario_path, "Scenario file")->required();
    simulate->add_flag("--csv", sim.csv, "Full-precision Pa instead of 10^4 Pa table");
    simulate->add_option("--lead-in", sim.lead_in, "Steady samples before t_start (CSV mode)");
    simulate->add_option("--field", field, "Also write the full x-t field as long-form CSV");
    simulate->add_option("--field-points", sim.field_points, "Spatial points in the field CSV");
    add_common(simulate, common);

    auto* locate = app.add_subcommand("locate", "Leak coordinate and regime verdict at the fixation time");
    cli::LocateOptions loc;
    std::optional<std::string> observed;
    locate->add_option("scenario", scenario_path, "Scenario file")->required();
    locate->add_option("--at", loc.at, "Evaluation time (s); default is the fixation time");
    locate->add_option("--observed", observed, "Observed t,p_inlet,p_outlet CSV instead of simulation");
    locate->add_option("--eps-meas", loc.eps_meas, "Measurability floor (Pa)");
    locate->add_option("--rule", rule, "Fixation rule (grid|empirical)");
    locate->add_flag("--round", loc.round, "Round simulated pressures to 0.01 x 10^4 Pa");
    add_common(locate, common);

    auto* curves = app.add_subcommand("curves", "Long-form p(t) CSV for a set of scenarios");
    cli::CurvesOptions cur;
    std::vector<std::string> curve_paths;
    curves->add_option("scenarios", curve_paths, "Scenario files");
    curves->add_option("--eps-meas", cur.eps_meas, "Measurability floor (Pa)");
    curves->add_flag("--round", cur.round, "Round simulated pressures to 0.01 x 10^4 Pa");
    add_common(curves, common);

    auto* verify = app.add_subcommand("verify", "Compare the series model with the finite-difference oracle");
    cli::VerifyOptions ver;
    verify->add_option("scenario", scenario_path, "Scenario file")->required();
    verify->add_option("--nx", ver.nx, "Grid intervals");
    verify->add_option("--dt", ver.dt, "Time step (s); default is the stable step");
    verify->add_option("--rel-tol", ver.rel_tol, "Relative tolerance");
    add_common(verify, common);

    auto* monitor = app.add_subcommand("monitor", "Replay a sensor stream through the dispatcher decision flow");
    cli::MonitorOptions mon;
    std::string stream_path;
    std::optional<std::string> log_path;
    monitor->add_option("scenario", scenario_path, "Scenario file (pipeline, valves, run step)")->required();
    monitor->add_option("stream", stream_path, "Stream CSV t_seconds,p_inlet_pa,p_outlet_pa")->required();
    monitor->add_option("--log", log_path, "Append events to this log");
    monitor->add_option("--eps-meas", mon.eps_meas, "Measurability floor (Pa)");
    monitor->add_option("--rule", rule, "Fixation rule (grid|empirical)");
    add_common(monitor, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kValidation;
    }

    try {
        if (simulate->parsed()) {
            const Scenario sc = load(scenario_path, common);
            if (field) sim.field_out = *field;
            return with_output(common, [&](std::ostream& out) { return cli::cmd_simulate(sc, sim, out, std::cerr); });
        }
        if (locate->parsed()) {
            const Scenario sc = load(scenario_path, common);
            if (observed) loc.observed = *observed;
            loc.rule = parse_fixation_rule(rule);
            return with_output(common, [&](std::ostream& out) { return cli::cmd_locate(sc, loc, out, std::cerr); });
        }
        if (curves->parsed()) {
            std::vector<Scenario> set;
            for (const auto& p : curve_paths) set.push_back(load(p, common));
            return with_output(common, [&](std::ostream& out) { return cli::cmd_curves(set, cur, out, std::cerr); });
        }
        if (verify->parsed()) {
            const Scenario sc = load(scenario_path, common);
            return with_output(common, [&](std::ostream& out) { return cli::cmd_verify(sc, ver, out, std::cerr); });
        }
        if (monitor->parsed()) {
            const Scenario sc = load(scenario_path, common);
            mon.stream = stream_path;
            if (log_path) mon.log = *log_path;
            mon.rule = parse_fixation_rule(rule);
            return with_output(common, [&](std::ostream& out) { return cli::cmd_monitor(sc, mon, out, std::cerr); });
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kValidation;
    }
    return cli::kValidation;
}
