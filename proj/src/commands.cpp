#include "gaslines/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "gaslines/fd_oracle.hpp"

namespace gaslines::cli {

namespace {

const LeakScenario& require_leak(const Scenario& sc) {
    if (!sc.leak) throw ScenarioError(0, sc.id + ": scenario has no [leak] section");
    return *sc.leak;
}

const RunGrid& require_run(const Scenario& sc) {
    if (!sc.run) throw ScenarioError(0, sc.id + ": scenario has no [run] section");
    return *sc.run;
}

PressureTrajectory trajectory_at(const Scenario& sc, std::vector<double> times, bool round) {
    const LeakScenario& leak = require_leak(sc);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    PressureTrajectory traj;
    traj.baseline_inlet = steady_pressure(sc.spec, 0.0);
    traj.baseline_outlet = steady_pressure(sc.spec, sc.spec.length);
    for (double t : times) {
        double in = inlet_pressure(sc.spec, leak, sc.series, t).pressure;
        double out = outlet_pressure(sc.spec, leak, sc.series, t).pressure;
        if (round) {
            in = round_to_table(in);
            out = round_to_table(out);
        }
        traj.samples.push_back({t, in, out});
    }
    return traj;
}

int fail(std::ostream& err, int code, const std::string& msg) {
    fmt::print(err, "error: {}\n", msg);
    return code;
}

}  // namespace

double round_to_table(double pressure) {
    return std::round(pressure / kTableResolution) * kTableResolution;
}

PressureTrajectory simulate_trajectory(const Scenario& sc, bool round) {
    return trajectory_at(sc, require_run(sc).times(), round);
}

// -------------------------------------------------------------
// simulate
// -------------------------------------------------------------

int cmd_simulate(const Scenario& sc, const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    const LeakScenario& leak = require_leak(sc);
    const RunGrid& run = require_run(sc);
    const PipelineSpec& spec = sc.spec;

    double worst_tail = 0.0;
    double worst_tail_t = 0.0;
    auto track = [&](const PressureValue& v, double t) {
        if (v.degraded && v.tail_bound > worst_tail) {
            worst_tail = v.tail_bound;
            worst_tail_t = t;
        }
        return v.pressure;
    };

    if (opt.csv) {
        fmt::print(out, "t_s,p_inlet_pa,p_outlet_pa\n");
        for (int k = opt.lead_in; k >= 1; --k) {
            fmt::print(out, "{},{},{}\n", run.t_start - k * run.step, steady_pressure(spec, 0.0),
                       steady_pressure(spec, spec.length));
        }
    } else {
        fmt::print(out, "t_s,p_inlet_1e4Pa,p_outlet_1e4Pa\n");
    }
    for (double t : run.times()) {
        const double in = track(inlet_pressure(spec, leak, sc.series, t), t);
        const double outlet = track(outlet_pressure(spec, leak, sc.series, t), t);
        if (opt.csv) {
            fmt::print(out, "{},{},{}\n", t, in, outlet);
        } else {
            fmt::print(out, "{},{:.2f},{:.2f}\n", t, in / 1e4, outlet / 1e4);
        }
    }

    if (opt.field_out) {
        std::ofstream field(*opt.field_out, std::ios::binary);
        if (!field) return fail(err, kValidation, "cannot write field CSV '" + opt.field_out->string() + "'");
        const int n = std::max(opt.field_points, 2);
        fmt::print(field, "t_s,x_m,pressure_pa\n");
        for (double t : run.times()) {
            for (int i = 0; i < n; ++i) {
                const double x = spec.length * i / (n - 1);
                fmt::print(field, "{},{},{}\n", t, x, track(transient_pressure(spec, leak, sc.series, x, t), t));
            }
        }
    }
    if (worst_tail > 0.0) {
        fmt::print(err, "warning: series remainder up to {:.3g} Pa (t={}) exceeds tail_tol {} Pa; raise n_max\n",
                   worst_tail, worst_tail_t, sc.series.tail_tol);
    }
    return kOk;
}

// -------------------------------------------------------------
// locate
// -------------------------------------------------------------

int cmd_locate(const Scenario& sc, const LocateOptions& opt, std::ostream& out, std::ostream& err) {
    const PipelineSpec& spec = sc.spec;
    PressureTrajectory traj;
    const bool simulated = !opt.observed.has_value();
    if (opt.observed) {
        std::ifstream in(*opt.observed);
        if (!in) return fail(err, kValidation, "cannot open observed CSV '" + opt.observed->string() + "'");
        try {
            traj.samples = read_stream_csv(in);
        } catch (const StreamFormatError& e) {
            return fail(err, kValidation, opt.observed->string() + ": " + e.what());
        }
        traj.baseline_inlet = spec.p_inlet_0;
        traj.baseline_outlet = spec.p_outlet_0;
        try {
            traj.validate();
        } catch (const std::invalid_argument& e) {
            return fail(err, kValidation, opt.observed->string() + ": " + e.what());
        }
    } else {
        std::vector<double> times = sc.run ? sc.run->times() : std::vector<double>{};
        if (opt.at) times.push_back(*opt.at);
        if (times.empty()) return fail(err, kValidation, "no [run] grid and no --at time");
        traj = trajectory_at(sc, times, opt.round);
    }

    double t_fix = 0.0;
    if (opt.at) {
        t_fix = *opt.at;
    } else if (opt.rule == FixationRule::grid) {
        if (!sc.run) return fail(err, kValidation, "grid fixation rule needs [run] step or --at");
        t_fix = fixation_time(spec, sc.run->step);
    } else {
        const auto t = fixation_time_empirical(traj, opt.eps_meas);
        if (!t) {
            fmt::print(err, "error: deviation below measurability floor at every sample (no fixation)\n");
            return kInsufficientSignal;
        }
        t_fix = *t;
    }
    if (traj.samples.empty() || t_fix < traj.samples.front().t || t_fix > traj.samples.back().t) {
        return fail(err, kValidation, fmt::format("fixation time {} s outside the trajectory span", t_fix));
    }

    const ThetaEstimate est = locate(spec, traj, t_fix, opt.eps_meas);
    fmt::print(out, "t_s={}\n", t_fix);
    fmt::print(out, "inlet_drop_pa={}\n", est.ratio.inlet_drop);
    fmt::print(out, "outlet_drop_pa={}\n", est.ratio.outlet_drop);
    if (!est.ratio.defined) {
        if (est.ratio.cause == RatioCause::pressure_rise) {
            fmt::print(out, "verdict={}\n", to_string(est.verdict));
            fmt::print(err, "error: pressure rise at an end section; ratio undefined\n");
        } else {
            fmt::print(err, "error: deviation below measurability floor ({} Pa)\n", opt.eps_meas);
        }
        return kInsufficientSignal;
    }
    fmt::print(out, "p={}\n", est.ratio.p);
    fmt::print(out, "phi={}\n", phi(spec, t_fix));
    fmt::print(out, "theta={}\n", est.theta);
    fmt::print(out, "theta_in_range={}\n", est.theta_in_range ? 1 : 0);
    fmt::print(out, "ell2_est_m={}\n", est.ell2_est);
    fmt::print(out, "ell2_est_1e4m={:.2f}\n", est.ell2_est / 1e4);
    if (simulated && sc.leak) {
        fmt::print(out, "ell2_true_m={}\n", sc.leak->ell2);
        fmt::print(out, "rel_error={}\n", std::abs(est.ell2_est - sc.leak->ell2) / sc.leak->ell2);
    }
    fmt::print(out, "verdict={}\n", to_string(est.verdict));
    if (est.band) {
        fmt::print(out, "band_lo={}\nband_hi={}\n", est.band->lo, est.band->hi);
    } else {
        fmt::print(out, "band=unavailable\n");
    }
    return kOk;
}

// -------------------------------------------------------------
// curves
// -------------------------------------------------------------

int cmd_curves(const std::vector<Scenario>& scenarios, const CurvesOptions& opt, std::ostream& out,
               std::ostream&) {
    std::vector<std::future<std::string>> jobs;
    jobs.reserve(scenarios.size());
    for (const auto& sc : scenarios) {
        jobs.push_back(std::async(std::launch::async, [&sc, &opt] {
            const PressureTrajectory traj = simulate_trajectory(sc, opt.round);
            std::string block;
            for (const auto& s : traj.samples) {
                const RatioPoint r = pressure_ratio(traj, s.t, opt.eps_meas);
                block += r.defined ? fmt::format("{},{},{}\n", sc.id, s.t, r.p)
                                   : fmt::format("{},{},\n", sc.id, s.t);
            }
            return block;
        }));
    }
    fmt::print(out, "scenario_id,t_s,p\n");
    for (auto& job : jobs) out << job.get();
    return kOk;
}

// -------------------------------------------------------------
// verify
// -------------------------------------------------------------

int cmd_verify(const Scenario& sc, const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    const LeakScenario& leak = require_leak(sc);
    std::vector<double> times;
    for (double t : require_run(sc).times()) {
        if (t > 0.0) times.push_back(t);
    }
    if (times.empty()) return fail(err, kValidation, "[run] grid has no output time > 0");
    if (opt.nx < 2) return fail(err, kValidation, "--nx must be >= 2");

    FdGrid grid{opt.nx, opt.dt.value_or(stable_time_step(sc.spec, opt.nx)), times.back()};
    try {
        grid.validate(sc.spec);
    } catch (const std::invalid_argument& e) {
        return fail(err, kValidation, e.what());
    }

    const OracleReport rep = compare_with_series(sc.spec, leak, grid, sc.series, times, opt.rel_tol);
    fmt::print(out, "scenario={}\n", sc.id);
    fmt::print(out, "variant={}\n", to_string(sc.series.variant));
    fmt::print(out, "nx={}\ndx_m={}\ndt_s={}\n", grid.nx, grid.dx(sc.spec), grid.dt);
    fmt::print(out, "max_abs_pa={}\n", rep.max_abs);
    fmt::print(out, "max_rel={}\n", rep.max_rel);
    fmt::print(out, "worst_x_m={}\nworst_t_s={}\n", rep.worst_x, rep.worst_t);
    fmt::print(out, "inlet_max_abs_pa={}\n", rep.inlet_max_abs);
    fmt::print(out, "inlet_offset_first_pa={}\n", rep.inlet_offset_first);
    fmt::print(out, "outlet_max_abs_pa={}\n", rep.outlet_max_abs);
    fmt::print(out, "result={} (rel_tol={})\n", rep.pass ? "PASS" : "FAIL", rep.rel_tol);
    return rep.pass ? kOk : kOracleBreach;
}

// -------------------------------------------------------------
// monitor
// -------------------------------------------------------------

int cmd_monitor(const Scenario& sc, const MonitorOptions& opt, std::ostream& out, std::ostream& err) {
    MonitorConfig cfg;
    cfg.spec = sc.spec;
    cfg.layout = sc.layout;
    cfg.sampling_step = require_run(sc).step;
    cfg.eps_meas = opt.eps_meas;
    cfg.fixation_rule = opt.rule;

    std::ifstream in(opt.stream);
    if (!in) return fail(err, kValidation, "cannot open stream '" + opt.stream.string() + "'");
    std::vector<PressureSample> stream;
    try {
        stream = read_stream_csv(in);
    } catch (const StreamFormatError& e) {
        return fail(err, kValidation, opt.stream.string() + ": " + e.what());
    }

    const std::vector<MonitorEvent> events = run_monitor(cfg, stream);
    for (const auto& e : events) fmt::print(out, "{}\n", format_event(e));
    if (opt.log) {
        const LogWriteResult res = append_event_log(*opt.log, events);
        if (!res.ok) return fail(err, kValidation, res.error);
    }
    return kOk;
}

}  // namespace gaslines::cli
