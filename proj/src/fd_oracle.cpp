#include "gaslines/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gaslines {

void FdGrid::validate(const PipelineSpec& spec) const {
    if (nx < 2) throw std::invalid_argument("FdGrid: nx must be >= 2");
    if (!(dt > 0.0)) throw std::invalid_argument("FdGrid: dt must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("FdGrid: t_end must be >= 0");
    const double limit = stable_time_step(spec, nx, 1.0);
    if (dt > limit) {
        throw std::invalid_argument("FdGrid: dt=" + std::to_string(dt) +
                                    " s exceeds stability limit " + std::to_string(limit) +
                                    " s; stable dt at safety " + std::to_string(kFdSafety) +
                                    " is " + std::to_string(stable_time_step(spec, nx)) + " s");
    }
}

double stable_time_step(const PipelineSpec& spec, int nx, double safety) {
    if (nx < 1) throw std::invalid_argument("stable_time_step: nx must be >= 1");
    if (!(safety > 0.0 && safety <= 1.0)) {
        throw std::invalid_argument("stable_time_step: safety must lie in (0, 1]");
    }
    const double dx = spec.length / nx;
    return safety * dx * dx / (2.0 * spec.diffusivity());
}

FdGrid make_grid(const PipelineSpec& spec, int nx, double t_end, double safety) {
    return FdGrid{nx, stable_time_step(spec, nx, safety), t_end};
}

double spatial_mean(const Eigen::ArrayXd& values) {
    const Eigen::Index n = values.size();
    if (n < 2) throw std::invalid_argument("spatial_mean: need at least two nodes");
    const double interior = values.segment(1, n - 2).sum();
    return (interior + 0.5 * (values(0) + values(n - 1))) / static_cast<double>(n - 1);
}

FdField fd_solve(const PipelineSpec& spec, const LeakScenario& leak, const FdGrid& grid,
                 std::vector<double> output_times) {
    spec.validate();
    leak.validate(spec);
    grid.validate(spec);

    std::sort(output_times.begin(), output_times.end());
    output_times.erase(std::unique(output_times.begin(), output_times.end()), output_times.end());
    if (!output_times.empty() && (output_times.front() < 0.0 || output_times.back() > grid.t_end)) {
        throw std::invalid_argument("fd_solve: output times must lie within [0, t_end]");
    }
    if (output_times.empty() || output_times.front() > 0.0) {
        output_times.insert(output_times.begin(), 0.0);
    }

    const int nx = grid.nx;
    const double dx = grid.dx(spec);
    const double kappa = spec.diffusivity();
    const double c = spec.sound_speed;

    FdField field;
    field.x = Eigen::ArrayXd::LinSpaced(nx + 1, 0.0, spec.length);
    Eigen::ArrayXd steady = spec.p_inlet_0 - spec.two_a * spec.g0 * field.x;

    // Point sink lumped onto the nearest node's control volume.
    const int sink = std::clamp(static_cast<int>(std::lround(leak.ell2 / dx)), 0, nx);
    const double sink_width = (sink == 0 || sink == nx) ? 0.5 * dx : dx;
    const double sink_rate = c * c * leak.g_leak / sink_width;

    Eigen::ArrayXd u = Eigen::ArrayXd::Zero(nx + 1);
    Eigen::ArrayXd next(nx + 1);
    const Eigen::Index m = nx - 1;

    double t = 0.0;
    for (double target : output_times) {
        const double span = target - t;
        if (span > 0.0) {
            const long steps = static_cast<long>(std::ceil(span / grid.dt - 1e-9));
            const double h = span / static_cast<double>(steps);
            const double r = kappa * h / (dx * dx);
            for (long s = 0; s < steps; ++s) {
                next.segment(1, m) =
                    u.segment(1, m) + r * (u.segment(2, m) - 2.0 * u.segment(1, m) + u.segment(0, m));
                next(0) = u(0) + 2.0 * r * (u(1) - u(0));
                next(nx) = u(nx) + 2.0 * r * (u(nx - 1) - u(nx));
                next(sink) -= h * sink_rate;
                u.swap(next);
            }
            t = target;
        }
        field.times.push_back(target);
        field.pressure.push_back(steady + u);
    }
    return field;
}

OracleReport compare_with_series(const PipelineSpec& spec, const LeakScenario& leak,
                                 const FdGrid& grid, const SeriesConfig& cfg,
                                 const std::vector<double>& output_times, double rel_tol) {
    cfg.validate();
    if (output_times.empty()) {
        throw std::invalid_argument("compare_with_series: no output times requested");
    }
    for (double t : output_times) {
        if (!(t > 0.0 && t <= grid.t_end)) {
            throw std::invalid_argument("compare_with_series: output time " + std::to_string(t) +
                                        " outside (0, t_end]");
        }
    }
    const FdField field = fd_solve(spec, leak, grid, output_times);

    OracleReport report;
    report.rel_tol = rel_tol;
    bool first = true;
    double ends_rel = 0.0;
    for (std::size_t k = 0; k < field.times.size(); ++k) {
        const double t = field.times[k];
        if (t == 0.0) continue;
        const Eigen::ArrayXd& fd = field.pressure[k];
        for (Eigen::Index i = 0; i < fd.size(); ++i) {
            const double series = transient_pressure(spec, leak, cfg, field.x(i), t).pressure;
            const double err = std::abs(series - fd(i));
            const double rel = err / std::abs(series);
            report.max_abs = std::max(report.max_abs, err);
            if (rel > report.max_rel) {
                report.max_rel = rel;
                report.worst_x = field.x(i);
                report.worst_t = t;
            }
        }
        const double inlet = inlet_pressure(spec, leak, cfg, t).pressure;
        const double outlet = outlet_pressure(spec, leak, cfg, t).pressure;
        const double d_in = inlet - fd(0);
        const double d_out = outlet - fd(fd.size() - 1);
        if (first) {
            report.inlet_offset_first = d_in;
            first = false;
        }
        report.inlet_max_abs = std::max(report.inlet_max_abs, std::abs(d_in));
        report.outlet_max_abs = std::max(report.outlet_max_abs, std::abs(d_out));
        ends_rel = std::max({ends_rel, std::abs(d_in) / std::abs(inlet),
                             std::abs(d_out) / std::abs(outlet)});
    }
    report.pass = report.max_rel <= rel_tol && ends_rel <= rel_tol;
    return report;
}

}  // namespace gaslines
