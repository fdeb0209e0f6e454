#pragma once

// Explicit finite-difference solver for the deviation heat equation
//     u_t = kappa u_xx - c^2 G_leak delta(x - ell2),   u_x(0) = u_x(L) = 0,
// used as an independent check on the analytical series.

#include <vector>

#include <Eigen/Core>

#include "gaslines/pipeline_model.hpp"

namespace gaslines {

/// Default ratio of the step to the explicit stability limit.
inline constexpr double kFdSafety = 0.45;

struct FdGrid {
    int nx = 0;          ///< interval count; nodes are x_i = i L / nx, i = 0..nx
    double dt = 0.0;     ///< s
    double t_end = 0.0;  ///< s

    double dx(const PipelineSpec& spec) const { return spec.length / nx; }
    /// Throws std::invalid_argument for non-positive sizes or dt above dx^2/(2 kappa).
    void validate(const PipelineSpec& spec) const;
};

/// Largest stable step scaled by `safety`: safety * dx^2 / (2 kappa).
double stable_time_step(const PipelineSpec& spec, int nx, double safety = kFdSafety);

FdGrid make_grid(const PipelineSpec& spec, int nx, double t_end, double safety = kFdSafety);

struct FdField {
    Eigen::ArrayXd x;                      ///< node coordinates (m)
    std::vector<double> times;             ///< output times (s), first is 0
    std::vector<Eigen::ArrayXd> pressure;  ///< Pa, one slice per output time
};

/// Trapezoid-rule spatial mean of a nodal field on a uniform grid.
double spatial_mean(const Eigen::ArrayXd& values);

/// Integrates to every requested output time (sorted, within [0, t_end]).
/// The slice at t = 0 is always included and equals the steady profile.
FdField fd_solve(const PipelineSpec& spec, const LeakScenario& leak, const FdGrid& grid,
                 std::vector<double> output_times);

struct OracleReport {
    double max_abs = 0.0;  ///< Pa
    double max_rel = 0.0;  ///< relative to the series pressure
    double worst_x = 0.0;
    double worst_t = 0.0;
    double inlet_max_abs = 0.0;   ///< |inlet_pressure - FD| over output times
    double outlet_max_abs = 0.0;  ///< |outlet_pressure - FD| over output times
    double inlet_offset_first = 0.0;  ///< inlet_pressure - FD at the earliest output time
    double rel_tol = 0.0;
    bool pass = false;
};

/// Series vs FD over all grid nodes at the given output times (t > 0).
OracleReport compare_with_series(const PipelineSpec& spec, const LeakScenario& leak,
                                 const FdGrid& grid, const SeriesConfig& cfg,
                                 const std::vector<double>& output_times,
                                 double rel_tol = 1e-3);

}  // namespace gaslines
