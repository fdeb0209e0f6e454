#pragma once

// Subcommand implementations behind the `gaslines` executable. Each writes
// results to `out`, diagnostics to `err`, and returns a process exit code.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gaslines/detection.hpp"
#include "gaslines/monitor.hpp"
#include "gaslines/scenario.hpp"

namespace gaslines::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 1,
    kInsufficientSignal = 2,
    kOracleBreach = 3,
};

/// Table resolution: 0.01 x 10^4 Pa.
inline constexpr double kTableResolution = 100.0;

/// Rounds a pressure to the two-decimal 10^4 Pa table resolution.
double round_to_table(double pressure);

struct SimulateOptions {
    bool csv = false;  ///< full-precision Pa instead of two-decimal 10^4 Pa
    int lead_in = 0;   ///< steady samples at t_start - k * step, k = lead_in..1 (CSV)
    std::optional<std::filesystem::path> field_out;
    int field_points = 101;
};

struct LocateOptions {
    std::optional<double> at;  ///< default: fixation time by `rule`
    std::optional<std::filesystem::path> observed;
    double eps_meas = kDefaultEpsMeas;
    FixationRule rule = FixationRule::grid;
    bool round = false;  ///< round simulated pressures to table resolution
};

struct CurvesOptions {
    double eps_meas = kDefaultEpsMeas;
    bool round = false;
};

struct VerifyOptions {
    int nx = 2000;
    std::optional<double> dt;
    double rel_tol = 1e-3;
};

struct MonitorOptions {
    std::filesystem::path stream;
    std::optional<std::filesystem::path> log;
    double eps_meas = kDefaultEpsMeas;
    FixationRule rule = FixationRule::grid;
};

/// Simulated end-pressure trajectory over the scenario's run grid, with the
/// scenario's steady end pressures as baseline.
PressureTrajectory simulate_trajectory(const Scenario& sc, bool round);

int cmd_simulate(const Scenario& sc, const SimulateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_locate(const Scenario& sc, const LocateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_curves(const std::vector<Scenario>& scenarios, const CurvesOptions& opt, std::ostream& out,
               std::ostream& err);
int cmd_verify(const Scenario& sc, const VerifyOptions& opt, std::ostream& out, std::ostream& err);
int cmd_monitor(const Scenario& sc, const MonitorOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace gaslines::cli
