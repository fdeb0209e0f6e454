#pragma once

// Section/key-value scenario files:
//
//   [pipeline]  p1, p2, length, g0, c, two_a
//   [leak]      ell2, g_leak (optional, defaults to g0)
//   [series]    n_max, tail_tol, variant
//   [valves]    line = 0, 10000, ...      connectors = id@position, ...
//   [run]       t_start, t_end, step
//
// '#' and ';' start comments.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaslines/isolation.hpp"
#include "gaslines/pipeline_model.hpp"

namespace gaslines {

struct RunGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    double step = 0.0;

    /// t_start, t_start + step, ... up to and including t_end.
    std::vector<double> times() const;
};

struct Scenario {
    std::string id;
    PipelineSpec spec;
    std::optional<LeakScenario> leak;
    SeriesConfig series;
    ValveLayout layout;
    std::optional<RunGrid> run;
};

/// Parse or validation failure with the offending line (0 if not line-bound).
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::size_t line, const std::string& what);
    /// Same line, message prefixed with `context` (e.g. the file path).
    ScenarioError(const ScenarioError& inner, const std::string& context);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

Scenario parse_scenario(std::istream& in, const std::string& id);
/// The scenario id is the file stem.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace gaslines
