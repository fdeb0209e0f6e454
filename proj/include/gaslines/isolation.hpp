#pragma once

// Valve isolation and rerouting for a damaged line of a parallel pipeline.

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gaslines {

struct ConnectorValve {
    double position = 0.0;  ///< m along the damaged line
    std::string id;
};

struct ValveLayout {
    std::vector<double> line_valves;  ///< strictly increasing, includes 0 and L
    std::vector<ConnectorValve> connectors;

    double length() const { return line_valves.empty() ? 0.0 : line_valves.back(); }
    /// Throws std::invalid_argument; `length` is the owning line's L.
    void validate(double length) const;
};

/// Line valves every `spacing` metres on [0, length] (end valves always present).
ValveLayout uniform_layout(double length, double spacing, std::vector<ConnectorValve> connectors = {});

struct Span {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Span&) const = default;
};

/// Adjacent line valves bracketing the estimate. An estimate exactly on an
/// interior valve widens to that valve's two neighbours.
Span bounding_valves(const ValveLayout& layout, double ell2_est);

struct IsolationPlan {
    std::vector<double> close;      ///< line-valve positions to close
    std::vector<std::string> open;  ///< connector ids to open
    Span isolated_span;
    /// A side of the span away from a line end has no connector to feed it,
    /// or no connector could be opened at all.
    bool partial = false;

    bool operator==(const IsolationPlan&) const = default;
};

IsolationPlan build_isolation_plan(const ValveLayout& layout, double ell2_est);

/// Open/closed state of every valve; line valves keyed by position.
struct ValveState {
    std::map<double, bool> line_open;
    std::map<std::string, bool> connector_open;

    bool operator==(const ValveState&) const = default;
};

/// Stationary regime: line valves open, connector valves closed.
ValveState normal_regime_state(const ValveLayout& layout);

ValveState apply_plan(ValveState state, const IsolationPlan& plan);
ValveState revert_plan(ValveState state, const IsolationPlan& plan);

struct ValveChange {
    std::string valve;  ///< "line@<pos>" or the connector id
    bool open = false;  ///< state after the change
    bool operator==(const ValveChange&) const = default;
};

/// Valves whose state differs between `from` and `to`.
std::vector<ValveChange> diff_states(const ValveState& from, const ValveState& to);

}  // namespace gaslines
