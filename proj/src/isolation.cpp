#include "gaslines/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace gaslines {

void ValveLayout::validate(double length) const {
    if (line_valves.size() < 2) throw std::invalid_argument("ValveLayout: need at least the two end valves");
    if (line_valves.front() != 0.0) throw std::invalid_argument("ValveLayout: first line valve must be at 0");
    if (line_valves.back() != length) {
        throw std::invalid_argument(fmt::format("ValveLayout: last line valve must be at length {}", length));
    }
    for (std::size_t i = 1; i < line_valves.size(); ++i) {
        if (!(line_valves[i] > line_valves[i - 1])) {
            throw std::invalid_argument(
                fmt::format("ValveLayout: line valve positions not strictly increasing at {}", line_valves[i]));
        }
    }
    std::set<std::string> ids;
    for (const auto& c : connectors) {
        if (!(c.position >= 0.0 && c.position <= length)) {
            throw std::invalid_argument(fmt::format("ValveLayout: connector '{}' outside [0, length]", c.id));
        }
        if (c.id.empty()) throw std::invalid_argument("ValveLayout: connector id must be non-empty");
        if (!ids.insert(c.id).second) {
            throw std::invalid_argument(fmt::format("ValveLayout: duplicate connector id '{}'", c.id));
        }
    }
}

ValveLayout uniform_layout(double length, double spacing, std::vector<ConnectorValve> connectors) {
    if (!(length > 0.0 && spacing > 0.0)) {
        throw std::invalid_argument("uniform_layout: length and spacing must be > 0");
    }
    ValveLayout layout;
    const auto count = static_cast<long>(std::ceil(length / spacing - 1e-9));
    for (long i = 0; i < count; ++i) layout.line_valves.push_back(static_cast<double>(i) * spacing);
    layout.line_valves.push_back(length);
    layout.connectors = std::move(connectors);
    return layout;
}

Span bounding_valves(const ValveLayout& layout, double ell2_est) {
    const double length = layout.length();
    if (!(ell2_est > 0.0 && ell2_est < length)) {
        throw std::invalid_argument(fmt::format("bounding_valves: estimate {} outside (0, {})", ell2_est, length));
    }
    const auto& v = layout.line_valves;
    auto hi = std::upper_bound(v.begin(), v.end(), ell2_est);
    auto lo = std::prev(hi);
    if (*lo == ell2_est) --lo;  // interior valve hit: widen to both neighbours
    return Span{*lo, *hi};
}

IsolationPlan build_isolation_plan(const ValveLayout& layout, double ell2_est) {
    IsolationPlan plan;
    plan.isolated_span = bounding_valves(layout, ell2_est);
    const Span span = plan.isolated_span;
    plan.close = {span.lo, span.hi};

    const ConnectorValve* left = nullptr;
    const ConnectorValve* right = nullptr;
    for (const auto& c : layout.connectors) {
        if (c.position <= span.lo && (!left || c.position > left->position)) left = &c;
        if (c.position >= span.hi && (!right || c.position < right->position)) right = &c;
    }
    const bool needs_left = span.lo > 0.0;
    const bool needs_right = span.hi < layout.length();
    if (needs_left && left) plan.open.push_back(left->id);
    if (needs_right && right) plan.open.push_back(right->id);
    plan.partial = (needs_left && !left) || (needs_right && !right) || plan.open.empty();
    return plan;
}

ValveState normal_regime_state(const ValveLayout& layout) {
    ValveState state;
    for (double p : layout.line_valves) state.line_open[p] = true;
    for (const auto& c : layout.connectors) state.connector_open[c.id] = false;
    return state;
}

ValveState apply_plan(ValveState state, const IsolationPlan& plan) {
    for (double p : plan.close) state.line_open.at(p) = false;
    for (const auto& id : plan.open) state.connector_open.at(id) = true;
    return state;
}

ValveState revert_plan(ValveState state, const IsolationPlan& plan) {
    for (double p : plan.close) state.line_open.at(p) = true;
    for (const auto& id : plan.open) state.connector_open.at(id) = false;
    return state;
}

std::vector<ValveChange> diff_states(const ValveState& from, const ValveState& to) {
    std::vector<ValveChange> changes;
    for (const auto& [pos, open] : to.line_open) {
        auto it = from.line_open.find(pos);
        if (it == from.line_open.end() || it->second != open) {
            changes.push_back({fmt::format("line@{}", pos), open});
        }
    }
    for (const auto& [id, open] : to.connector_open) {
        auto it = from.connector_open.find(id);
        if (it == from.connector_open.end() || it->second != open) changes.push_back({id, open});
    }
    return changes;
}

}  // namespace gaslines
