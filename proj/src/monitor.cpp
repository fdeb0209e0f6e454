#include "gaslines/monitor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace gaslines {

namespace {

std::string num(double v) { return fmt::format("{}", v); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string orientation(double theta) {
    if (theta < 0.5) return "start-middle";
    if (theta > 0.5) return "middle-end";
    return "middle";
}

std::string cause_name(RatioCause c) {
    switch (c) {
        case RatioCause::ok: return "ok";
        case RatioCause::below_floor: return "below_floor";
        case RatioCause::pressure_rise: return "pressure_rise";
    }
    return "ok";
}

}  // namespace

std::string to_string(FixationRule r) { return r == FixationRule::grid ? "grid" : "empirical"; }

FixationRule parse_fixation_rule(const std::string& text) {
    if (text == "grid") return FixationRule::grid;
    if (text == "empirical") return FixationRule::empirical;
    throw std::invalid_argument("unknown fixation rule '" + text + "' (expected grid|empirical)");
}

void MonitorConfig::validate() const {
    spec.validate();
    layout.validate(spec.length);
    if (!(sampling_step > 0.0)) throw std::invalid_argument("MonitorConfig: sampling_step must be > 0");
    if (!(eps_meas > 0.0)) throw std::invalid_argument("MonitorConfig: eps_meas must be > 0");
    if (baseline_samples < 1) throw std::invalid_argument("MonitorConfig: baseline_samples must be >= 1");
    if (confirm_samples < 0) throw std::invalid_argument("MonitorConfig: confirm_samples must be >= 0");
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::baseline: return "Baseline";
        case EventKind::deviation_detected: return "DeviationDetected";
        case EventKind::fixation: return "Fixation";
        case EventKind::verdict: return "Verdict";
        case EventKind::plan_issued: return "PlanIssued";
        case EventKind::data_quality: return "DataQuality";
        case EventKind::episode_aborted: return "EpisodeAborted";
    }
    return "Unknown";
}

std::optional<std::string> MonitorEvent::get(const std::string& key) const {
    for (const auto& [k, v] : payload) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string format_event(const MonitorEvent& e) {
    std::string line = num(e.t) + "," + to_string(e.kind) + ",";
    for (std::size_t i = 0; i < e.payload.size(); ++i) {
        if (i > 0) line += ';';
        line += e.payload[i].first + "=" + e.payload[i].second;
    }
    return line;
}

// -------------------------------------------------------------
// Monitor state machine
// -------------------------------------------------------------

Monitor::Monitor(MonitorConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    grid_fixation_ = fixation_time(cfg_.spec, cfg_.sampling_step);
}

void Monitor::emit_baseline(double t, std::vector<MonitorEvent>& out) {
    std::vector<double> in, outlet;
    for (const auto& s : warmup_) {
        in.push_back(s.p_inlet);
        outlet.push_back(s.p_outlet);
    }
    base_in_ = median(in);
    base_out_ = median(outlet);
    out.push_back({t, EventKind::baseline,
                   {{"p_inlet", num(base_in_)}, {"p_outlet", num(base_out_)},
                    {"samples", std::to_string(warmup_.size())}}});
    phase_ = Phase::armed;
}

std::vector<MonitorEvent> Monitor::push(const PressureSample& s) {
    std::vector<MonitorEvent> out;
    if (last_ && !(s.t > last_->t)) {
        if (phase_ == Phase::episode) {
            out.push_back({s.t, EventKind::episode_aborted, {{"reason", "non_monotone_timestamp"}}});
            phase_ = Phase::armed;
        } else {
            out.push_back({s.t, EventKind::data_quality, {{"reason", "non_monotone_timestamp"}}});
        }
        return out;
    }
    if (last_ && s.t - last_->t > 2.0 * cfg_.sampling_step) {
        out.push_back({s.t, EventKind::data_quality, {{"reason", "gap"}, {"gap_s", num(s.t - last_->t)}}});
    }

    switch (phase_) {
        case Phase::collecting:
            warmup_.push_back(s);
            if (static_cast<int>(warmup_.size()) == cfg_.baseline_samples) emit_baseline(s.t, out);
            break;
        case Phase::armed: {
            const double din = base_in_ - s.p_inlet;
            const double dout = base_out_ - s.p_outlet;
            if (std::max(std::abs(din), std::abs(dout)) >= cfg_.eps_meas) start_episode(s, out);
            break;
        }
        case Phase::episode:
            advance_episode(s, out);
            break;
        case Phase::rearming: {
            const bool quiet = std::abs(base_in_ - s.p_inlet) < cfg_.eps_meas &&
                               std::abs(base_out_ - s.p_outlet) < cfg_.eps_meas;
            if (!quiet) {
                quiet_since_.reset();
            } else if (!quiet_since_) {
                quiet_since_ = s.t;
            } else if (s.t - *quiet_since_ >= grid_fixation_) {
                phase_ = Phase::armed;
                quiet_since_.reset();
            }
            break;
        }
    }
    last_ = s;
    return out;
}

std::vector<MonitorEvent> Monitor::finish() {
    std::vector<MonitorEvent> out;
    if (phase_ == Phase::collecting && !warmup_.empty()) emit_baseline(warmup_.back().t, out);
    return out;
}

void Monitor::start_episode(const PressureSample& s, std::vector<MonitorEvent>& out) {
    // The event happened after the last quiet sample; the clock starts there.
    onset_ = last_ ? last_->t : s.t;
    episode_ = PressureTrajectory{};
    episode_.baseline_inlet = base_in_;
    episode_.baseline_outlet = base_out_;
    if (last_) episode_.samples.push_back({0.0, last_->p_inlet, last_->p_outlet});
    out.push_back({s.t, EventKind::deviation_detected,
                   {{"onset", num(onset_)},
                    {"inlet_drop", num(base_in_ - s.p_inlet)},
                    {"outlet_drop", num(base_out_ - s.p_outlet)}}});
    phase_ = Phase::episode;
    advance_episode(s, out);
}

void Monitor::advance_episode(const PressureSample& s, std::vector<MonitorEvent>& out) {
    const double elapsed = s.t - onset_;
    if (episode_.samples.empty() || elapsed > episode_.samples.back().t) {
        episode_.samples.push_back({elapsed, s.p_inlet, s.p_outlet});
    }

    if (cfg_.fixation_rule == FixationRule::grid) {
        if (elapsed + 1e-9 >= grid_fixation_) decide(s.t, elapsed, out);
        return;
    }
    const auto candidate = fixation_time_empirical(episode_, cfg_.eps_meas, cfg_.confirm_samples);
    if (!candidate) return;
    int after = 0;
    for (const auto& e : episode_.samples) {
        if (e.t <= *candidate) continue;
        if (pressure_ratio(base_in_ - e.p_inlet, base_out_ - e.p_outlet, e.t, cfg_.eps_meas).defined) ++after;
    }
    if (after >= cfg_.confirm_samples) decide(s.t, *candidate, out);
}

void Monitor::decide(double t_emit, double elapsed, std::vector<MonitorEvent>& out) {
    out.push_back({t_emit, EventKind::fixation,
                   {{"elapsed", num(elapsed)}, {"rule", to_string(cfg_.fixation_rule)}}});

    const ThetaEstimate est = locate(cfg_.spec, episode_, elapsed, cfg_.eps_meas);
    MonitorEvent verdict{t_emit, EventKind::verdict, {{"verdict", to_string(est.verdict)}}};
    verdict.payload.emplace_back("cause", cause_name(est.ratio.cause));
    if (est.ratio.defined) {
        verdict.payload.emplace_back("p", num(est.ratio.p));
        verdict.payload.emplace_back("theta", num(est.theta));
        verdict.payload.emplace_back("ell2_est", num(est.ell2_est));
        verdict.payload.emplace_back("orientation", orientation(est.theta));
    }
    if (est.band) {
        verdict.payload.emplace_back("band_lo", num(est.band->lo));
        verdict.payload.emplace_back("band_hi", num(est.band->hi));
    } else {
        verdict.payload.emplace_back("band", "unavailable");
    }
    out.push_back(std::move(verdict));

    if (est.verdict == Verdict::accident) {
        const IsolationPlan plan = build_isolation_plan(cfg_.layout, est.ell2_est);
        std::string close, open;
        for (double p : plan.close) close += (close.empty() ? "" : "|") + num(p);
        for (const auto& id : plan.open) open += (open.empty() ? "" : "|") + id;
        out.push_back({t_emit, EventKind::plan_issued,
                       {{"close", close},
                        {"open", open},
                        {"span_lo", num(plan.isolated_span.lo)},
                        {"span_hi", num(plan.isolated_span.hi)},
                        {"partial", plan.partial ? "1" : "0"}}});
    }
    phase_ = Phase::rearming;
    quiet_since_.reset();
}

std::vector<MonitorEvent> run_monitor(const MonitorConfig& cfg, std::span<const PressureSample> stream) {
    Monitor monitor(cfg);
    std::vector<MonitorEvent> events;
    for (const auto& s : stream) {
        auto ev = monitor.push(s);
        events.insert(events.end(), ev.begin(), ev.end());
    }
    auto tail = monitor.finish();
    events.insert(events.end(), tail.begin(), tail.end());
    return events;
}

// -------------------------------------------------------------
// Stream input and event log
// -------------------------------------------------------------

StreamFormatError::StreamFormatError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

std::vector<PressureSample> read_stream_csv(std::istream& in) {
    std::vector<PressureSample> samples;
    std::string raw;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) {
            throw StreamFormatError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        if (!header_seen) {
            double probe = 0.0;
            if (parse_double(fields[0], probe)) {
                throw StreamFormatError(line_no, "missing header line t_seconds,p_inlet_pa,p_outlet_pa");
            }
            header_seen = true;
            continue;
        }
        PressureSample s;
        if (!parse_double(fields[0], s.t) || !parse_double(fields[1], s.p_inlet) ||
            !parse_double(fields[2], s.p_outlet)) {
            throw StreamFormatError(line_no, "non-numeric field");
        }
        samples.push_back(s);
    }
    if (!header_seen) throw StreamFormatError(line_no + 1, "empty stream: header line required");
    return samples;
}

LogWriteResult append_event_log(const std::filesystem::path& path, std::span<const MonitorEvent> events) {
    int runs = 0;
    {
        std::ifstream existing(path);
        std::string line;
        while (std::getline(existing, line)) {
            if (line.rfind("# gaslines-events", 0) == 0) ++runs;
        }
    }
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) return {false, "cannot open event log '" + path.string() + "' for appending"};
    out << "# gaslines-events run=" << runs + 1 << '\n';
    for (const auto& e : events) out << format_event(e) << '\n';
    out.flush();
    if (!out) return {false, "write to event log '" + path.string() + "' failed"};
    return {};
}

}  // namespace gaslines
