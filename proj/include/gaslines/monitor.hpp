#pragma once

// Dispatcher-side replay of end-pressure streams: baseline, episode clock,
// verdict at the fixation instant, isolation plan, append-only event log.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gaslines/detection.hpp"
#include "gaslines/isolation.hpp"
#include "gaslines/pipeline_model.hpp"

namespace gaslines {

enum class FixationRule { grid, empirical };

std::string to_string(FixationRule r);
FixationRule parse_fixation_rule(const std::string& text);

struct MonitorConfig {
    PipelineSpec spec;
    ValveLayout layout;
    double sampling_step = 0.0;  ///< s
    double eps_meas = kDefaultEpsMeas;
    FixationRule fixation_rule = FixationRule::grid;
    int baseline_samples = 5;  ///< baseline is the per-channel median of these
    int confirm_samples = kDefaultConfirmSamples;

    void validate() const;
};

enum class EventKind {
    baseline,
    deviation_detected,
    fixation,
    verdict,
    plan_issued,
    data_quality,
    episode_aborted,
};

std::string to_string(EventKind k);

struct MonitorEvent {
    double t = 0.0;
    EventKind kind = EventKind::baseline;
    std::vector<std::pair<std::string, std::string>> payload;

    /// Payload value for `key`, if present.
    std::optional<std::string> get(const std::string& key) const;
    bool operator==(const MonitorEvent&) const = default;
};

/// `t,kind,key=value;key=value` with locale-independent shortest numbers.
std::string format_event(const MonitorEvent& e);

/// Incremental monitor for one line's sensor stream.
class Monitor {
public:
    explicit Monitor(MonitorConfig cfg);

    std::vector<MonitorEvent> push(const PressureSample& s);
    /// Flushes a baseline from a stream shorter than `baseline_samples`.
    std::vector<MonitorEvent> finish();

private:
    enum class Phase { collecting, armed, episode, rearming };

    void start_episode(const PressureSample& s, std::vector<MonitorEvent>& out);
    void advance_episode(const PressureSample& s, std::vector<MonitorEvent>& out);
    void decide(double t_emit, double elapsed, std::vector<MonitorEvent>& out);
    void emit_baseline(double t, std::vector<MonitorEvent>& out);

    MonitorConfig cfg_;
    double grid_fixation_ = 0.0;
    Phase phase_ = Phase::collecting;
    std::vector<PressureSample> warmup_;
    double base_in_ = 0.0;
    double base_out_ = 0.0;
    std::optional<PressureSample> last_;
    double onset_ = 0.0;
    PressureTrajectory episode_;
    std::optional<double> quiet_since_;
};

std::vector<MonitorEvent> run_monitor(const MonitorConfig& cfg, std::span<const PressureSample> stream);

/// Raised for malformed stream input; `line` is 1-based.
class StreamFormatError : public std::runtime_error {
public:
    StreamFormatError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads `t_seconds,p_inlet_pa,p_outlet_pa` records after a mandatory header line.
std::vector<PressureSample> read_stream_csv(std::istream& in);

struct LogWriteResult {
    bool ok = true;
    std::string error;
};

/// Appends a `# gaslines-events run=<n>` header and one line per event.
LogWriteResult append_event_log(const std::filesystem::path& path,
                                std::span<const MonitorEvent> events);

}  // namespace gaslines
