#pragma once

// Leak localization from end-pressure histories and accident/technological
// regime discrimination.

#include <optional>
#include <string>
#include <vector>

#include "gaslines/pipeline_model.hpp"

namespace gaslines {

/// Default measurability floor: two-decimal resolution of 10^4 Pa tables.
inline constexpr double kDefaultEpsMeas = 100.0;

struct PressureSample {
    double t = 0.0;         ///< s, measured from the event onset
    double p_inlet = 0.0;   ///< Pa
    double p_outlet = 0.0;  ///< Pa
};

struct PressureTrajectory {
    std::vector<PressureSample> samples;
    double baseline_inlet = 0.0;   ///< pre-event P1 (Pa)
    double baseline_outlet = 0.0;  ///< pre-event P2 (Pa)

    void validate() const;
    /// Linear interpolation; exact at sample instants. Requires t within span.
    PressureSample at(double t) const;
};

enum class RatioCause { ok, below_floor, pressure_rise };

struct RatioPoint {
    double t = 0.0;
    double p = 0.0;
    bool defined = false;
    RatioCause cause = RatioCause::below_floor;
    double inlet_drop = 0.0;   ///< P1 - p_inlet (Pa)
    double outlet_drop = 0.0;  ///< P2 - p_outlet (Pa)
};

/// Ratio of inlet drop to outlet drop. Undefined when either drop is below
/// eps_meas; a rise of at least eps_meas at either end is reported separately.
RatioPoint pressure_ratio(const PressureTrajectory& traj, double t,
                          double eps_meas = kDefaultEpsMeas);
RatioPoint pressure_ratio(double inlet_drop, double outlet_drop, double t, double eps_meas);

/// Localization gain 2/3 + (exp(-2 alpha t) - 4 exp(-alpha t)) / pi^2.
double phi(const PipelineSpec& spec, double t);

struct ThetaValue {
    double theta = 0.0;
    bool in_range = false;  ///< theta strictly inside (0, 1)
};

/// theta = 1/2 + (1 - p)/(1 + p) * phi(t). Out-of-range values are returned
/// unclamped with in_range = false. Throws for p <= 0.
ThetaValue theta_from_ratio(const PipelineSpec& spec, double p, double t);

struct RegimeBand {
    double lo = 0.0;
    double hi = 0.0;
    double t = 0.0;

    bool contains(double p) const { return p > lo && p < hi; }
};

/// Ratios consistent with a single leak at some theta in (0, 1).
/// std::nullopt while phi(t) <= 1/2 (band degenerate).
std::optional<RegimeBand> admissible_band(const PipelineSpec& spec, double t);

enum class Verdict { accident, technological, indeterminate };

std::string to_string(Verdict v);

struct ThetaEstimate {
    double theta = 0.0;
    double ell2_est = 0.0;  ///< theta * L (m)
    double t_fix = 0.0;
    Verdict verdict = Verdict::indeterminate;
    RatioPoint ratio;
    std::optional<RegimeBand> band;
    bool theta_in_range = false;
};

/// Ratio, theta and verdict at t_fix. theta/ell2_est are meaningful only when
/// ratio.defined.
ThetaEstimate locate(const PipelineSpec& spec, const PressureTrajectory& traj, double t_fix,
                     double eps_meas = kDefaultEpsMeas);

Verdict classify_regime(const PipelineSpec& spec, const PressureTrajectory& traj, double t_fix,
                        double eps_meas = kDefaultEpsMeas);

/// Acoustic travel time L / c: the earliest instant both ends can reflect the event.
double min_information_latency(const PipelineSpec& spec);

/// Smallest multiple of sampling_step strictly greater than L / c.
double fixation_time(const PipelineSpec& spec, double sampling_step);

/// Samples after an extremum that must not exceed it before it is accepted.
inline constexpr int kDefaultConfirmSamples = 2;

/// Earliest sample with a defined ratio whose |p - 1| is not exceeded by the
/// following `confirm` defined samples. std::nullopt if the ratio is never defined.
std::optional<double> fixation_time_empirical(const PressureTrajectory& traj,
                                              double eps_meas = kDefaultEpsMeas,
                                              int confirm = kDefaultConfirmSamples);

}  // namespace gaslines
