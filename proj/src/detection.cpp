#include "gaslines/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaslines {

// -------------------------------------------------------------
// Trajectories
// -------------------------------------------------------------

void PressureTrajectory::validate() const {
    if (samples.empty()) throw std::invalid_argument("PressureTrajectory: no samples");
    if (!(baseline_outlet > 0.0 && baseline_inlet > baseline_outlet)) {
        throw std::invalid_argument("PressureTrajectory: baseline requires P1 > P2 > 0");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.p_inlet > 0.0 && s.p_outlet > 0.0)) {
            throw std::invalid_argument("PressureTrajectory: non-positive pressure at sample " +
                                        std::to_string(i));
        }
        if (i > 0 && !(s.t > samples[i - 1].t)) {
            throw std::invalid_argument("PressureTrajectory: times not strictly increasing at sample " +
                                        std::to_string(i));
        }
    }
}

PressureSample PressureTrajectory::at(double t) const {
    if (samples.empty() || t < samples.front().t || t > samples.back().t) {
        throw std::invalid_argument("PressureTrajectory: t outside sampled span");
    }
    auto hi = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const PressureSample& s, double v) { return s.t < v; });
    if (hi->t == t || hi == samples.begin()) return *hi;
    const auto lo = std::prev(hi);
    const double w = (t - lo->t) / (hi->t - lo->t);
    return PressureSample{t, lo->p_inlet + w * (hi->p_inlet - lo->p_inlet),
                          lo->p_outlet + w * (hi->p_outlet - lo->p_outlet)};
}

RatioPoint pressure_ratio(double inlet_drop, double outlet_drop, double t, double eps_meas) {
    RatioPoint r;
    r.t = t;
    r.inlet_drop = inlet_drop;
    r.outlet_drop = outlet_drop;
    if (inlet_drop <= -eps_meas || outlet_drop <= -eps_meas) {
        r.cause = RatioCause::pressure_rise;
        return r;
    }
    if (inlet_drop < eps_meas || outlet_drop < eps_meas) {
        r.cause = RatioCause::below_floor;
        return r;
    }
    r.p = inlet_drop / outlet_drop;
    r.defined = true;
    r.cause = RatioCause::ok;
    return r;
}

RatioPoint pressure_ratio(const PressureTrajectory& traj, double t, double eps_meas) {
    const PressureSample s = traj.at(t);
    return pressure_ratio(traj.baseline_inlet - s.p_inlet, traj.baseline_outlet - s.p_outlet, t,
                          eps_meas);
}

// -------------------------------------------------------------
// Localization
// -------------------------------------------------------------

double phi(const PipelineSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("phi: t must be >= 0");
    const double at = alpha(spec) * t;
    return 2.0 / 3.0 + (std::exp(-2.0 * at) - 4.0 * std::exp(-at)) / (kPi * kPi);
}

ThetaValue theta_from_ratio(const PipelineSpec& spec, double p, double t) {
    if (!(p > 0.0)) throw std::invalid_argument("theta_from_ratio: p must be > 0");
    const double theta = 0.5 + (1.0 - p) / (1.0 + p) * phi(spec, t);
    return ThetaValue{theta, theta > 0.0 && theta < 1.0};
}

std::optional<RegimeBand> admissible_band(const PipelineSpec& spec, double t) {
    const double f = phi(spec, t);
    if (f <= 0.5) return std::nullopt;
    return RegimeBand{(f - 0.5) / (f + 0.5), (f + 0.5) / (f - 0.5), t};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::accident: return "Accident";
        case Verdict::technological: return "Technological";
        case Verdict::indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

ThetaEstimate locate(const PipelineSpec& spec, const PressureTrajectory& traj, double t_fix,
                     double eps_meas) {
    ThetaEstimate est;
    est.t_fix = t_fix;
    est.ratio = pressure_ratio(traj, t_fix, eps_meas);
    est.band = admissible_band(spec, t_fix);

    if (!est.ratio.defined) {
        // A leak only ever lowers pressure; a measurable rise is a regime change.
        est.verdict = est.ratio.cause == RatioCause::pressure_rise ? Verdict::technological
                                                                   : Verdict::indeterminate;
        return est;
    }
    const ThetaValue tv = theta_from_ratio(spec, est.ratio.p, t_fix);
    est.theta = tv.theta;
    est.theta_in_range = tv.in_range;
    est.ell2_est = tv.theta * spec.length;
    const bool consistent = est.band ? est.band->contains(est.ratio.p) : tv.in_range;
    est.verdict = consistent ? Verdict::accident : Verdict::technological;
    return est;
}

Verdict classify_regime(const PipelineSpec& spec, const PressureTrajectory& traj, double t_fix,
                        double eps_meas) {
    return locate(spec, traj, t_fix, eps_meas).verdict;
}

// -------------------------------------------------------------
// Fixation time
// -------------------------------------------------------------

double min_information_latency(const PipelineSpec& spec) {
    return spec.length / spec.sound_speed;
}

double fixation_time(const PipelineSpec& spec, double sampling_step) {
    if (!(sampling_step > 0.0)) throw std::invalid_argument("fixation_time: sampling_step must be > 0");
    const double latency = min_information_latency(spec);
    double k = std::floor(latency / sampling_step) + 1.0;
    while (k > 1.0 && (k - 1.0) * sampling_step > latency) k -= 1.0;
    while (k * sampling_step <= latency) k += 1.0;
    return k * sampling_step;
}

std::optional<double> fixation_time_empirical(const PressureTrajectory& traj, double eps_meas,
                                              int confirm) {
    if (confirm < 0) throw std::invalid_argument("fixation_time_empirical: confirm must be >= 0");
    struct Defined {
        double t;
        double excursion;
    };
    std::vector<Defined> defined;
    for (const auto& s : traj.samples) {
        const RatioPoint r = pressure_ratio(traj.baseline_inlet - s.p_inlet,
                                            traj.baseline_outlet - s.p_outlet, s.t, eps_meas);
        if (r.defined) defined.push_back({s.t, std::abs(r.p - 1.0)});
    }
    for (std::size_t i = 0; i < defined.size(); ++i) {
        const std::size_t end = std::min(defined.size(), i + 1 + static_cast<std::size_t>(confirm));
        const double slack = 1e-9 * std::max(1.0, defined[i].excursion);
        bool confirmed = true;
        for (std::size_t j = i + 1; j < end; ++j) {
            if (defined[j].excursion > defined[i].excursion + slack) {
                confirmed = false;
                break;
            }
        }
        if (confirmed) return defined[i].t;
    }
    return std::nullopt;
}

}  // namespace gaslines
