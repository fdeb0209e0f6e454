#include "gaslines/pipeline_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaslines {

// -------------------------------------------------------------
// Validation
// -------------------------------------------------------------

void PipelineSpec::validate() const {
    auto fail = [](const char* msg) {
        throw std::invalid_argument(std::string("PipelineSpec: ") + msg);
    };
    if (!(p_outlet_0 > 0.0)) fail("p_outlet_0 must be > 0");
    if (!(p_inlet_0 > p_outlet_0)) fail("p_inlet_0 must exceed p_outlet_0");
    if (!(length > 0.0)) fail("length must be > 0");
    if (!(g0 >= 0.0)) fail("g0 must be >= 0");
    if (!(sound_speed > 0.0)) fail("sound_speed must be > 0");
    if (!(two_a > 0.0)) fail("two_a must be > 0");
    const double implied_outlet = p_inlet_0 - two_a * g0 * length;
    if (std::abs(implied_outlet - p_outlet_0) > 1e-4 * p_inlet_0) {
        fail("p_outlet_0 inconsistent with steady profile p_inlet_0 - two_a*g0*length");
    }
}

void LeakScenario::validate(const PipelineSpec& spec) const {
    if (!(ell2 > 0.0 && ell2 < spec.length)) {
        throw std::invalid_argument("LeakScenario: ell2 must lie strictly inside (0, length)");
    }
    if (!(g_leak >= 0.0)) {
        throw std::invalid_argument("LeakScenario: g_leak must be >= 0");
    }
}

LeakScenario leak_at(const PipelineSpec& spec, double ell2) {
    return LeakScenario{ell2, spec.g0};
}

void SeriesConfig::validate() const {
    if (n_max < 1) throw std::invalid_argument("SeriesConfig: n_max must be >= 1");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("SeriesConfig: tail_tol must be > 0");
    if (!(floor_fraction >= 0.0)) {
        throw std::invalid_argument("SeriesConfig: floor_fraction must be >= 0");
    }
}

std::string to_string(ModelVariant v) {
    return v == ModelVariant::reconciled ? "reconciled" : "as_printed";
}

ModelVariant parse_variant(const std::string& text) {
    if (text == "reconciled") return ModelVariant::reconciled;
    if (text == "as_printed") return ModelVariant::as_printed;
    throw std::invalid_argument("unknown model variant '" + text +
                                "' (expected reconciled|as_printed)");
}

// -------------------------------------------------------------
// Closed-form pieces
// -------------------------------------------------------------

double alpha(const PipelineSpec& spec) {
    const double c = spec.sound_speed;
    const double l = spec.length;
    return kPi * kPi * c * c / (spec.two_a * l * l);
}

double steady_pressure(const PipelineSpec& spec, double x) {
    if (!(x >= 0.0 && x <= spec.length)) {
        throw std::invalid_argument("steady_pressure: x outside [0, length]");
    }
    return spec.p_inlet_0 - spec.two_a * spec.g0 * x;
}

double green_neumann(double x, double xi, double length) {
    if (!(length > 0.0)) throw std::invalid_argument("green_neumann: length must be > 0");
    if (!(x >= 0.0 && x <= length) || !(xi >= 0.0 && xi <= length)) {
        throw std::invalid_argument("green_neumann: coordinate outside [0, length]");
    }
    return (x * x + xi * xi) / (2.0 * length) + length / 3.0 - std::max(x, xi);
}

double series_validity_floor(const PipelineSpec& spec, const SeriesConfig& cfg) {
    return cfg.floor_fraction / alpha(spec);
}

double cosine_tail_bound(int n_max, double rate_times_t) {
    const double n1 = static_cast<double>(n_max) + 1.0;
    const double crude = 1.0 / static_cast<double>(n_max);
    if (rate_times_t <= 0.0) return crude;
    // n^2 >= (N+1) n for n > N, so the tail is dominated by a geometric series.
    const double r = std::exp(-n1 * rate_times_t);
    if (r >= 1.0) return crude;
    return std::min(crude, std::pow(r, n1) / ((1.0 - r) * n1 * n1));
}

namespace {

void check_domain(const PipelineSpec& spec, double x, double t) {
    if (!(x >= 0.0 && x <= spec.length)) {
        throw std::invalid_argument("transient_pressure: x outside [0, length]");
    }
    if (!(t >= 0.0)) throw std::invalid_argument("transient_pressure: t must be >= 0");
}

// Accumulated free-space response at distance r after time t of a unit
// point source switched on at t = 0:  int_0^t (4 pi k s)^-1/2 exp(-r^2/4ks) ds.
double accumulated_heat_kernel(double r, double t, double kappa) {
    const double ar = std::abs(r);
    const double s = std::sqrt(kappa * t);
    return std::sqrt(t / (kPi * kappa)) * std::exp(-ar * ar / (4.0 * s * s)) -
           ar / (2.0 * kappa) * std::erfc(ar / (2.0 * s));
}

// Short-time deviation by the method of images (reflections in x = 0, L).
double image_sum_deviation(const PipelineSpec& spec, const LeakScenario& leak,
                           double x, double t) {
    const double kappa = spec.diffusivity();
    const double l = spec.length;
    double acc = 0.0;
    for (int k = -2; k <= 2; ++k) {
        const double shift = 2.0 * k * l;
        acc += accumulated_heat_kernel(x - (leak.ell2 + shift), t, kappa);
        acc += accumulated_heat_kernel(x - (-leak.ell2 + shift), t, kappa);
    }
    const double c = spec.sound_speed;
    return -c * c * leak.g_leak * acc;
}

PressureValue finish(double pressure, double tail, const SeriesConfig& cfg) {
    return PressureValue{pressure, tail, tail > cfg.tail_tol};
}

PressureValue reconciled_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                                  const SeriesConfig& cfg, double x, double t) {
    const double steady = steady_pressure(spec, x);
    if (t == 0.0 || leak.g_leak == 0.0) return PressureValue{steady, 0.0, false};
    if (t < series_validity_floor(spec, cfg)) {
        return PressureValue{steady + image_sum_deviation(spec, leak, x, t), 0.0, false};
    }

    const double l = spec.length;
    const double c = spec.sound_speed;
    const double g = leak.g_leak;
    const double decay = alpha(spec) * t;
    const double amp = 2.0 * spec.two_a * l * g / (kPi * kPi);

    double sum = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const double dn = n;
        const double mode = std::exp(-dn * dn * decay);
        if (mode == 0.0) break;
        sum += std::cos(kPi * dn * x / l) * std::cos(kPi * dn * leak.ell2 / l) * mode / (dn * dn);
    }
    const double deviation = -(c * c * g / l) * t -
                             spec.two_a * g * green_neumann(x, leak.ell2, l) + amp * sum;
    return finish(steady + deviation, amp * cosine_tail_bound(cfg.n_max, decay), cfg);
}

// Literal transcription of the published field expressions, including the
// G0-weighted series and the sign of the downstream correction.
PressureValue printed_field(const PipelineSpec& spec, const LeakScenario& leak,
                            const SeriesConfig& cfg, double x, double t) {
    const double l = spec.length;
    const double ta = spec.two_a;
    const double g0 = spec.g0;
    const double g = leak.g_leak;
    const double l2 = leak.ell2;
    const double decay = alpha(spec) * t;

    double odd_sum = 0.0;
    double alt_sum = 0.0;
    double leak_sum = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const double dn = n;
        const double odd = 2.0 * dn - 1.0;
        const double cx = std::cos(kPi * dn * x / l);
        odd_sum += cx * std::exp(-odd * odd * decay) / (odd * odd);
        alt_sum += (n % 2 == 1 ? 2.0 : 0.0) * cx * std::exp(-dn * dn * decay) / (dn * dn);
        leak_sum += cx * std::cos(kPi * dn * l2 / l) * std::exp(-dn * dn * decay) / (dn * dn);
    }
    const double pi2 = kPi * kPi;
    double p = spec.p_inlet_0 - ta * g0 * x + 4.0 * ta * l * g0 / pi2 * odd_sum -
               2.0 * ta * l * g0 / pi2 * alt_sum -
               ta * g * (x * x / (2.0 * l) + l2 * l2 / (2.0 * l) + l / 3.0 - l2) +
               2.0 * ta * l * g / pi2 * leak_sum;
    if (x > l2) p -= ta * g * (x - l2);
    const double coeff = (8.0 * ta * l * g0 + 2.0 * ta * l * g) / pi2;
    return finish(p, coeff * cosine_tail_bound(cfg.n_max, decay), cfg);
}

// Literal end-point expressions; `outlet` selects the x = L form.
PressureValue printed_end(const PipelineSpec& spec, const LeakScenario& leak,
                          const SeriesConfig& cfg, double t, bool outlet) {
    const double l = spec.length;
    const double ta = spec.two_a;
    const double c = spec.sound_speed;
    const double g0 = spec.g0;
    const double g = leak.g_leak;
    const double l2 = leak.ell2;
    const double decay = alpha(spec) * t;

    double odd_sum = 0.0;
    double leak_sum = 0.0;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const double dn = n;
        const double odd = 2.0 * dn - 1.0;
        const double sign = outlet && (n % 2 == 1) ? -1.0 : 1.0;
        odd_sum += sign * std::exp(-odd * odd * decay) / (odd * odd);
        // The printed leak series decays as exp(-alpha t) for every mode.
        leak_sum += sign * std::cos(kPi * dn * l2 / l) * std::exp(-decay) / (dn * dn);
    }
    const double pi2 = kPi * kPi;
    const double base = outlet ? spec.p_outlet_0 : spec.p_inlet_0;
    const double kernel = (outlet ? l / 2.0 : 0.0) + l2 * l2 / (2.0 * l) + l / 3.0 - l2;
    double p = base - c * c * t / l * g + 4.0 * ta * l * g0 / pi2 * odd_sum - ta * g * kernel +
               2.0 * ta * l * g / pi2 * leak_sum;
    if (outlet) p -= ta * g * (l2 - l);
    const double tail = 4.0 * ta * l * g0 / pi2 * cosine_tail_bound(cfg.n_max, decay) +
                        2.0 * ta * l * g / pi2 * std::exp(-decay) / cfg.n_max;
    return finish(p, tail, cfg);
}

}  // namespace

// -------------------------------------------------------------
// Public evaluation
// -------------------------------------------------------------

PressureValue transient_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                                 const SeriesConfig& cfg, double x, double t) {
    check_domain(spec, x, t);
    if (cfg.variant == ModelVariant::as_printed) return printed_field(spec, leak, cfg, x, t);
    return reconciled_pressure(spec, leak, cfg, x, t);
}

PressureValue inlet_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                             const SeriesConfig& cfg, double t) {
    check_domain(spec, 0.0, t);
    if (cfg.variant == ModelVariant::as_printed) return printed_end(spec, leak, cfg, t, false);
    return reconciled_pressure(spec, leak, cfg, 0.0, t);
}

PressureValue outlet_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                              const SeriesConfig& cfg, double t) {
    check_domain(spec, spec.length, t);
    if (cfg.variant == ModelVariant::as_printed) return printed_end(spec, leak, cfg, t, true);
    return reconciled_pressure(spec, leak, cfg, spec.length, t);
}

}  // namespace gaslines
