#pragma once

// Analytical transient pressure field of a ruptured line in a two-line
// parallel gas pipeline (Charney-linearized gas dynamics).
//
// Pressure deviation from the stationary profile obeys
//     u_t = (c^2 / 2a) u_xx - c^2 G_leak delta(x - ell2)
// with zero-flux ends. Its solution is a Neumann Green's-function term plus a
// decaying cosine series; see transient_pressure().

#include <string>

namespace gaslines {

inline constexpr double kPi = 3.14159265358979323846;

/// Static description of one pipeline line. All pressures in Pa.
struct PipelineSpec {
    double p_inlet_0 = 0.0;   ///< stationary inlet pressure P1 (Pa)
    double p_outlet_0 = 0.0;  ///< stationary outlet pressure P2 (Pa)
    double length = 0.0;      ///< L (m)
    double g0 = 0.0;          ///< stationary linearized mass flux (Pa*s/m)
    double sound_speed = 0.0; ///< c (m/s)
    double two_a = 0.0;       ///< linearization coefficient 2a (1/s)

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    /// Diffusivity c^2/(2a) of the deviation field (m^2/s).
    double diffusivity() const { return sound_speed * sound_speed / two_a; }
};

struct LeakScenario {
    double ell2 = 0.0;    ///< leak coordinate measured from the inlet (m)
    double g_leak = 0.0;  ///< leak mass flux (Pa*s/m)

    void validate(const PipelineSpec& spec) const;
};

/// Leak scenario with the flux defaulted to the stationary G0.
LeakScenario leak_at(const PipelineSpec& spec, double ell2);

enum class ModelVariant { reconciled, as_printed };

std::string to_string(ModelVariant v);
ModelVariant parse_variant(const std::string& text);

struct SeriesConfig {
    int n_max = 64;
    double tail_tol = 1.0;  ///< Pa
    ModelVariant variant = ModelVariant::reconciled;
    /// Series-validity floor as a fraction of the slowest mode time 1/alpha.
    double floor_fraction = 1e-3;

    void validate() const;
};

/// Pressure with its truncation diagnostics.
struct PressureValue {
    double pressure = 0.0;    ///< Pa
    double tail_bound = 0.0;  ///< bound on the neglected series remainder (Pa)
    bool degraded = false;    ///< tail_bound exceeded SeriesConfig::tail_tol
};

/// Base modal decay rate pi^2 c^2 / (2a L^2), 1/s.
double alpha(const PipelineSpec& spec);

/// Stationary profile P1 - 2a G0 x.
double steady_pressure(const PipelineSpec& spec, double x);

/// Neumann Green's kernel on [0, L]:
///   H(x, xi) = (x^2 + xi^2) / (2L) + L/3 - max(x, xi)
/// Symmetric, zero mean in x, and H_xx = 1/L - delta(x - xi).
double green_neumann(double x, double xi, double length);

/// Time below which the cosine series is replaced by the image-sum form.
double series_validity_floor(const PipelineSpec& spec, const SeriesConfig& cfg);

/// Upper bound of sum_{n > n_max} exp(-n^2 rate t) / n^2.
double cosine_tail_bound(int n_max, double rate_times_t);

PressureValue transient_pressure(const PipelineSpec& spec,
                                 const LeakScenario& leak,
                                 const SeriesConfig& cfg, double x, double t);

/// Inlet (x = 0) pressure of the damaged line.
PressureValue inlet_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                             const SeriesConfig& cfg, double t);

/// Outlet (x = L) pressure of the damaged line.
PressureValue outlet_pressure(const PipelineSpec& spec, const LeakScenario& leak,
                              const SeriesConfig& cfg, double t);

}  // namespace gaslines
