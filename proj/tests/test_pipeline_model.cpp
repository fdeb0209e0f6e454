#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gaslines/pipeline_model.hpp"
#include "published_tables.hpp"

using namespace gaslines;
using testdata::pipeline_a;
using testdata::pipeline_b;

namespace {

// Composite Simpson on [a, b]; exact for piecewise quadratics split at the kink.
template <typename F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2 == 1) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("alpha matches direct evaluation for both reference pipelines") {
    // pi^2 * 383.3^2 / (0.1 * L^2), evaluated independently.
    CHECK(alpha(pipeline_a()) == doctest::Approx(1.4500313e-3).epsilon(1e-6));
    CHECK(alpha(pipeline_b()) == doctest::Approx(1.6111459e-2).epsilon(1e-6));

    PipelineSpec longer = pipeline_a();
    longer.length *= 2.0;
    CHECK(alpha(longer) == doctest::Approx(alpha(pipeline_a()) / 4.0));
}

TEST_CASE("steady profile") {
    CHECK(steady_pressure(pipeline_a(), 0.0) == 55e4);
    CHECK(steady_pressure(pipeline_a(), 1e5) == doctest::Approx(25e4));
    CHECK(steady_pressure(pipeline_b(), 3e4) == doctest::Approx(11e4));
    CHECK_THROWS_AS(steady_pressure(pipeline_a(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(steady_pressure(pipeline_a(), 1e5 + 1.0), std::invalid_argument);
}

TEST_CASE("spec validation rejects inconsistent or non-physical input") {
    CHECK_NOTHROW(pipeline_a().validate());
    PipelineSpec s = pipeline_a();
    s.p_outlet_0 = 60e4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = pipeline_a();
    s.two_a = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = pipeline_a();
    s.p_outlet_0 = 26e4;  // off the steady profile
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    CHECK_THROWS_AS((LeakScenario{0.0, 30.0}.validate(pipeline_a())), std::invalid_argument);
    CHECK_THROWS_AS((LeakScenario{1e5, 30.0}.validate(pipeline_a())), std::invalid_argument);
    CHECK_THROWS_AS((LeakScenario{5e3, -1.0}.validate(pipeline_a())), std::invalid_argument);
    CHECK_THROWS_AS((SeriesConfig{0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("Neumann kernel: value, symmetry, zero mean") {
    // 25e6 / 2e5 + 1e5 / 3 - 5000
    CHECK(green_neumann(0.0, 0.5e4, 1e5) == doctest::Approx(28458.3333333).epsilon(1e-10));
    CHECK_THROWS_AS(green_neumann(-1.0, 0.5e4, 1e5), std::invalid_argument);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1e5);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        const double xi = u(rng);
        CHECK(green_neumann(x, xi, 1e5) == doctest::Approx(green_neumann(xi, x, 1e5)));
    }
    for (int i = 0; i < 20; ++i) {
        const double xi = u(rng);
        auto h = [xi](double x) { return green_neumann(x, xi, 1e5); };
        const double integral = simpson(h, 0.0, xi, 8) + simpson(h, xi, 1e5, 8);
        CHECK(std::abs(integral) < 1e-3);  // m^2, against values of order 1e9
    }
}

TEST_CASE("transient pressure reproduces tabulated points") {
    const SeriesConfig cfg;
    const auto a_start = leak_at(pipeline_a(), 0.5e4);
    CHECK(std::abs(inlet_pressure(pipeline_a(), a_start, cfg, 100).pressure - 52.23e4) <= 200.0);
    CHECK(std::abs(outlet_pressure(pipeline_a(), a_start, cfg, 100).pressure - 25.00e4) <= 200.0);
    CHECK(std::abs(transient_pressure(pipeline_a(), a_start, cfg, 0.0, 100).pressure - 52.23e4) <= 200.0);

    const auto a_end = leak_at(pipeline_a(), 9.5e4);
    CHECK(std::abs(outlet_pressure(pipeline_a(), a_end, cfg, 300).pressure - 19.30e4) <= 200.0);

    const auto b_mid = leak_at(pipeline_b(), 1.5e4);
    CHECK(std::abs(transient_pressure(pipeline_b(), b_mid, cfg, 0.0, 120).pressure - 13.54e4) <= 200.0);
    const auto b_end = leak_at(pipeline_b(), 2.5e4);
    CHECK(std::abs(inlet_pressure(pipeline_b(), b_end, cfg, 60).pressure - 13.97e4) <= 200.0);
}

TEST_CASE("t = 0 returns the steady profile") {
    const SeriesConfig cfg;
    for (const auto& spec : {pipeline_a(), pipeline_b()}) {
        for (double theta : {0.05, 0.3, 0.5, 0.95}) {
            const auto leak = leak_at(spec, theta * spec.length);
            for (int i = 0; i <= 20; ++i) {
                const double x = spec.length * i / 20.0;
                const PressureValue v = transient_pressure(spec, leak, cfg, x, 0.0);
                CHECK(std::abs(v.pressure - steady_pressure(spec, x)) <= cfg.tail_tol);
                CHECK_FALSE(v.degraded);
            }
        }
    }
}

TEST_CASE("image-sum short-time form agrees with the cosine series") {
    // Raising the floor forces the image form where the series is also converged.
    SeriesConfig images;
    images.floor_fraction = 1.0;
    const SeriesConfig series;
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    for (double t : {20.0, 100.0, 300.0}) {
        REQUIRE(t < series_validity_floor(spec, images));
        for (double x : {0.0, 2e3, 5e3, 3e4, 1e5}) {
            const double a = transient_pressure(spec, leak, images, x, t).pressure;
            const double b = transient_pressure(spec, leak, series, x, t).pressure;
            CHECK(std::abs(a - b) <= 1.0);
        }
    }
    // Continuity across the default floor.
    const double t_floor = series_validity_floor(spec, series);
    const double below = transient_pressure(spec, leak, series, 5e3, t_floor * (1 - 1e-9)).pressure;
    const auto above = transient_pressure(spec, leak, series, 5e3, t_floor * (1 + 1e-9));
    CHECK(std::abs(below - above.pressure) <= above.tail_bound + 1e-6);
}

TEST_CASE("spatial mean of the deviation drains at c^2 G / L") {
    const SeriesConfig cfg;
    for (const auto& spec : {pipeline_a(), pipeline_b()}) {
        const auto leak = leak_at(spec, 0.3 * spec.length);
        for (double t : {60.0, 300.0, 900.0}) {
            auto dev = [&](double x) {
                return transient_pressure(spec, leak, cfg, x, t).pressure - steady_pressure(spec, x);
            };
            const double mean =
                (simpson(dev, 0.0, leak.ell2, 600) + simpson(dev, leak.ell2, spec.length, 1400)) / spec.length;
            const double expected = -spec.sound_speed * spec.sound_speed * leak.g_leak / spec.length * t;
            CHECK(mean == doctest::Approx(expected).epsilon(5e-3));
        }
    }
}

TEST_CASE("pressure is continuous at the leak") {
    const SeriesConfig cfg;
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 3.7e4);
    for (double t : {50.0, 300.0, 900.0}) {
        const double left = transient_pressure(spec, leak, cfg, leak.ell2 - 1e-6, t).pressure;
        const double right = transient_pressure(spec, leak, cfg, leak.ell2 + 1e-6, t).pressure;
        CHECK(std::abs(left - right) <= cfg.tail_tol);
    }
}

TEST_CASE("mirror symmetry between inlet and outlet deviations") {
    const SeriesConfig cfg;
    for (const auto& spec : {pipeline_a(), pipeline_b()}) {
        for (double theta : {0.05, 0.2, 0.45}) {
            const auto near = leak_at(spec, theta * spec.length);
            const auto far = leak_at(spec, (1.0 - theta) * spec.length);
            for (double t = 30.0; t <= 900.0; t += 90.0) {
                const double in_dev = spec.p_inlet_0 - inlet_pressure(spec, near, cfg, t).pressure;
                const double out_dev = spec.p_outlet_0 - outlet_pressure(spec, far, cfg, t).pressure;
                CHECK(in_dev == doctest::Approx(out_dev).epsilon(1e-9).scale(1e3));
            }
        }
    }
}

TEST_CASE("truncation changes stay within the analytic tail bound") {
    const auto spec = pipeline_b();
    const auto leak = leak_at(spec, 0.7e4);
    for (int n : {2, 4, 8, 16}) {
        SeriesConfig coarse;
        coarse.n_max = n;
        SeriesConfig fine;
        fine.n_max = 400;
        for (double t : {1.0, 10.0, 60.0}) {
            for (double x : {0.0, 1e4, 3e4}) {
                const PressureValue c = transient_pressure(spec, leak, coarse, x, t);
                const double f = transient_pressure(spec, leak, fine, x, t).pressure;
                CHECK(std::abs(c.pressure - f) <= c.tail_bound + 1e-6);
            }
        }
    }
    CHECK(cosine_tail_bound(10, 0.0) == doctest::Approx(0.1));
    CHECK(cosine_tail_bound(10, 1.0) < 1e-40);
}

TEST_CASE("degraded precision is flagged when the tail exceeds tail_tol") {
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    SeriesConfig cfg;
    cfg.n_max = 3;
    CHECK(transient_pressure(spec, leak, cfg, 0.0, 5.0).degraded);
    CHECK_FALSE(transient_pressure(spec, leak, SeriesConfig{}, 0.0, 100.0).degraded);
    CHECK_THROWS_AS(transient_pressure(spec, leak, SeriesConfig{}, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(transient_pressure(spec, leak, SeriesConfig{}, 2e5, 1.0), std::invalid_argument);
}

TEST_CASE("as-printed variant keeps the published discrepancies") {
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    SeriesConfig printed;
    printed.variant = ModelVariant::as_printed;
    // G0-weighted series at the inlet contributes a * L * G0 as t -> 0.
    const double offset_scale = 0.5 * spec.two_a * spec.length * spec.g0;
    const double inlet_offset = inlet_pressure(spec, leak, printed, 0.5).pressure - spec.p_inlet_0;
    CHECK(inlet_offset == doctest::Approx(offset_scale).epsilon(0.05));
    // Downstream of the leak the printed sign departs from the tabulated outlet.
    const double outlet = transient_pressure(spec, leak, printed, spec.length, 100.0).pressure;
    CHECK(std::abs(outlet - 25.00e4) > 1e4);
    CHECK(parse_variant("as_printed") == ModelVariant::as_printed);
    CHECK_THROWS_AS(parse_variant("printed"), std::invalid_argument);
}
