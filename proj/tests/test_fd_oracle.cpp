#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gaslines/fd_oracle.hpp"
#include "published_tables.hpp"

using namespace gaslines;
using testdata::pipeline_a;
using testdata::pipeline_b;

TEST_CASE("no leak flux leaves the steady profile untouched") {
    const auto spec = pipeline_a();
    const LeakScenario dry{0.5e4, 0.0};
    const FdField f = fd_solve(spec, dry, make_grid(spec, 200, 300.0), {100.0, 300.0});
    REQUIRE(f.times.size() == 3);
    for (std::size_t k = 0; k < f.times.size(); ++k) {
        for (Eigen::Index i = 0; i < f.x.size(); ++i) {
            CHECK(f.pressure[k](i) == spec.p_inlet_0 - spec.two_a * spec.g0 * f.x(i));
        }
    }
    const OracleReport rep = compare_with_series(spec, dry, make_grid(spec, 200, 300.0), SeriesConfig{}, {300.0});
    CHECK(rep.max_abs == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("initial slice is the steady profile and the inlet drop matches the table") {
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    const FdField f = fd_solve(spec, leak, make_grid(spec, 500, 100.0), {100.0});
    CHECK(f.times.front() == 0.0);
    CHECK(f.pressure.front()(0) == spec.p_inlet_0);
    // 55 - 52.23 (x 10^4 Pa), table rounding plus discretization.
    const double u0 = f.pressure.back()(0) - spec.p_inlet_0;
    CHECK(std::abs(u0 - (-2.77e4)) <= 200.0);
}

TEST_CASE("total content drains linearly") {
    for (const auto& spec : {pipeline_a(), pipeline_b()}) {
        const auto leak = leak_at(spec, 0.37 * spec.length);
        const FdField f = fd_solve(spec, leak, make_grid(spec, 300, 300.0), {60.0, 300.0});
        const Eigen::ArrayXd steady = spec.p_inlet_0 - spec.two_a * spec.g0 * f.x;
        for (std::size_t k = 1; k < f.times.size(); ++k) {
            const double expected = -spec.sound_speed * spec.sound_speed * leak.g_leak / spec.length * f.times[k];
            const double mean = spatial_mean(f.pressure[k] - steady);
            CHECK(mean == doctest::Approx(expected).epsilon(5e-3));
            // Lumped sink is exactly conservative.
            CHECK(mean == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("grid validation") {
    const auto spec = pipeline_a();
    const double limit = stable_time_step(spec, 100, 1.0);
    CHECK(stable_time_step(spec, 100) == doctest::Approx(kFdSafety * limit));
    CHECK_NOTHROW((FdGrid{100, limit, 10.0}.validate(spec)));
    CHECK_THROWS_AS((FdGrid{100, 1.01 * limit, 10.0}.validate(spec)), std::invalid_argument);
    CHECK_THROWS_AS((FdGrid{1, 1e-3, 10.0}.validate(spec)), std::invalid_argument);
    CHECK_THROWS_AS(stable_time_step(spec, 100, 1.5), std::invalid_argument);
}

TEST_CASE("series and FD agree; error shrinks under refinement") {
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    const std::vector<double> times{100.0, 200.0, 300.0};
    double previous = 0.0;
    for (int nx : {100, 200, 400}) {  // leak on a node
        const OracleReport rep = compare_with_series(spec, leak, make_grid(spec, nx, 300.0), SeriesConfig{}, times);
        CHECK(rep.pass);
        CHECK(rep.max_rel <= 1e-3);
        if (previous > 0.0) CHECK(rep.max_abs < previous / 3.0);
        previous = rep.max_abs;
    }
}

TEST_CASE("report exposes the as-printed inlet offset") {
    const auto spec = pipeline_a();
    const auto leak = leak_at(spec, 0.5e4);
    SeriesConfig printed;
    printed.variant = ModelVariant::as_printed;
    const OracleReport rep = compare_with_series(spec, leak, make_grid(spec, 200, 0.5), printed, {0.5});
    const double a_l_g0 = 0.5 * spec.two_a * spec.length * spec.g0;
    CHECK(rep.inlet_offset_first == doctest::Approx(a_l_g0).epsilon(0.05));
    CHECK_FALSE(rep.pass);
}

TEST_CASE("mismatched domains are rejected") {
    const auto spec = pipeline_b();
    const auto leak = leak_at(spec, 1e4);
    const FdGrid grid = make_grid(spec, 100, 60.0);
    CHECK_THROWS_AS(compare_with_series(spec, leak, grid, SeriesConfig{}, {120.0}), std::invalid_argument);
    CHECK_THROWS_AS(compare_with_series(spec, leak, grid, SeriesConfig{}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(compare_with_series(spec, leak, grid, SeriesConfig{}, {}), std::invalid_argument);
    CHECK_THROWS_AS(fd_solve(spec, LeakScenario{4e4, 10.0}, grid, {10.0}), std::invalid_argument);
}
