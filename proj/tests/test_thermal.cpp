#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ngdr/errors.hpp"
#include "ngdr/thermal.hpp"
#include "ngdr/units.hpp"
#include "support/rng.hpp"

using namespace ngdr;

namespace {

HouseParams reference_house() {
    HouseParams h;
    h.id = "ref";
    h.volume = 500.0;
    h.wall_area = 200.0;
    h.kappa = 0.11;
    h.burn_rate = 6e-5;
    h.theta0 = 290.0;
    h.setpoint = 293.15;
    return h;
}

} // namespace

TEST_CASE("coefficients from the reference house") {
    const PhysicalConstants constants; // ca=718, rho_a=1.2754, eg=4.5938e7
    const auto c = compute_thermal_coefficients(constants, reference_house());
    // alpha = 0.11*200 / (718*1.2754*500), beta = 4.5938e7 / (718*1.2754*500)
    CHECK(c.alpha == doctest::Approx(4.80487e-5).epsilon(1e-4));
    CHECK(c.beta == doctest::Approx(100.33).epsilon(1e-3));
}

TEST_CASE("doubling the volume halves both coefficients") {
    const PhysicalConstants constants;
    auto h = reference_house();
    const auto c1 = compute_thermal_coefficients(constants, h);
    h.volume *= 2.0;
    const auto c2 = compute_thermal_coefficients(constants, h);
    CHECK(c2.alpha == doctest::Approx(c1.alpha / 2.0).epsilon(1e-12));
    CHECK(c2.beta == doctest::Approx(c1.beta / 2.0).epsilon(1e-12));
}

TEST_CASE("non-positive parameters are rejected by name") {
    const PhysicalConstants constants;
    auto h = reference_house();
    h.kappa = 0.0;
    CHECK_THROWS_WITH_AS(compute_thermal_coefficients(constants, h),
                         doctest::Contains("kappa"), ValidationError);
}

TEST_CASE("coefficient formulas invert exactly on random houses") {
    test::Rng rng(7001);
    const PhysicalConstants constants;
    for (int i = 0; i < 200; ++i) {
        HouseParams h = reference_house();
        h.volume = rng.uniform(100.0, 1200.0);
        h.wall_area = rng.uniform(50.0, 400.0);
        h.kappa = rng.uniform(0.05, 0.3);
        const auto c = compute_thermal_coefficients(constants, h);
        const double cap = constants.ca * constants.rho_a * h.volume;
        CHECK(std::abs(c.alpha * cap - h.kappa * h.wall_area) <=
              1e-12 * std::abs(h.kappa * h.wall_area));
        CHECK(std::abs(c.beta * cap - constants.eg) <= 1e-12 * constants.eg);
    }
}

TEST_CASE("ambient interpolation") {
    const AmbientSeries series({{0.0, 270.0}, {3600.0, 272.0}, {7200.0, 270.0}});
    CHECK(series.at(0.0) == 270.0);
    CHECK(series.at(3600.0) == 272.0);
    CHECK(series.at(1800.0) == doctest::Approx(271.0));
    CHECK_THROWS_AS(series.at(-1.0), ValidationError);
    CHECK_THROWS_AS(series.at(7201.0), ValidationError);
}

TEST_CASE("ambient series invariants") {
    CHECK_THROWS_AS(AmbientSeries({{1.0, 270.0}}), ValidationError);    // first offset not 0
    CHECK_THROWS_AS(AmbientSeries({{0.0, 270.0}, {0.0, 271.0}}), ValidationError);
    CHECK_THROWS_AS(AmbientSeries(std::vector<std::pair<double, double>>{}), ValidationError);
}

TEST_CASE("euler step hand value") {
    ThermalCoefficients c{5e-5, 100.0};
    // 290 + 60*(-5e-5*(290-270) + 100*6e-5*1) = 290 + 60*0.005 = 290.3
    CHECK(euler_step(290.0, 270.0, c, 6e-5, 1, 60.0) == doctest::Approx(290.3).epsilon(1e-12));
    CHECK(euler_step(280.0, 280.0, c, 6e-5, 0, 60.0) == 280.0);
    CHECK(euler_step(290.0, 270.0, c, 6e-5, 0, 60.0) < 290.0); // pure cooling
}

TEST_CASE("euler step rejects unstable configurations") {
    ThermalCoefficients c{0.02, 100.0};
    CHECK_THROWS_AS(euler_step(290.0, 270.0, c, 6e-5, 1, 60.0), ConfigError); // alpha*dt = 1.2
    CHECK_THROWS_AS(euler_step(290.0, 270.0, ThermalCoefficients{5e-5, 100.0}, 6e-5, 2, 60.0),
                    ValidationError);
}

TEST_CASE("all-off trajectory decays monotonically toward ambient") {
    const PhysicalConstants constants;
    const auto h = reference_house();
    const auto c = compute_thermal_coefficients(constants, h);
    const Grid grid(60, 180, 3600);
    const AmbientSeries ambient({{0.0, 270.0}, {3600.0, 270.0}});
    const ControlSchedule off(std::vector<std::uint8_t>(grid.num_blocks(), 0));
    const auto traj = simulate_trajectory(h, c, ambient, off, grid);
    CHECK(traj.samples.front() == h.theta0);
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        CHECK(traj.samples[k] < traj.samples[k - 1]);
        CHECK(traj.samples[k] > 270.0);
    }
}

TEST_CASE("trajectory matches the constant-input closed form and converges at O(dt)") {
    const PhysicalConstants constants;
    auto h = reference_house();
    const auto c = compute_thermal_coefficients(constants, h);
    const double theta_amb = 265.0;
    const double horizon = 24.0 * 3600.0;
    const AmbientSeries ambient({{0.0, theta_amb}, {horizon, theta_amb}});
    const double theta_ss = theta_amb + c.beta * h.burn_rate / c.alpha; // q == 1

    auto max_error = [&](std::int64_t dt) {
        const Grid grid(dt, dt, static_cast<std::int64_t>(horizon));
        const ControlSchedule on(std::vector<std::uint8_t>(grid.num_blocks(), 1));
        const auto traj = simulate_trajectory(h, c, ambient, on, grid);
        double worst = 0.0;
        for (std::int64_t k = 0; k <= grid.n; ++k) {
            const double t = static_cast<double>(k * dt);
            const double exact = theta_ss + (h.theta0 - theta_ss) * std::exp(-c.alpha * t);
            worst = std::max(worst, std::abs(traj.samples[static_cast<std::size_t>(k)] - exact));
        }
        return worst;
    };

    const double e120 = max_error(120);
    const double e60 = max_error(60);
    const double e30 = max_error(30);
    const double r1 = e120 / e60;
    const double r2 = e60 / e30;
    CHECK(r1 >= 1.5);
    CHECK(r1 <= 2.5);
    CHECK(r2 >= 1.5);
    CHECK(r2 <= 2.5);
}

TEST_CASE("schedule comparison principle and ambient monotonicity") {
    test::Rng rng(7002);
    const PhysicalConstants constants;
    for (int trial = 0; trial < 50; ++trial) {
        HouseParams h = reference_house();
        h.volume = rng.uniform(150.0, 900.0);
        h.burn_rate = rng.uniform(3e-5, 12e-5);
        const auto c = compute_thermal_coefficients(constants, h);
        const Grid grid(60, 180, 1800);

        std::vector<std::uint8_t> lo_sched(static_cast<std::size_t>(grid.num_blocks()));
        std::vector<std::uint8_t> hi_sched(lo_sched.size());
        for (std::size_t b = 0; b < lo_sched.size(); ++b) {
            lo_sched[b] = rng.flip() ? 1 : 0;
            hi_sched[b] = lo_sched[b] || rng.flip() ? 1 : 0;
        }
        std::vector<std::pair<double, double>> samples{{0.0, rng.uniform(250.0, 280.0)},
                                                       {1800.0, rng.uniform(250.0, 280.0)}};
        const AmbientSeries amb(samples);
        std::vector<std::pair<double, double>> warmer = samples;
        for (auto& [t, v] : warmer) v += rng.uniform(0.0, 5.0);
        const AmbientSeries amb_hi(warmer);

        const auto base = simulate_trajectory(h, c, amb, ControlSchedule(lo_sched), grid);
        const auto more_heat = simulate_trajectory(h, c, amb, ControlSchedule(hi_sched), grid);
        const auto warmer_out = simulate_trajectory(h, c, amb_hi, ControlSchedule(lo_sched), grid);
        for (std::size_t k = 0; k < base.samples.size(); ++k) {
            CHECK(more_heat.samples[k] >= base.samples[k]);
            CHECK(warmer_out.samples[k] >= base.samples[k]);
        }
    }
}

TEST_CASE("simulation is deterministic") {
    const PhysicalConstants constants;
    const auto h = reference_house();
    const auto c = compute_thermal_coefficients(constants, h);
    const Grid grid(60, 180, 7200);
    const AmbientSeries ambient({{0.0, 260.0}, {3600.0, 255.0}, {7200.0, 262.0}});
    std::vector<std::uint8_t> v(static_cast<std::size_t>(grid.num_blocks()));
    for (std::size_t b = 0; b < v.size(); ++b) v[b] = b % 2;
    const ControlSchedule sched(v);
    const auto a = simulate_trajectory(h, c, ambient, sched, grid);
    const auto b = simulate_trajectory(h, c, ambient, sched, grid);
    CHECK(a.samples == b.samples);
}

TEST_CASE("zero-length horizon is rejected at grid construction") {
    CHECK_THROWS_AS(Grid(60, 180, 0), ConfigError);
    CHECK_THROWS_AS(Grid(60, 170, 1800), ConfigError);  // control not multiple of state
    CHECK_THROWS_AS(Grid(60, 180, 1000), ConfigError);  // horizon not multiple of control
}

TEST_CASE("unit conversions") {
    CHECK(fahrenheit_to_kelvin(32.0) == doctest::Approx(273.15));
    CHECK(fahrenheit_to_kelvin(212.0) == doctest::Approx(373.15));
    CHECK(kelvin_dev_to_fahrenheit_dev(1.0) == doctest::Approx(1.8));
    CHECK(kelvin_to_fahrenheit(fahrenheit_to_kelvin(68.0)) == doctest::Approx(68.0));
}

TEST_CASE("schedule and grid shape mismatches are rejected") {
    const PhysicalConstants constants;
    const auto h = reference_house();
    const auto c = compute_thermal_coefficients(constants, h);
    const Grid grid(60, 180, 3600);
    const AmbientSeries ambient({{0.0, 270.0}, {3600.0, 270.0}});
    const ControlSchedule wrong(std::vector<std::uint8_t>(3, 0)); // grid has 20 blocks
    CHECK_THROWS_AS(simulate_trajectory(h, c, ambient, wrong, grid), ShapeError);
    CHECK_THROWS_AS(ControlSchedule(std::vector<std::uint8_t>{0, 2}), ValidationError);
}
