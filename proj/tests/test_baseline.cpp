#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ngdr/baseline.hpp"
#include "ngdr/errors.hpp"
#include "ngdr/units.hpp"
#include "support/rng.hpp"

using namespace ngdr;

namespace {

HouseParams make_house(const std::string& id, double burn_rate, double theta0_f,
                       double setpoint_f) {
    HouseParams h;
    h.id = id;
    h.volume = 400.0;
    h.wall_area = 180.0;
    h.kappa = 0.11;
    h.burn_rate = burn_rate;
    h.theta0 = fahrenheit_to_kelvin(theta0_f);
    h.setpoint = fahrenheit_to_kelvin(setpoint_f);
    return h;
}

} // namespace

TEST_CASE("threshold control with H(0)=0") {
    CHECK(baseline_control(289.0, 293.0) == 1);
    CHECK(baseline_control(295.0, 293.0) == 0);
    CHECK(baseline_control(293.0, 293.0) == 0); // off exactly at set-point
}

TEST_CASE("equilibrium house never fires") {
    const PhysicalConstants constants;
    const auto h = make_house("eq", 6e-5, 68.0, 68.0);
    const Grid grid(60, 180, 3600);
    const AmbientSeries ambient({{0.0, h.setpoint}, {3600.0, h.setpoint}});
    const auto runs = simulate_baseline({h}, constants, ambient, grid);
    REQUIRE(runs.size() == 1);
    for (auto q : runs[0].schedule.values) CHECK(q == 0);
    for (double theta : runs[0].trajectory.samples) CHECK(theta == h.theta0);
}

TEST_CASE("cold start fires until the set-point is reached") {
    const PhysicalConstants constants;
    const auto h = make_house("cold", 9e-5, 55.0, 70.0);
    const Grid grid(60, 180, 4 * 3600);
    const AmbientSeries ambient({{0.0, fahrenheit_to_kelvin(-10.0)},
                                 {4.0 * 3600.0, fahrenheit_to_kelvin(-10.0)}});
    const auto runs = simulate_baseline({h}, constants, ambient, grid);
    const auto& run = runs[0];

    // q stays on for every block whose starting temperature is below the
    // set-point, and the first crossing happens while q is on.
    bool crossed = false;
    for (std::int64_t b = 0; b < grid.num_blocks(); ++b) {
        const double theta_at_decision =
            run.trajectory.samples[static_cast<std::size_t>(b * grid.steps_per_block())];
        CHECK(run.schedule.values[static_cast<std::size_t>(b)] ==
              (theta_at_decision < h.setpoint ? 1 : 0));
        if (theta_at_decision >= h.setpoint) crossed = true;
    }
    CHECK(crossed);
    CHECK(run.schedule.values[0] == 1);
}

TEST_CASE("baseline trajectories stay inside the closed-loop band after first crossing") {
    test::Rng rng(9100);
    const PhysicalConstants constants;
    for (int trial = 0; trial < 20; ++trial) {
        auto h = make_house("band", rng.uniform(5e-5, 12e-5), rng.uniform(64.0, 72.0),
                            rng.uniform(66.0, 71.0));
        const auto c = compute_thermal_coefficients(constants, h);
        const Grid grid(60, 180, 12 * 3600);
        const double amb_f = rng.uniform(-20.0, 40.0);
        const AmbientSeries ambient(
            {{0.0, fahrenheit_to_kelvin(amb_f)}, {12.0 * 3600.0, fahrenheit_to_kelvin(amb_f)}});
        if (fahrenheit_to_kelvin(amb_f) >= h.setpoint) continue; // needs heating demand

        const auto run = simulate_baseline({h}, constants, ambient, grid)[0];
        const double dtc = static_cast<double>(grid.dt_control);
        const double c_up = dtc * c.beta * h.burn_rate;
        const double c_down = dtc * c.alpha * (h.setpoint - fahrenheit_to_kelvin(amb_f));

        std::size_t first_cross = run.trajectory.samples.size();
        for (std::size_t k = 0; k < run.trajectory.samples.size(); ++k) {
            if (run.trajectory.samples[k] >= h.setpoint) {
                first_cross = k;
                break;
            }
        }
        if (h.theta0 >= h.setpoint) first_cross = 0;
        for (std::size_t k = first_cross; k < run.trajectory.samples.size(); ++k) {
            CHECK(run.trajectory.samples[k] >= h.setpoint - c_down - 1e-9);
            CHECK(run.trajectory.samples[k] <= h.setpoint + c_up + 1e-9);
        }
    }
}

TEST_CASE("fleet baseline equals independent single-house runs") {
    const PhysicalConstants constants;
    const auto h1 = make_house("a", 5e-5, 60.0, 68.0);
    const auto h2 = make_house("b", 8e-5, 71.0, 70.0);
    const Grid grid(60, 180, 7200);
    const AmbientSeries ambient({{0.0, 265.0}, {7200.0, 268.0}});

    const auto joint = simulate_baseline({h1, h2}, constants, ambient, grid);
    const auto solo1 = simulate_baseline({h1}, constants, ambient, grid);
    const auto solo2 = simulate_baseline({h2}, constants, ambient, grid);
    CHECK(joint[0].trajectory.samples == solo1[0].trajectory.samples);
    CHECK(joint[1].trajectory.samples == solo2[0].trajectory.samples);
    CHECK(joint[0].schedule.values == solo1[0].schedule.values);
    CHECK(joint[1].schedule.values == solo2[0].schedule.values);
}

TEST_CASE("aggregate demand sums burn rates per state instant") {
    const auto h1 = make_house("a", 3e-5, 68.0, 68.0);
    const auto h2 = make_house("b", 6e-5, 68.0, 68.0);
    const Grid grid(60, 120, 240);

    ControlSchedule both_on(std::vector<std::uint8_t>{1, 1});
    ControlSchedule one_on(std::vector<std::uint8_t>{1, 0});
    const auto demand = aggregate_demand({h1, h2}, {both_on, one_on}, grid);
    REQUIRE(demand.samples.size() == 4);
    CHECK(demand.samples[0] == doctest::Approx(9e-5));
    CHECK(demand.samples[1] == doctest::Approx(9e-5));
    CHECK(demand.samples[2] == doctest::Approx(3e-5)); // second block: only h1
    CHECK(demand.samples[3] == doctest::Approx(3e-5));

    const auto none = aggregate_demand({h1, h2},
                                       {ControlSchedule(std::vector<std::uint8_t>{0, 0}),
                                        ControlSchedule(std::vector<std::uint8_t>{0, 0})},
                                       grid);
    for (double s : none.samples) CHECK(s == 0.0);

    CHECK_THROWS_AS(aggregate_demand({h1, h2}, {both_on}, grid), ShapeError);
}

TEST_CASE("aggregate demand is permutation invariant") {
    test::Rng rng(9101);
    const Grid grid(60, 180, 1800);
    std::vector<HouseParams> fleet;
    std::vector<ControlSchedule> schedules;
    for (int i = 0; i < 6; ++i) {
        fleet.push_back(make_house("h" + std::to_string(i), rng.uniform(3e-5, 12e-5), 68.0, 68.0));
        std::vector<std::uint8_t> v(static_cast<std::size_t>(grid.num_blocks()));
        for (auto& q : v) q = rng.flip() ? 1 : 0;
        schedules.emplace_back(v);
    }
    const auto d1 = aggregate_demand(fleet, schedules, grid);
    std::vector<std::size_t> perm{5, 3, 0, 4, 1, 2};
    std::vector<HouseParams> fleet2;
    std::vector<ControlSchedule> schedules2;
    for (auto i : perm) {
        fleet2.push_back(fleet[i]);
        schedules2.push_back(schedules[i]);
    }
    const auto d2 = aggregate_demand(fleet2, schedules2, grid);
    for (std::size_t k = 0; k < d1.samples.size(); ++k)
        CHECK(d1.samples[k] == doctest::Approx(d2.samples[k]).epsilon(1e-14));
}

TEST_CASE("peak demand") {
    CHECK(peak_demand(AggregateDemand{{1e-4, 3e-4, 2e-4}}) == 3e-4);
    CHECK(peak_demand(AggregateDemand{{5e-5, 5e-5}}) == 5e-5);
    CHECK(peak_demand(AggregateDemand{{7e-5}}) == 7e-5);
    CHECK_THROWS_AS(peak_demand(AggregateDemand{}), ValidationError);

    AggregateDemand d{{1.0, 4.0, 2.0, 4.0}};
    const double p = peak_demand(d);
    for (double s : d.samples) CHECK(p >= s);
    CHECK(std::count(d.samples.begin(), d.samples.end(), p) >= 1);
}
