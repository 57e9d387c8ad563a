#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "altro/fire.hpp"
#include "altro/rng.hpp"
#include "oracles.hpp"

using namespace altro;
using namespace altro::testing;

namespace {

TeamRegion square_region(double side, int res) {
    TeamRegion reg;
    reg.origin = {0.0, 0.0};
    reg.width = side;
    reg.height = side;
    reg.grid_resolution = res;
    return reg;
}

DensityField uniform_density(const TeamRegion& reg, double value) {
    DensityField d;
    d.resolution = reg.grid_resolution;
    d.cell_area = reg.cell_area();
    d.values.assign(reg.num_cells(), value);
    return d;
}

}  // namespace

TEST_CASE("lloyd: one sensor on a uniform square sits at the center") {
    const auto reg = square_region(4.0, 16);
    const auto d = uniform_density(reg, 1.0);
    const auto res = lloyd_cvt(reg, d, 1, CoverageConfig{}, 11);
    CHECK(res.converged);
    CHECK(res.positions[0].x == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(res.positions[0].y == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("lloyd: all mass in one cell pulls the sensor onto it") {
    const auto reg = square_region(4.0, 16);
    auto d = uniform_density(reg, 0.0);
    const int cell = 5 * 16 + 9;
    d.values[cell] = 3.0;
    const auto res = lloyd_cvt(reg, d, 1, CoverageConfig{}, 3);
    const Vec2 target = reg.cell_center(cell);
    CHECK(res.positions[0].x == doctest::Approx(target.x).epsilon(1e-9));
    CHECK(res.positions[0].y == doctest::Approx(target.y).epsilon(1e-9));
}

TEST_CASE("lloyd: two sensors split a 2:1 rectangle at the quarter points") {
    TeamRegion reg;
    reg.origin = {0.0, 0.0};
    reg.width = 4.0;
    reg.height = 2.0;
    reg.grid_resolution = 16;
    const auto d = uniform_density(reg, 1.0);
    const auto res = lloyd_cvt(reg, d, 2, CoverageConfig{}, 5);

    // Reference: exhaustive best pair of cell centers.
    double brute = std::numeric_limits<double>::infinity();
    for (int a = 0; a < reg.num_cells(); ++a)
        for (int b = a + 1; b < reg.num_cells(); ++b) {
            const double c =
                locational_cost({reg.cell_center(a), reg.cell_center(b)}, reg, d);
            brute = std::min(brute, c);
        }
    CHECK(res.final_cost <= brute + 1e-9);

    auto p = res.positions;
    if (p[0].x > p[1].x) std::swap(p[0], p[1]);
    CHECK(p[0].x == doctest::Approx(1.0).epsilon(0.05));
    CHECK(p[0].y == doctest::Approx(1.0).epsilon(0.05));
    CHECK(p[1].x == doctest::Approx(3.0).epsilon(0.05));
    CHECK(p[1].y == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("lloyd: zero density falls back to uniform") {
    const auto reg = square_region(4.0, 8);
    const auto d = uniform_density(reg, 0.0);
    const auto res = lloyd_cvt(reg, d, 1, CoverageConfig{}, 1);
    CHECK(res.positions[0].x == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("lloyd never increases the locational cost") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto reg = square_region(4.0, 16);
        auto d = sample_density_blobs(reg, rng);
        for (int n = 1; n <= 4; ++n) {
            const auto res = lloyd_cvt(reg, d, n, CoverageConfig{}, 100 + trial);
            CHECK(res.final_cost <= res.initial_cost + 1e-12);
        }
    }
}

TEST_CASE("locational cost") {
    CHECK(locational_cost({}, square_region(4.0, 4), uniform_density(square_region(4.0, 4), 1.0)) == 0.0);

    TeamRegion one;
    one.origin = {2.5, 3.5};
    one.width = 1.0;
    one.height = 1.0;
    one.grid_resolution = 1;
    DensityField d;
    d.resolution = 1;
    d.cell_area = one.cell_area();
    d.values = {2.0};
    CHECK(locational_cost({{3.0, 4.0}}, one, d) == 0.0);
    CHECK(locational_cost({{0.0, 0.0}}, one, d) == doctest::Approx(50.0));
}

TEST_CASE("sensing effectiveness") {
    const CoverageConfig cfg;  // a = 1, b = 0
    CHECK(sensing_effectiveness(0, 123.0, cfg) == 0.0);
    CHECK(sensing_effectiveness(1, 1e12, cfg) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sensing_effectiveness(2, 1.0, cfg) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
    CHECK(sensing_effectiveness(1, 0.0, cfg) == 1.0);

    // In [0, 1] and non-increasing in L for fixed n >= 1.
    double prev = 1.0;
    for (double l = 0.0; l < 50.0; l += 0.5) {
        const double psi = sensing_effectiveness(1, l, cfg);
        CHECK(psi >= 0.0);
        CHECK(psi <= 1.0);
        CHECK(psi <= prev + 1e-15);
        prev = psi;
    }
}

TEST_CASE("fire power sums fighter capacities only") {
    std::vector<Robot> robots{make_sensing_robot(0, 1.0),
                              make_fighting_robot(1, 1.0, 1.5),
                              make_fighting_robot(2, 1.0, 2.5)};
    CHECK(fire_power({0}, robots) == 0.0);
    CHECK(fire_power({1, 2}, robots) == 4.0);
    CHECK(fire_power({0, 1, 2}, robots) == 4.0);
}

TEST_CASE("density decay") {
    const auto reg = square_region(4.0, 8);
    const auto d = uniform_density(reg, 1.0);
    const FireDynamicsConfig cfg;  // eta = 1, dt = 1

    CHECK(decay_density(d, 0.0, 0.7, cfg).values == d.values);
    CHECK(decay_density(d, 0.7, 0.0, cfg).values == d.values);

    const auto decayed = decay_density(d, 1.0, 1.0, cfg);
    for (double v : decayed.values) CHECK(v == doctest::Approx(std::exp(-1.0)));

    // Never increases a cell.
    Rng rng(4);
    auto blob = sample_density_blobs(reg, rng);
    const auto out = decay_density(blob, rng.uniform(0.0, 3.0), rng.uniform(0.0, 1.0), cfg);
    for (size_t i = 0; i < out.values.size(); ++i) CHECK(out.values[i] <= blob.values[i]);
}

TEST_CASE("mission value") {
    Instance inst = two_team_fire_instance();

    SUBCASE("zero field gives zero value") {
        for (auto& d : inst.density) std::fill(d.values.begin(), d.values.end(), 0.0);
        FireMissionState state = inst.make_fire_state();
        CHECK(state.mission_value(0, {0, 2}, inst.robots) == 0.0);
    }

    SUBCASE("no fighters means no suppression") {
        FireMissionState state = inst.make_fire_state();
        CHECK(state.mission_value(1, {1}, inst.robots) ==
              doctest::Approx(-state.total_fire(1)));
    }

    SUBCASE("an extra identical fighter strictly helps") {
        FireMissionState state = inst.make_fire_state();
        const double one = state.mission_value(0, {0, 2}, inst.robots);
        const double two = state.mission_value(0, {0, 2, 3}, inst.robots);
        CHECK(two > one);
    }

    SUBCASE("purely functional: value calls do not disturb the dynamics") {
        FireMissionState a = inst.make_fire_state();
        FireMissionState b = inst.make_fire_state();
        for (int k = 0; k < 50; ++k) b.mission_value(0, {0, 2, 3}, inst.robots);
        a.advance(inst.assignment, inst.robots);
        b.advance(inst.assignment, inst.robots);
        CHECK(a.density(0).values == b.density(0).values);
        CHECK(a.density(1).values == b.density(1).values);
    }
}

TEST_CASE("advance: no fighters leaves the field unchanged") {
    Instance inst = two_team_fire_instance();
    inst.robots = {make_sensing_robot(0, 1.0), make_sensing_robot(1, 1.0)};
    inst.assignment.team_of = {0, 1};
    FireMissionState state = inst.make_fire_state();
    const auto before0 = state.density(0).values;
    state.advance(inst.assignment, inst.robots);
    CHECK(state.density(0).values == before0);
}

TEST_CASE("advance: total fire is non-increasing step over step") {
    const Instance inst = two_team_fire_instance();
    FireMissionState state = inst.make_fire_state();
    double prev = state.total_fire();
    for (int k = 0; k < 10; ++k) {
        state.advance(inst.assignment, inst.robots);
        CHECK(state.total_fire() <= prev);
        prev = state.total_fire();
    }
}

TEST_CASE("advance: power*psi = ln 2 halves the team's fire") {
    TeamRegion reg;
    reg.origin = {0.0, 0.0};
    reg.width = 1.0;
    reg.height = 1.0;
    reg.grid_resolution = 1;  // single cell: perfect coverage, psi = 1
    DensityField d;
    d.resolution = 1;
    d.cell_area = 1.0;
    d.values = {1.0};
    std::vector<Robot> robots{make_sensing_robot(0, 1.0),
                              make_fighting_robot(1, 1.0, std::log(2.0))};
    FireMissionState state({reg}, {d}, CoverageConfig{}, FireDynamicsConfig{}, 1, 1);
    Assignment a{{0, 0}};
    const double before = state.total_fire(0);
    state.advance(a, robots);
    CHECK(state.total_fire(0) == doctest::Approx(before / 2.0).epsilon(1e-12));
}

TEST_CASE("doubling the grid resolution moves a smooth cost by <10%") {
    auto cost_at = [](int res) {
        TeamRegion reg;
        reg.origin = {0.0, 0.0};
        reg.width = 4.0;
        reg.height = 4.0;
        reg.grid_resolution = res;
        DensityField d;
        d.resolution = res;
        d.cell_area = reg.cell_area();
        d.values.resize(reg.num_cells());
        for (int c = 0; c < reg.num_cells(); ++c) {
            const Vec2 q = reg.cell_center(c);
            d.values[c] = std::exp(-((q.x - 1.5) * (q.x - 1.5) + (q.y - 2.5) * (q.y - 2.5)));
        }
        return locational_cost({{1.0, 1.0}, {3.0, 3.0}}, reg, d);
    };
    const double c16 = cost_at(16);
    const double c32 = cost_at(32);
    CHECK(std::abs(c32 - c16) / c16 < 0.10);
}
