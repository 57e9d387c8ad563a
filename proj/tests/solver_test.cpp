#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "altro/dataset.hpp"
#include "altro/rng.hpp"
#include "altro/solver.hpp"
#include "oracles.hpp"

using namespace altro;
using namespace altro::testing;

namespace {

HamiltonMask full_stay_mask(int n, int m, const Assignment& a) {
    HamiltonMask mask;
    mask.num_robots = n;
    mask.num_teams = m;
    mask.admissible.assign(static_cast<size_t>(n) * m, 0);
    for (int r = 0; r < n; ++r) mask.set(r, a.team_of[r], true);
    return mask;
}

std::vector<Assignment> collect(const Assignment& a, const HamiltonMask& mask,
                                const std::vector<Robot>& robots, bool sensing) {
    std::vector<Assignment> out;
    enumerate_feasible(a, mask, robots, sensing, [&](const Assignment& c) {
        out.push_back(c);
        return true;
    });
    return out;
}

InteractionGraph complete_graph(int m) {
    std::vector<std::pair<int, int>> edges;
    std::vector<Vec2> pos;
    for (int i = 0; i < m; ++i) {
        pos.push_back({std::cos(2.0 * M_PI * i / m), std::sin(2.0 * M_PI * i / m)});
        for (int j = i + 1; j < m; ++j) edges.emplace_back(i, j);
    }
    return InteractionGraph::build(m, std::move(edges), std::move(pos));
}

}  // namespace

TEST_CASE("enumerate: all-stay mask yields exactly the current assignment") {
    std::vector<Robot> robots{make_sensing_robot(0, 1.0), make_sensing_robot(1, 1.0)};
    Assignment a{{0, 1}};
    const auto mask = full_stay_mask(2, 2, a);
    const auto got = collect(a, mask, robots, false);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == a);
}

TEST_CASE("enumerate: one robot with stay plus one move yields two candidates") {
    std::vector<Robot> robots{make_sensing_robot(0, 1.0), make_sensing_robot(1, 1.0),
                              make_sensing_robot(2, 1.0)};
    Assignment a{{0, 0, 1}};
    auto mask = full_stay_mask(3, 2, a);
    mask.set(0, 1, true);
    const auto got = collect(a, mask, robots, false);
    CHECK(got.size() == 2);
}

TEST_CASE("enumerate: three independent stay-or-move robots give the 2^3 product") {
    std::vector<Robot> robots;
    for (int r = 0; r < 4; ++r) robots.push_back(make_sensing_robot(r, 1.0));
    Assignment a{{0, 0, 0, 1}};
    auto mask = full_stay_mask(4, 2, a);
    for (int r = 0; r < 3; ++r) mask.set(r, 1, true);

    const auto got = collect(a, mask, robots, false);
    REQUIRE(got.size() == 8);

    // Explicit listing: every subset of the three movers.
    std::set<std::vector<int>> expect;
    for (int bits = 0; bits < 8; ++bits) {
        std::vector<int> t{0, 0, 0, 1};
        for (int r = 0; r < 3; ++r)
            if (bits & (1 << r)) t[r] = 1;
        expect.insert(t);
    }
    std::set<std::vector<int>> seen;
    for (const auto& c : got) seen.insert(c.team_of);
    CHECK(seen == expect);
}

TEST_CASE("enumerate filters joint infeasibility that the mask allows") {
    // Both robots of team 0 may move; leaving together would empty it.
    std::vector<Robot> robots{make_sensing_robot(0, 1.0), make_sensing_robot(1, 1.0),
                              make_sensing_robot(2, 1.0)};
    Assignment a{{0, 0, 1}};
    auto mask = full_stay_mask(3, 2, a);
    mask.set(0, 1, true);
    mask.set(1, 1, true);
    const auto got = collect(a, mask, robots, false);
    CHECK(got.size() == 3);  // stay/stay, move/stay, stay/move
}

TEST_CASE("solve_one_step: all-stay mask returns the unchanged assignment") {
    const Instance inst = two_team_fire_instance();
    FireMissionState state = inst.make_fire_state();
    state.refresh(inst.assignment, inst.robots);
    FireOracle oracle(state, inst.robots);
    const auto mask =
        full_stay_mask(inst.num_robots(), inst.num_teams(), inst.assignment);
    const auto res = solve_one_step(inst.graph, inst.weights, inst.robots,
                                    inst.assignment, oracle, mask, inst.lambda,
                                    inst.alpha, true, 0.0);
    CHECK(res.best_assignment == inst.assignment);
    CHECK(res.best_score ==
          global_objective(inst.assignment, inst.weights, oracle));
    CHECK(res.evaluated_count == 1);
    CHECK_FALSE(res.timed_out);
}

TEST_CASE("solve_one_step: the hand-checkable transfer wins") {
    const Instance inst = two_team_fire_instance();
    FireMissionState state = inst.make_fire_state();
    state.refresh(inst.assignment, inst.robots);
    FireOracle oracle(state, inst.robots);
    const auto mask = hamilton_mask(inst.graph, inst.weights, inst.assignment, oracle,
                                    sensing_departure_rule(inst.robots));

    // Both fighters are Hamilton-admissible toward the hotter team; the
    // sensing robots are pinned. Enumerate the four candidates by hand.
    CHECK(mask.at(2, 1));
    CHECK(mask.at(3, 1));
    CHECK(mask.destinations(0) == std::vector<int>{0});
    CHECK(mask.destinations(1) == std::vector<int>{1});

    std::vector<Assignment> candidates{
        Assignment{{0, 1, 0, 0}}, Assignment{{0, 1, 1, 0}},
        Assignment{{0, 1, 0, 1}}, Assignment{{0, 1, 1, 1}}};
    double best = -1e300;
    Assignment best_a;
    for (const auto& c : candidates) {
        const double s =
            global_objective(c, inst.weights, oracle) -
            inst.lambda * transfer_cost(inst.assignment, c, inst.graph, inst.robots,
                                        inst.alpha);
        if (s > best) {
            best = s;
            best_a = c;
        }
    }
    // The fast strong fighter moves; the slow one is not worth its cost.
    const Assignment expected{{0, 1, 1, 0}};
    CHECK(best_a == expected);

    const auto res =
        solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment, oracle,
                       mask, inst.lambda, inst.alpha, true, 0.0);
    CHECK(res.best_assignment == best_a);
    CHECK(res.best_score == best);
    CHECK(res.evaluated_count == 4);
}

TEST_CASE("solve_one_step: a huge lambda pins everyone in place") {
    const Instance inst = two_team_fire_instance();
    FireMissionState state = inst.make_fire_state();
    state.refresh(inst.assignment, inst.robots);
    FireOracle oracle(state, inst.robots);
    const auto mask = hamilton_mask(inst.graph, inst.weights, inst.assignment, oracle,
                                    sensing_departure_rule(inst.robots));
    const auto res = solve_one_step(inst.graph, inst.weights, inst.robots,
                                    inst.assignment, oracle, mask, 1e6, inst.alpha,
                                    true, 0.0);
    CHECK(res.best_assignment == inst.assignment);
}

TEST_CASE("solve_one_step never scores below the unchanged assignment") {
    GenParams params;
    params.teams_min = 3;
    params.teams_max = 4;
    for (uint64_t seed = 50; seed < 60; ++seed) {
        const Instance inst = sample_instance(seed, params);
        FireMissionState state = inst.make_fire_state();
        state.refresh(inst.assignment, inst.robots);
        FireOracle oracle(state, inst.robots);
        const auto mask = hamilton_mask(inst.graph, inst.weights, inst.assignment,
                                        oracle, sensing_departure_rule(inst.robots));
        const auto res =
            solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment,
                           oracle, mask, inst.lambda, inst.alpha, true, 0.0);
        CHECK(res.best_score >=
              global_objective(inst.assignment, inst.weights, oracle) -
                  inst.lambda * 0.0);
    }
}

TEST_CASE("solve_one_step matches the materialization oracle, tie-breaks included") {
    GenParams params;
    params.teams_min = 3;
    params.teams_max = 4;
    params.robots_per_team_min = 3;
    params.robots_per_team_max = 3;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        const Instance inst = sample_instance(seed, params);
        FireMissionState state = inst.make_fire_state();
        state.refresh(inst.assignment, inst.robots);
        FireOracle oracle(state, inst.robots);
        const auto mask = hamilton_mask(inst.graph, inst.weights, inst.assignment,
                                        oracle, sensing_departure_rule(inst.robots));
        const auto fast =
            solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment,
                           oracle, mask, inst.lambda, inst.alpha, true, 0.0);
        const auto slow = best_by_materialization(inst.graph, inst.weights, inst.robots,
                                                  inst.assignment, oracle, mask,
                                                  inst.lambda, inst.alpha, true);
        CHECK(fast.best_assignment == slow.best);
        CHECK(fast.best_score == slow.score);
        CHECK(fast.evaluated_count == slow.candidates);
    }
}

TEST_CASE("solve_one_step is deterministic across repeated runs") {
    const Instance inst = sample_instance(123, GenParams{});
    FireMissionState state = inst.make_fire_state();
    state.refresh(inst.assignment, inst.robots);
    FireOracle oracle(state, inst.robots);
    const auto mask = hamilton_mask(inst.graph, inst.weights, inst.assignment, oracle,
                                    sensing_departure_rule(inst.robots));
    const auto a = solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment,
                                  oracle, mask, inst.lambda, inst.alpha, true, 0.0);
    const auto b = solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment,
                                  oracle, mask, inst.lambda, inst.alpha, true, 0.0);
    CHECK(a.best_assignment == b.best_assignment);
    CHECK(a.best_score == b.best_score);
}

TEST_CASE("partition reduction") {
    SUBCASE("a = [1, 1] splits perfectly") {
        const auto p = build_partition_instance({1, 1});
        const auto res = solve_one_step(p.graph, p.weights, p.robots, p.assignment,
                                        *p.oracle, p.full_mask, p.lambda, p.alpha,
                                        false, 0.0);
        CHECK(res.best_score == 0.0);
        const std::vector<int> one_each{1, 1};
        CHECK(p.assignment.team_sizes(2) == one_each);
        CHECK(res.best_assignment.team_sizes(2) == one_each);
    }
    SUBCASE("a = [1, 2, 3] reaches zero with {1, 2} vs {3}") {
        const auto p = build_partition_instance({1, 2, 3});
        const auto res = solve_one_step(p.graph, p.weights, p.robots, p.assignment,
                                        *p.oracle, p.full_mask, p.lambda, p.alpha,
                                        false, 0.0);
        CHECK(res.best_score == 0.0);
        double side0 = 0.0;
        const std::vector<int> vals{1, 2, 3};
        for (int r = 0; r < 3; ++r)
            if (res.best_assignment.team_of[r] == 0) side0 += vals[r];
        CHECK(side0 == 3.0);
    }
    SUBCASE("a = [1, 1, 3]: best split misses by 1/2, objective -1") {
        const auto p = build_partition_instance({1, 1, 3});
        const auto res = solve_one_step(p.graph, p.weights, p.robots, p.assignment,
                                        *p.oracle, p.full_mask, p.lambda, p.alpha,
                                        false, 0.0);
        CHECK(res.best_score == doctest::Approx(-1.0));
    }
    SUBCASE("rejects single-integer lists") {
        CHECK_THROWS_AS(build_partition_instance({4}), std::invalid_argument);
    }
}

TEST_CASE("partition optimum agrees with the subset-sum oracle") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(2, 8);
        std::vector<int> values;
        for (int i = 0; i < n; ++i) values.push_back(rng.uniform_int(1, 20));
        const auto p = build_partition_instance(values);
        const auto res = solve_one_step(p.graph, p.weights, p.robots, p.assignment,
                                        *p.oracle, p.full_mask, p.lambda, p.alpha,
                                        false, 0.0);
        CHECK((res.best_score == 0.0) == partition_exists_dp(values));
    }
}

TEST_CASE("homogeneous: symmetric instances settle immediately") {
    HomogeneousInstance inst;
    inst.graph = complete_graph(3);
    inst.weights.w = {1.0, 1.0, 1.0};
    inst.team_sizes = {3, 3, 3};
    for (int v = 0; v < 3; ++v)
        inst.value_fn.push_back([](int n) { return std::sqrt(double(n)); });
    const auto trace = solve_homogeneous_iterative(inst);
    CHECK(trace.total_transfers == 0);
    CHECK(trace.size_history.size() == 1);
}

TEST_CASE("homogeneous: robots flow toward the heavier team") {
    HomogeneousInstance inst;
    inst.graph = complete_graph(2);
    inst.weights.w = {1.0, 2.0};
    inst.team_sizes = {4, 1};
    for (int v = 0; v < 2; ++v)
        inst.value_fn.push_back([](int n) { return std::sqrt(double(n)); });
    const auto trace = solve_homogeneous_iterative(inst);
    const auto [best, best_sizes] =
        homogeneous_brute_force(5, inst.weights, inst.value_fn);
    CHECK(trace.final_objective == best);
    CHECK(trace.size_history.back() == best_sizes);
    CHECK(trace.size_history.back()[1] > 1);
}

TEST_CASE("homogeneous: final allocation is the global optimum on random cases") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const int m = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(m, 10);
        HomogeneousInstance inst;
        inst.graph = complete_graph(m);
        inst.weights.w.resize(m);
        std::vector<double> scales(m);
        for (int v = 0; v < m; ++v) {
            inst.weights.w[v] = rng.uniform(0.5, 2.0);
            scales[v] = rng.uniform(0.5, 2.0);
        }
        for (int v = 0; v < m; ++v)
            inst.value_fn.push_back(
                [c = scales[v]](int k) { return c * std::sqrt(double(k)); });
        inst.team_sizes.assign(m, 1);
        for (int extra = 0; extra < n - m; ++extra)
            ++inst.team_sizes[rng.uniform_int(0, m - 1)];

        const auto trace = solve_homogeneous_iterative(inst);
        const auto [best, best_sizes] =
            homogeneous_brute_force(n, inst.weights, inst.value_fn);
        CHECK(trace.final_objective == best);

        // The objective strictly increases with every executed round.
        for (size_t k = 1; k < trace.size_history.size(); ++k) {
            CHECK(homogeneous_objective(trace.size_history[k], inst.weights,
                                        inst.value_fn) >
                  homogeneous_objective(trace.size_history[k - 1], inst.weights,
                                        inst.value_fn));
        }
        CHECK(trace.size_history.size() <=
              count_feasible_homogeneous(n, m) + 1);
    }
}

TEST_CASE("count_feasible_homogeneous") {
    CHECK(count_feasible_homogeneous(5, 3) == 6);
    CHECK(count_feasible_homogeneous(7, 7) == 1);
    CHECK(count_feasible_homogeneous(9, 3) == 28);
    CHECK_THROWS_AS(count_feasible_homogeneous(2, 3), std::invalid_argument);
}
