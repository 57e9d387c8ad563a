// Test-only reference implementations, kept independent of the library
// paths they cross-check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "altro/core.hpp"
#include "altro/instance.hpp"
#include "altro/solver.hpp"

namespace altro::testing {

struct ConstantOracle : MissionOracle {
    explicit ConstantOracle(double c = 0.0) : value(c) {}
    double evaluate(int, const std::vector<int>&) const override { return value; }
    double value;
};

struct CardinalityOracle : MissionOracle {
    double evaluate(int, const std::vector<int>& s) const override {
        return static_cast<double>(s.size());
    }
};

// Strictly increasing, strictly diminishing team value c_v * sqrt(|S|).
struct SqrtSizeOracle : MissionOracle {
    explicit SqrtSizeOracle(std::vector<double> scales) : scale(std::move(scales)) {}
    double evaluate(int team, const std::vector<int>& s) const override {
        return scale[team] * std::sqrt(static_cast<double>(s.size()));
    }
    std::vector<double> scale;
};

// Exhaustive max of the homogeneous objective over all size vectors with
// every team nonempty.
inline std::pair<double, std::vector<int>> homogeneous_brute_force(
    int n_robots, const TeamWeights& weights,
    const std::vector<std::function<double(int)>>& value_fn) {
    const int m = static_cast<int>(weights.w.size());
    std::vector<int> sizes(m, 1);
    std::vector<int> best_sizes;
    double best = -std::numeric_limits<double>::infinity();
    std::function<void(int, int)> rec = [&](int team, int remaining) {
        if (team == m - 1) {
            sizes[team] = remaining;
            const double g = homogeneous_objective(sizes, weights, value_fn);
            if (g > best) {
                best = g;
                best_sizes = sizes;
            }
            return;
        }
        for (int k = 1; k <= remaining - (m - 1 - team); ++k) {
            sizes[team] = k;
            rec(team + 1, remaining - k);
        }
    };
    rec(0, n_robots);
    return {best, best_sizes};
}

// Subset-sum reachability of A/2; positive integers make any witness a
// proper nonempty split.
inline bool partition_exists_dp(const std::vector<int>& values) {
    long total = 0;
    for (int v : values) total += v;
    if (total % 2 != 0) return false;
    const long half = total / 2;
    std::vector<char> reach(half + 1, 0);
    reach[0] = 1;
    for (int v : values)
        for (long s = half; s >= v; --s)
            if (reach[s - v]) reach[s] = 1;
    return reach[half] != 0;
}

// Plain product-space enumeration used to cross-check the solver: builds
// every mask-consistent assignment, filters feasibility from scratch,
// scores with the public objective ops, and sorts by the solver's
// tie-break order.
struct MaterializedBest {
    Assignment best;
    double score = 0.0;
    size_t candidates = 0;
};

inline MaterializedBest best_by_materialization(
    const InteractionGraph& graph, const TeamWeights& weights,
    const std::vector<Robot>& robots, const Assignment& assignment,
    const MissionOracle& oracle, const HamiltonMask& mask, double lambda, double alpha,
    bool require_sensing) {
    const int n = assignment.num_robots();
    const int m = graph.num_teams;
    std::vector<Assignment> all;
    Assignment work = assignment;
    std::function<void(int)> rec = [&](int r) {
        if (r == n) {
            std::vector<int> count(m, 0), sens(m, 0);
            for (int k = 0; k < n; ++k) {
                ++count[work.team_of[k]];
                if (robots[k].is_sensing()) ++sens[work.team_of[k]];
            }
            for (int v = 0; v < m; ++v) {
                if (count[v] == 0) return;
                if (require_sensing && sens[v] == 0) return;
            }
            all.push_back(work);
            return;
        }
        for (int j = 0; j < m; ++j) {
            if (!mask.at(r, j)) continue;
            work.team_of[r] = j;
            rec(r + 1);
        }
        work.team_of[r] = assignment.team_of[r];
    };
    rec(0);

    struct Scored {
        double score;
        int moved;
        const Assignment* a;
    };
    std::vector<Scored> scored;
    scored.reserve(all.size());
    for (const Assignment& a : all) {
        const double s = global_objective(a, weights, oracle) -
                         lambda * transfer_cost(assignment, a, graph, robots, alpha);
        scored.push_back({s, assignment.moved_count(a), &a});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
        if (x.score != y.score) return x.score > y.score;
        if (x.moved != y.moved) return x.moved < y.moved;
        return x.a->team_of < y.a->team_of;
    });
    return {*scored.front().a, scored.front().score, all.size()};
}

// Hand-checkable two-team fire setup: a heavier fire and weight on team 1,
// one fast strong fighter worth moving and one slow weak fighter not worth
// moving. Candidate space is the four fighter stay/move combinations.
inline Instance two_team_fire_instance() {
    Instance inst;
    inst.graph = InteractionGraph::build(2, {{0, 1}}, {{0.0, 0.0}, {8.0, 0.0}});
    inst.weights.w = {1.0, 2.0};
    inst.robots = {
        make_sensing_robot(0, 1.0),
        make_sensing_robot(1, 1.0),
        make_fighting_robot(2, 1.0, 1.5),
        make_fighting_robot(3, 0.25, 0.8),
    };
    inst.assignment.team_of = {0, 1, 0, 0};
    for (int v = 0; v < 2; ++v) {
        TeamRegion reg;
        reg.origin = {inst.graph.team_positions[v].x - 2.0,
                      inst.graph.team_positions[v].y - 2.0};
        reg.width = 4.0;
        reg.height = 4.0;
        reg.grid_resolution = 16;
        inst.regions.push_back(reg);
        DensityField d;
        d.resolution = reg.grid_resolution;
        d.cell_area = reg.cell_area();
        d.values.assign(reg.num_cells(), v == 0 ? 0.05 : 0.5);
        inst.density.push_back(std::move(d));
    }
    inst.alpha = 0.1;
    inst.lambda = 1.0;
    inst.seed = 7;
    inst.validate();
    return inst;
}

}  // namespace altro::testing
