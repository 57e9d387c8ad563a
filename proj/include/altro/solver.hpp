#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <vector>

#include "altro/assignment.hpp"
#include "altro/core.hpp"
#include "altro/graph.hpp"

namespace altro {

struct SolveResult {
    Assignment best_assignment;
    double best_score = 0.0;      // objective minus lambda * transfer cost
    uint64_t evaluated_count = 0;
    double elapsed_seconds = 0.0;
    bool timed_out = false;
};

// Visits every assignment reachable by giving each robot a destination from
// its admissible set, filtered by team-nonempty (and, when require_sensing,
// sensing-retention) constraints. The unchanged assignment is included and
// every candidate is produced exactly once. Return false from the callback
// to stop early.
void enumerate_feasible(const Assignment& assignment, const HamiltonMask& mask,
                        const std::vector<Robot>& robots, bool require_sensing,
                        const std::function<bool(const Assignment&)>& visit);

// Exhaustive one-step maximization of
//   global_objective(next) - lambda * transfer_cost(cur, next)
// over the mask-consistent candidates. Ties break toward fewer moved robots,
// then the lexicographically smallest team_of array. A non-positive timeout
// means no deadline; on timeout the best candidate found so far is returned
// with timed_out set (the unchanged assignment is always evaluated first).
SolveResult solve_one_step(const InteractionGraph& graph, const TeamWeights& weights,
                           const std::vector<Robot>& robots, const Assignment& assignment,
                           const MissionOracle& oracle, const HamiltonMask& mask,
                           double lambda, double alpha, bool require_sensing,
                           double timeout_seconds);

// --- Partition reduction -------------------------------------------------

// Two-team instance whose optimal one-step score is 0 exactly when the
// integer multiset splits into two halves of equal sum.
struct PartitionInstance {
    InteractionGraph graph;
    TeamWeights weights;
    std::vector<Robot> robots;
    Assignment assignment;
    HamiltonMask full_mask;  // every transfer admissible
    std::shared_ptr<MissionOracle> oracle;
    double lambda = 0.0;
    double alpha = 0.0;
};

PartitionInstance build_partition_instance(const std::vector<int>& integers);

// --- Homogeneous framework ------------------------------------------------

// Teams of interchangeable robots: per-team value depends on size only.
// Value functions must be strictly increasing with diminishing returns.
struct HomogeneousInstance {
    InteractionGraph graph;
    TeamWeights weights;
    std::vector<int> team_sizes;
    std::vector<std::function<double(int)>> value_fn;
};

struct HomogeneousTrace {
    std::vector<std::vector<int>> size_history;              // initial state first
    std::vector<std::vector<std::pair<int, int>>> executed;  // (src, dst) per round
    double final_objective = 0.0;
    int total_transfers = 0;
};

double homogeneous_objective(const std::vector<int>& sizes, const TeamWeights& weights,
                             const std::vector<std::function<double(int)>>& value_fn);

// Iterative local bidding: per edge, admissibility is tested via the
// weighted marginal condition; each team proposes its best outgoing
// transfer and accepts its best incoming proposal, all accepted moves
// execute simultaneously, and the loop repeats until nothing is admissible.
HomogeneousTrace solve_homogeneous_iterative(const HomogeneousInstance& instance);

// Number of feasible size vectors: binomial(N-1, M-1). Rejects N < M.
unsigned long long count_feasible_homogeneous(int n_robots, int n_teams);

}  // namespace altro
