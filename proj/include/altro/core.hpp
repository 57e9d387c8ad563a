#pragma once

#include <functional>
#include <vector>

#include "altro/assignment.hpp"
#include "altro/graph.hpp"
#include "altro/robot.hpp"

namespace altro {

struct TeamWeights {
    std::vector<double> w;  // strictly positive mission-importance weights

    void validate() const;
};

// Receiver-to-donor weight ratio standing in for genetic relatedness.
double relatedness(const TeamWeights& weights, int i, int j);

// Set-dependent team evaluation. Implementations must be deterministic:
// identical (team, robot_set, internal state) yields the identical value.
struct MissionOracle {
    virtual ~MissionOracle() = default;
    virtual double evaluate(int team, const std::vector<int>& robot_set) const = 0;
};

// F_j(S ∪ {r}) - F_j(S). Rejects r already in the set.
double marginal_benefit(const MissionOracle& oracle, int team,
                        const std::vector<int>& robot_set, int robot);

// F_i(S) - F_i(S \ {r}). Rejects r not in the set.
double marginal_cost(const MissionOracle& oracle, int team,
                     const std::vector<int>& robot_set, int robot);

// Per-robot admissible destination sets. Entry (r, j) is true iff j is the
// robot's current team, or (cur(r), j) is a graph edge and the weighted
// benefit strictly exceeds the donor cost.
struct HamiltonMask {
    int num_robots = 0;
    int num_teams = 0;
    std::vector<uint8_t> admissible;  // num_robots x num_teams

    bool at(int r, int j) const {
        return admissible[static_cast<size_t>(r) * num_teams + j] != 0;
    }
    void set(int r, int j, bool v) {
        admissible[static_cast<size_t>(r) * num_teams + j] = v ? 1 : 0;
    }

    std::vector<int> destinations(int r) const {  // ascending team ids
        std::vector<int> out;
        for (int j = 0; j < num_teams; ++j)
            if (at(r, j)) out.push_back(j);
        return out;
    }
};

// Hard single-departure constraint hook: may robot leave its current team,
// given that team's member list? Applications narrow this (for the fire
// mission a departing robot must not strand a team without sensing).
using DepartureRule =
    std::function<bool(int robot, int team, const std::vector<int>& members)>;

// Default rule: a robot may leave only a team with at least two members.
DepartureRule nonempty_departure_rule();

// Fire-application rule: team keeps >= 1 member and >= 1 sensing robot.
DepartureRule sensing_departure_rule(const std::vector<Robot>& robots);

HamiltonMask hamilton_mask(const InteractionGraph& graph, const TeamWeights& weights,
                           const Assignment& assignment, const MissionOracle& oracle,
                           const DepartureRule& may_leave);

// Weighted sum of per-team mission values, teams in id order.
double global_objective(const Assignment& assignment, const TeamWeights& weights,
                        const MissionOracle& oracle);

double global_objective(const std::vector<std::vector<int>>& members,
                        const TeamWeights& weights, const MissionOracle& oracle);

// Sum over moved robots of alpha * distance / speed; zero for stayers.
double transfer_cost(const Assignment& prev, const Assignment& next,
                     const InteractionGraph& graph, const std::vector<Robot>& robots,
                     double alpha);

struct Transfer {
    int robot = 0;
    int src = 0;
    int dst = 0;
};

// Applies the listed moves and validates the result. Each robot may appear
// at most once and src must match its current team.
Assignment apply_transfers(const Assignment& a, const std::vector<Transfer>& transfers,
                           int num_teams, const std::vector<Robot>& robots,
                           bool require_sensing);

}  // namespace altro
