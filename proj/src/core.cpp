#include "altro/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace altro {

void TeamWeights::validate() const {
    for (size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0))
            throw std::invalid_argument("weights: w[" + std::to_string(i) +
                                        "] must be strictly positive");
}

double relatedness(const TeamWeights& weights, int i, int j) {
    return weights.w[j] / weights.w[i];
}

namespace {

std::vector<int> set_with(const std::vector<int>& s, int robot) {
    std::vector<int> out(s);
    out.insert(std::upper_bound(out.begin(), out.end(), robot), robot);
    return out;
}

std::vector<int> set_without(const std::vector<int>& s, int robot) {
    std::vector<int> out;
    out.reserve(s.size() - 1);
    for (int r : s)
        if (r != robot) out.push_back(r);
    return out;
}

}  // namespace

double marginal_benefit(const MissionOracle& oracle, int team,
                        const std::vector<int>& robot_set, int robot) {
    if (std::find(robot_set.begin(), robot_set.end(), robot) != robot_set.end())
        throw std::invalid_argument("marginal_benefit: robot " + std::to_string(robot) +
                                    " already in team " + std::to_string(team));
    return oracle.evaluate(team, set_with(robot_set, robot)) -
           oracle.evaluate(team, robot_set);
}

double marginal_cost(const MissionOracle& oracle, int team,
                     const std::vector<int>& robot_set, int robot) {
    if (std::find(robot_set.begin(), robot_set.end(), robot) == robot_set.end())
        throw std::invalid_argument("marginal_cost: robot " + std::to_string(robot) +
                                    " not in team " + std::to_string(team));
    return oracle.evaluate(team, robot_set) -
           oracle.evaluate(team, set_without(robot_set, robot));
}

DepartureRule nonempty_departure_rule() {
    return [](int, int, const std::vector<int>& members) { return members.size() >= 2; };
}

DepartureRule sensing_departure_rule(const std::vector<Robot>& robots) {
    return [&robots](int robot, int, const std::vector<int>& members) {
        if (members.size() < 2) return false;
        if (!robots[robot].is_sensing()) return true;
        for (int m : members)
            if (m != robot && robots[m].is_sensing()) return true;
        return false;
    };
}

HamiltonMask hamilton_mask(const InteractionGraph& graph, const TeamWeights& weights,
                           const Assignment& assignment, const MissionOracle& oracle,
                           const DepartureRule& may_leave) {
    const int n = assignment.num_robots();
    const int m = graph.num_teams;
    HamiltonMask mask;
    mask.num_robots = n;
    mask.num_teams = m;
    mask.admissible.assign(static_cast<size_t>(n) * m, 0);

    const auto members = assignment.members(m);
    std::vector<double> team_value(m);
    for (int v = 0; v < m; ++v) team_value[v] = oracle.evaluate(v, members[v]);

    for (int r = 0; r < n; ++r) {
        const int i = assignment.team_of[r];
        mask.set(r, i, true);  // staying is always feasible
        if (!may_leave(r, i, members[i])) continue;

        const double cost = team_value[i] -
                            oracle.evaluate(i, set_without(members[i], r));
        for (int j : graph.neighbors[i]) {
            const double benefit =
                oracle.evaluate(j, set_with(members[j], r)) - team_value[j];
            // Strict inequality, exact comparison: ties are inadmissible.
            if (relatedness(weights, i, j) * benefit > cost) mask.set(r, j, true);
        }
    }
    return mask;
}

double global_objective(const std::vector<std::vector<int>>& members,
                        const TeamWeights& weights, const MissionOracle& oracle) {
    double g = 0.0;
    for (size_t v = 0; v < members.size(); ++v)
        g += weights.w[v] * oracle.evaluate(static_cast<int>(v), members[v]);
    return g;
}

double global_objective(const Assignment& assignment, const TeamWeights& weights,
                        const MissionOracle& oracle) {
    return global_objective(assignment.members(static_cast<int>(weights.w.size())),
                            weights, oracle);
}

double transfer_cost(const Assignment& prev, const Assignment& next,
                     const InteractionGraph& graph, const std::vector<Robot>& robots,
                     double alpha) {
    double total = 0.0;
    for (int r = 0; r < prev.num_robots(); ++r) {
        const int a = prev.team_of[r];
        const int b = next.team_of[r];
        if (a != b) total += alpha * graph.distance(a, b) / robots[r].speed;
    }
    return total;
}

Assignment apply_transfers(const Assignment& a, const std::vector<Transfer>& transfers,
                           int num_teams, const std::vector<Robot>& robots,
                           bool require_sensing) {
    Assignment next = a;
    std::vector<char> seen(a.num_robots(), 0);
    for (const auto& t : transfers) {
        if (t.robot < 0 || t.robot >= a.num_robots())
            throw std::invalid_argument("apply_transfers: robot id out of range");
        if (seen[t.robot])
            throw std::invalid_argument("apply_transfers: robot " +
                                        std::to_string(t.robot) + " listed twice");
        seen[t.robot] = 1;
        if (a.team_of[t.robot] != t.src)
            throw std::invalid_argument("apply_transfers: robot " +
                                        std::to_string(t.robot) +
                                        " is not on the claimed source team");
        next.team_of[t.robot] = t.dst;
    }
    validate_assignment(next, num_teams, robots, require_sensing);
    return next;
}

}  // namespace altro
