#include "altro/assignment.hpp"

namespace altro {

std::vector<std::vector<int>> Assignment::members(int num_teams) const {
    std::vector<std::vector<int>> out(num_teams);
    for (int r = 0; r < num_robots(); ++r) out[team_of[r]].push_back(r);
    return out;
}

std::vector<int> Assignment::team_sizes(int num_teams) const {
    std::vector<int> n(num_teams, 0);
    for (int t : team_of) ++n[t];
    return n;
}

int Assignment::moved_count(const Assignment& next) const {
    int moved = 0;
    for (size_t r = 0; r < team_of.size(); ++r)
        if (team_of[r] != next.team_of[r]) ++moved;
    return moved;
}

void validate_assignment(const Assignment& a, int num_teams,
                         const std::vector<Robot>& robots, bool require_sensing) {
    if (a.team_of.size() != robots.size())
        throw std::invalid_argument("assignment: size does not match robot count");
    std::vector<int> count(num_teams, 0);
    std::vector<int> sensing(num_teams, 0);
    for (int r = 0; r < a.num_robots(); ++r) {
        int t = a.team_of[r];
        if (t < 0 || t >= num_teams)
            throw std::invalid_argument("assignment: robot " + std::to_string(r) +
                                        " maps to invalid team " + std::to_string(t));
        ++count[t];
        if (robots[r].is_sensing()) ++sensing[t];
    }
    for (int v = 0; v < num_teams; ++v) {
        if (count[v] == 0)
            throw infeasible_error(v, "team-nonempty",
                                   "team " + std::to_string(v) + " would be empty");
        if (require_sensing && sensing[v] == 0)
            throw infeasible_error(v, "sensing-retention",
                                   "team " + std::to_string(v) +
                                       " would have no sensing robot");
    }
}

}  // namespace altro
