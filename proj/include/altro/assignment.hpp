#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "altro/robot.hpp"

namespace altro {

// Thrown when a requested assignment would violate a hard team constraint.
struct infeasible_error : std::runtime_error {
    infeasible_error(int team_, std::string constraint_, const std::string& msg)
        : std::runtime_error(msg), team(team_), constraint(std::move(constraint_)) {}
    int team;
    std::string constraint;
};

// Dense robot-to-team map. Robot r belongs to team team_of[r]; the one-hot
// matrix form is implied by construction.
struct Assignment {
    std::vector<int> team_of;

    int num_robots() const { return static_cast<int>(team_of.size()); }

    bool operator==(const Assignment& o) const { return team_of == o.team_of; }

    // Per-team member lists, ids ascending.
    std::vector<std::vector<int>> members(int num_teams) const;

    std::vector<int> team_sizes(int num_teams) const;

    int moved_count(const Assignment& next) const;
};

// Throws infeasible_error if a team is empty or (when require_sensing)
// lacks a sensing robot; std::invalid_argument on out-of-range entries.
void validate_assignment(const Assignment& a, int num_teams,
                         const std::vector<Robot>& robots, bool require_sensing);

}  // namespace altro
