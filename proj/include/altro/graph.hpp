#pragma once

#include <utility>
#include <vector>

#include "altro/geometry.hpp"

namespace altro {

// Undirected team interaction graph with embedded team positions and a
// precomputed Euclidean distance table.
struct InteractionGraph {
    int num_teams = 0;
    std::vector<std::pair<int, int>> edges;   // unordered pairs, stored (lo, hi)
    std::vector<Vec2> team_positions;
    std::vector<double> pairwise_distance;    // num_teams x num_teams, row-major
    std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

    static InteractionGraph build(int num_teams,
                                  std::vector<std::pair<int, int>> edges,
                                  std::vector<Vec2> positions);

    double distance(int i, int j) const {
        return pairwise_distance[static_cast<size_t>(i) * num_teams + j];
    }

    bool adjacent(int i, int j) const;
    bool connected() const;

    // Throws std::invalid_argument on self-loops, out-of-range edges,
    // disconnected graphs, or an inconsistent distance table.
    void validate() const;
};

}  // namespace altro
