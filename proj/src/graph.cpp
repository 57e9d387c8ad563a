#include "altro/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace altro {

InteractionGraph InteractionGraph::build(int num_teams,
                                         std::vector<std::pair<int, int>> edges,
                                         std::vector<Vec2> positions) {
    InteractionGraph g;
    g.num_teams = num_teams;
    for (auto& e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    g.edges = std::move(edges);
    g.team_positions = std::move(positions);

    const size_t m = static_cast<size_t>(num_teams);
    g.pairwise_distance.assign(m * m, 0.0);
    for (int i = 0; i < num_teams; ++i) {
        for (int j = 0; j < num_teams; ++j) {
            g.pairwise_distance[i * m + j] =
                altro::distance(g.team_positions[i], g.team_positions[j]);
        }
    }

    g.neighbors.assign(m, {});
    for (const auto& [a, b] : g.edges) {
        g.neighbors[a].push_back(b);
        g.neighbors[b].push_back(a);
    }
    for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());

    g.validate();
    return g;
}

bool InteractionGraph::adjacent(int i, int j) const {
    const auto& adj = neighbors[i];
    return std::binary_search(adj.begin(), adj.end(), j);
}

bool InteractionGraph::connected() const {
    if (num_teams == 0) return false;
    std::vector<char> seen(num_teams, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : neighbors[v]) {
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
        }
    }
    return count == num_teams;
}

void InteractionGraph::validate() const {
    if (num_teams <= 0) throw std::invalid_argument("graph: num_teams must be positive");
    if (static_cast<int>(team_positions.size()) != num_teams)
        throw std::invalid_argument("graph: positions size mismatch");
    for (const auto& [a, b] : edges) {
        if (a == b) throw std::invalid_argument("graph: self-loop on team " + std::to_string(a));
        if (a < 0 || b >= num_teams)
            throw std::invalid_argument("graph: edge endpoint out of range");
    }
    if (!connected()) throw std::invalid_argument("graph: not connected");

    const size_t m = static_cast<size_t>(num_teams);
    for (int i = 0; i < num_teams; ++i) {
        if (pairwise_distance[i * m + i] != 0.0)
            throw std::invalid_argument("graph: nonzero diagonal distance");
        for (int j = 0; j < num_teams; ++j) {
            double d = pairwise_distance[i * m + j];
            if (d != pairwise_distance[j * m + i])
                throw std::invalid_argument("graph: asymmetric distance table");
            double expect = altro::distance(team_positions[i], team_positions[j]);
            if (std::abs(d - expect) > 1e-9)
                throw std::invalid_argument("graph: distance table inconsistent with positions");
        }
    }
}

}  // namespace altro
