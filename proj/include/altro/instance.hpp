#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altro/assignment.hpp"
#include "altro/core.hpp"
#include "altro/fire.hpp"
#include "altro/graph.hpp"

namespace altro {

// A complete fire-fighting problem state: team graph, robot population,
// assignment, and mission parameters. Serializes to the JSON layout
// described in docs/instance.schema.json.
struct Instance {
    InteractionGraph graph;
    TeamWeights weights;
    std::vector<Robot> robots;
    Assignment assignment;

    std::vector<TeamRegion> regions;
    std::vector<DensityField> density;
    CoverageConfig coverage;
    FireDynamicsConfig dynamics;
    double alpha = 0.1;   // transfer-cost scale
    double lambda = 1.0;  // cost regularization in the one-step objective
    uint64_t seed = 0;

    int num_teams() const { return graph.num_teams; }
    int num_robots() const { return static_cast<int>(robots.size()); }

    int total_sensing() const;

    FireMissionState make_fire_state() const;

    void validate() const;

    nlohmann::json to_json() const;
    static Instance from_json(const nlohmann::json& j);

    void save(const std::string& path) const;
    static Instance load(const std::string& path);
};

}  // namespace altro
