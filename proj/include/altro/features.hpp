#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altro/assignment.hpp"
#include "altro/core.hpp"
#include "altro/fire.hpp"
#include "altro/graph.hpp"

namespace altro {

// Versioned feature layout; checkpoints and dataset files embed this so a
// model never consumes features it was not trained on.
struct FeatureSchema {
    int version = 1;
    std::vector<std::string> team_features = {"weight",     "size", "n_sensing",
                                              "n_fighting", "fire_total",
                                              "psi",        "power", "loc_cost"};
    std::vector<std::string> robot_features = {"is_sensing", "is_fighting", "speed",
                                               "capacity"};
    std::vector<std::string> edge_features = {"dx", "dy", "dist", "weight_ratio",
                                              "adjacency"};
    std::string transfer_descriptor = "travel_time";

    int team_dim() const { return static_cast<int>(team_features.size()); }
    int robot_dim() const { return static_cast<int>(robot_features.size()); }
    int edge_dim() const { return static_cast<int>(edge_features.size()); }

    bool operator==(const FeatureSchema&) const = default;

    nlohmann::json to_json() const;
    static FeatureSchema from_json(const nlohmann::json& j);
};

// One supervised record: encoded state, masks, travel times, and the
// optimal destination label per robot.
struct GraphSample {
    uint64_t seed = 0;
    int num_teams = 0;
    int num_robots = 0;

    std::vector<double> team_feat;              // M x team_dim, row-major
    std::vector<double> robot_feat;             // N x robot_dim
    std::vector<std::pair<int, int>> edges;     // directed, both orientations
    std::vector<double> edge_feat;              // edges.size() x edge_dim
    std::vector<double> stay_edge_feat;         // synthetic self-pair feature
    std::vector<int> cur;                       // current team per robot
    std::vector<uint8_t> hamilton_mask;         // N x M
    std::vector<uint8_t> candidate_mask;        // N x M
    std::vector<double> distance_row;           // N x M travel times
    std::vector<int> label;                     // optimal next team per robot

    bool candidate(int r, int j) const {
        return candidate_mask[static_cast<size_t>(r) * num_teams + j] != 0;
    }
    std::vector<int> candidates_of(int r) const {
        std::vector<int> out;
        for (int j = 0; j < num_teams; ++j)
            if (candidate(r, j)) out.push_back(j);
        return out;
    }
    bool label_is_move(int r) const { return label[r] != cur[r]; }

    nlohmann::json to_json() const;
    static GraphSample from_json(const nlohmann::json& j);
};

// Per-feature normalization statistics, computed on the training split
// only. Constant features keep std 1 and are flagged.
struct NormStats {
    std::vector<double> team_mean, team_std;
    std::vector<double> robot_mean, robot_std;
    std::vector<double> edge_mean, edge_std;
    double xi_mean = 0.0, xi_std = 1.0;
    std::vector<uint8_t> team_constant, robot_constant, edge_constant;
    bool xi_constant = false;

    static NormStats compute(const std::vector<GraphSample>& train,
                             const FeatureSchema& schema);

    // In-place (x - mean) / std on every feature matrix of the sample.
    void apply(GraphSample& s) const;

    nlohmann::json to_json() const;
    static NormStats from_json(const nlohmann::json& j);
};

// Encodes the live state into features; the label is left empty. The fire
// state's caches must be current for the given assignment (refresh first).
GraphSample encode_features(const InteractionGraph& graph, const TeamWeights& weights,
                            const std::vector<Robot>& robots, const Assignment& assignment,
                            const FireMissionState& fire,
                            const HamiltonMask& hamilton,
                            const HamiltonMask& candidate);

}  // namespace altro
