#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altro/features.hpp"
#include "altro/instance.hpp"

namespace altro {

struct GenParams {
    int teams_min = 3;
    int teams_max = 7;
    int robots_per_team_min = 3;
    int robots_per_team_max = 5;
    double extra_edge_prob = 0.3;
    double weight_min = 1.0, weight_max = 2.0;
    double speed_min = 0.5, speed_max = 2.0;
    double capacity_min = 0.5, capacity_max = 2.0;
    double region_size = 4.0;      // meters per side
    int grid_resolution = 16;
    double min_separation = 6.0;   // between team positions, keeps regions disjoint
    double alpha = 0.1;
    double lambda = 1.0;
    CoverageConfig coverage;
    FireDynamicsConfig dynamics;
};

// Deterministic per seed: graph, regions, weights, robots, a uniformly
// drawn feasible initial assignment, and seeded fire fields.
Instance sample_instance(uint64_t seed, const GenParams& params);

// Masks the instance, runs the exact one-step optimizer, and encodes the
// labeled sample. Returns nullopt when the solve hits the timeout (the
// caller substitutes a fresh seed).
std::optional<GraphSample> label_instance(const Instance& instance, double lambda,
                                          double alpha, double timeout_seconds);

struct DatasetManifest {
    int num_samples = 0;
    std::map<int, int> team_histogram;    // team count -> samples
    std::map<int, int> robot_histogram;   // robot count -> samples
    std::map<int, int> skip_histogram;    // team count -> timed-out instances
    long stay_labels = 0;
    long move_labels = 0;
    int train_size = 0, val_size = 0, test_size = 0;
    FeatureSchema schema;
    NormStats normalization;              // computed on the training split only
    std::string normalization_source = "train";

    double move_fraction() const {
        const long total = stay_labels + move_labels;
        return total > 0 ? static_cast<double>(move_labels) / total : 0.0;
    }

    nlohmann::json to_json() const;
    static DatasetManifest from_json(const nlohmann::json& j);
};

struct GenConfig {
    int num_samples = 1000;
    uint64_t seed = 0;
    double timeout_seconds = 10.0;
    double train_frac = 0.8, val_frac = 0.1;
    std::string out_dir = ".";
    GenParams params;
};

// Samples, labels, splits 80/10/10 stratified by team count, and writes
// train/val/test JSONL plus manifest.json. Aborts if more than half the
// attempts for any team count time out.
DatasetManifest generate_dataset(const GenConfig& config);

// JSONL round-trip; the first line is a header carrying the schema version.
void write_jsonl(const std::string& path, const std::vector<GraphSample>& samples,
                 const FeatureSchema& schema);
std::vector<GraphSample> read_jsonl(const std::string& path, FeatureSchema* schema_out);

}  // namespace altro
