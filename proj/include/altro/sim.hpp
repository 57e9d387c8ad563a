#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "altro/dataset.hpp"
#include "altro/instance.hpp"
#include "altro/nn/policy.hpp"
#include "altro/solver.hpp"

namespace altro {

struct EpisodeConfig {
    int max_steps = 200;
    double fire_eps_frac = 1e-3;  // fraction of the initial total fire
};

struct StepLog {
    int step = 0;
    Assignment assignment;  // after the step's accepted transfers
    std::vector<Transfer> accepted;
    std::vector<double> team_fire;   // totals after the decay commit
    std::vector<double> team_psi;    // values used by the decay commit
    std::vector<double> team_power;
    std::vector<double> team_loc;
    double total_fire = 0.0;
    double wall_seconds = 0.0;
};

enum class TerminalReason { kNoTransfers, kFireExtinguished, kMaxSteps };

const char* to_string(TerminalReason r);

struct EpisodeLog {
    std::vector<StepLog> steps;
    TerminalReason reason = TerminalReason::kMaxSteps;
    double initial_fire = 0.0;
    double final_fire = 0.0;
    double total_seconds = 0.0;

    nlohmann::json to_json() const;
    // One row per (step, team): step, team, total_fire, psi, power, L.
    void write_steps_csv(const std::string& path) const;
};

struct InferStepResult {
    Assignment next;
    std::vector<Transfer> accepted;
};

// One decentralized decision round: encode the live state, score candidates,
// collect per-team move proposals in descending score order, and accept
// those that keep the source team feasible given already-accepted
// departures. The fire state is refreshed, not advanced.
InferStepResult infer_step(const InteractionGraph& graph, const TeamWeights& weights,
                           const std::vector<Robot>& robots, const Assignment& assignment,
                           FireMissionState& fire, nn::PolicyNet& net,
                           const NormStats& stats);

// Alternates infer_step and the fire decay commit until the fire total
// drops under the threshold, proposals dry up with stagnant fire, or the
// step cap is reached.
EpisodeLog run_episode(const Instance& instance, nn::PolicyNet& net,
                       const NormStats& stats, const EpisodeConfig& cfg);

struct BenchRow {
    int teams = 0;
    int robots = 0;
    std::string method;  // "exact" | "gnn"
    double total_seconds = 0.0;
    double mean_step_seconds = 0.0;
    int steps = 0;
    bool timed_out = false;
};

// For each team count: one seeded instance, solved by (a) the iterative
// exact optimizer under the timeout and (b) a policy episode.
std::vector<BenchRow> run_bench(const std::vector<int>& team_counts, int robots_per_team,
                                double exact_timeout_seconds, nn::PolicyNet* net,
                                const NormStats* stats, uint64_t seed,
                                const GenParams& params, const EpisodeConfig& episode);

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);

struct GapRow {
    uint64_t seed = 0;
    double exact_score = 0.0;
    double gnn_score = 0.0;
    double rel_gap = 0.0;
    double identical_fraction = 0.0;
};

struct GapReport {
    std::vector<GapRow> rows;
    double median_gap = 0.0;
    double mean_identical = 0.0;

    nlohmann::json to_json() const;
};

// One exact step vs one policy step from the same state, per instance.
GapReport compare_with_exact(const std::vector<Instance>& instances, nn::PolicyNet& net,
                             const NormStats& stats, double lambda, double alpha);

}  // namespace altro
