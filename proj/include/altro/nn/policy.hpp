#pragma once

#include <memory>
#include <vector>

#include "altro/features.hpp"
#include "altro/nn/tensor.hpp"

namespace altro::nn {

// Two-layer perceptron: linear -> ReLU (-> dropout in train mode) -> linear.
struct Mlp {
    LinearLayer l1;
    LinearLayer l2;

    Mlp() = default;
    Mlp(int in, int hidden, int out) : l1(in, hidden), l2(hidden, out) {}
};

// Policy over the team interaction graph: feature encoders, one round of
// edge-conditioned message passing with mean aggregation, a per-candidate
// action scorer, and a binary move/stay head.
struct PolicyNet {
    FeatureSchema schema;
    int hidden = 128;

    Mlp enc_team;    // team_dim -> H -> H
    Mlp enc_robot;   // robot_dim -> H -> H
    Mlp message;     // 2H + edge_dim -> H -> H
    Mlp update;      // 2H -> H -> H
    Mlp scorer;      // 3H + edge_dim + 1 -> H -> 1
    Mlp move_head;   // 2H -> H -> 1

    PolicyNet() = default;
    PolicyNet(FeatureSchema schema_, int hidden_);

    void init_params(uint64_t seed);
    std::vector<LinearLayer*> layers();
    std::vector<const LinearLayer*> layers() const;
    void zero_grad();
    size_t param_count() const;
};

// One evaluated sample: candidate scores (flattened ragged rows) and
// per-robot move logits, with the tape retained for a backward pass.
struct ForwardPass {
    std::unique_ptr<Tape> tape;
    int scores_node = -1;       // K x 1
    int move_logits_node = -1;  // N x 1
    std::vector<int> cand_offset;  // size N+1, offsets into the flat lists
    std::vector<int> cand_team;    // flat candidate team per score row

    double score(int flat_index) const { return tape->val(scores_node).a[flat_index]; }
    double move_logit(int r) const { return tape->val(move_logits_node).a[r]; }

    // Argmax destination over the robot's candidates (ties: lowest team id).
    int predicted_team(int r) const;
    // Masked softmax probability of candidate j for robot r; exactly zero
    // for teams outside the candidate set.
    double probability(int r, int team) const;
    // Whether the label team ranks among the k highest-scoring candidates.
    bool label_in_top_k(int r, int label_team, int k) const;
};

// Features must already be normalized with the checkpoint's statistics.
// Throws on a feature-dimension mismatch against the net's schema.
ForwardPass policy_forward(PolicyNet& net, const GraphSample& sample, bool train_mode,
                           double dropout_rate, uint64_t dropout_key);

struct LossParts {
    double total = 0.0;
    double cross_entropy = 0.0;
    double move_stay_bce = 0.0;
};

// Masked cross-entropy averaged over robots (weight move_emphasis on
// transfer labels) plus aux_weight times the move/stay binary term.
LossParts policy_loss(const ForwardPass& fwd, const GraphSample& sample,
                      double move_emphasis, double aux_weight);

// Same value, and additionally accumulates parameter gradients scaled by
// grad_scale (1/batch size for a batch mean).
LossParts policy_loss_backward(ForwardPass& fwd, const GraphSample& sample,
                               double move_emphasis, double aux_weight,
                               double grad_scale);

}  // namespace altro::nn
