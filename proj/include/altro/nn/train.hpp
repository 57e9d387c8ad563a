#pragma once

#include <string>
#include <vector>

#include "altro/nn/policy.hpp"

namespace altro::nn {

struct TrainConfig {
    int epochs = 50;
    double lr = 1e-3;
    double weight_decay = 1e-4;
    double dropout = 0.1;
    int batch_size = 128;
    double aux_weight = 0.15;
    double move_emphasis = 1.25;
    uint64_t seed = 0;
};

struct Metrics {
    double exact_acc = 0.0;        // predicted destination equals the label
    double move_stay_acc = 0.0;    // move-vs-stay agreement
    double top3_acc = 0.0;         // label among the 3 best feasible actions
    double move_target_acc = 0.0;  // exact accuracy on move-labeled robots
    double move_precision = 0.0;
    double move_recall = 0.0;
    double mean_loss = 0.0;
    long robots = 0;
    long labeled_moves = 0;
};

struct EpochRow {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    Metrics val;
};

struct TrainResult {
    std::vector<EpochRow> history;
    int best_epoch = -1;
    double best_val_exact = 0.0;
};

// Evaluation over pre-normalized samples, dropout off.
Metrics evaluate_policy(PolicyNet& net, const std::vector<GraphSample>& samples,
                        const TrainConfig& cfg);

// Shuffled mini-batch AdamW training; the net is left holding the weights
// of the epoch with the best validation exact accuracy. Aborts with a
// diagnostic on a non-finite loss.
TrainResult train_policy(PolicyNet& net, const std::vector<GraphSample>& train,
                         const std::vector<GraphSample>& val, const TrainConfig& cfg);

void write_history_csv(const std::string& path, const std::vector<EpochRow>& history);

}  // namespace altro::nn
