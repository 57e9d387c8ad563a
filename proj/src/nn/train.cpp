#include "altro/nn/train.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "altro/nn/adamw.hpp"
#include "altro/rng.hpp"

namespace altro::nn {

Metrics evaluate_policy(PolicyNet& net, const std::vector<GraphSample>& samples,
                        const TrainConfig& cfg) {
    Metrics m;
    long exact = 0, ms = 0, top3 = 0, move_exact = 0;
    long tp = 0, fp = 0, fn = 0;
    double loss_sum = 0.0;
    for (const auto& s : samples) {
        ForwardPass fwd = policy_forward(net, s, /*train_mode=*/false, 0.0, 0);
        loss_sum += policy_loss(fwd, s, cfg.move_emphasis, cfg.aux_weight).total;
        for (int r = 0; r < s.num_robots; ++r) {
            const int pred = fwd.predicted_team(r);
            const bool pred_move = pred != s.cur[r];
            const bool label_move = s.label_is_move(r);
            ++m.robots;
            if (label_move) ++m.labeled_moves;
            if (pred == s.label[r]) ++exact;
            if (pred_move == label_move) ++ms;
            if (fwd.label_in_top_k(r, s.label[r], 3)) ++top3;
            if (label_move && pred == s.label[r]) ++move_exact;
            if (pred_move && label_move) ++tp;
            if (pred_move && !label_move) ++fp;
            if (!pred_move && label_move) ++fn;
        }
    }
    if (m.robots > 0) {
        m.exact_acc = static_cast<double>(exact) / m.robots;
        m.move_stay_acc = static_cast<double>(ms) / m.robots;
        m.top3_acc = static_cast<double>(top3) / m.robots;
    }
    if (m.labeled_moves > 0)
        m.move_target_acc = static_cast<double>(move_exact) / m.labeled_moves;
    if (tp + fp > 0) m.move_precision = static_cast<double>(tp) / (tp + fp);
    if (tp + fn > 0) m.move_recall = static_cast<double>(tp) / (tp + fn);
    if (!samples.empty()) m.mean_loss = loss_sum / static_cast<double>(samples.size());
    return m;
}

namespace {

std::vector<std::vector<double>> snapshot_params(PolicyNet& net) {
    std::vector<std::vector<double>> out;
    for (const LinearLayer* l : net.layers()) {
        out.push_back(l->W.a);
        out.push_back(l->b.a);
    }
    return out;
}

void restore_params(PolicyNet& net, const std::vector<std::vector<double>>& snap) {
    size_t i = 0;
    for (LinearLayer* l : net.layers()) {
        l->W.a = snap[i++];
        l->b.a = snap[i++];
    }
}

}  // namespace

TrainResult train_policy(PolicyNet& net, const std::vector<GraphSample>& train,
                         const std::vector<GraphSample>& val, const TrainConfig& cfg) {
    TrainResult result;
    if (cfg.epochs <= 0 || train.empty()) return result;

    AdamW opt(net.layers(), AdamWConfig{cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});
    std::vector<size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<std::vector<double>> best_snapshot;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng shuffle_rng(mix64(cfg.seed, 0x5fff1eULL, static_cast<uint64_t>(epoch)));
        shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const size_t end = std::min(order.size(), start + cfg.batch_size);
            const double grad_scale = 1.0 / static_cast<double>(end - start);
            net.zero_grad();
            double batch_loss = 0.0;
            for (size_t k = start; k < end; ++k) {
                const GraphSample& s = train[order[k]];
                const uint64_t dkey =
                    mix64(cfg.seed, static_cast<uint64_t>(epoch), order[k]);
                ForwardPass fwd =
                    policy_forward(net, s, /*train_mode=*/true, cfg.dropout, dkey);
                batch_loss += policy_loss_backward(fwd, s, cfg.move_emphasis,
                                                   cfg.aux_weight, grad_scale)
                                  .total;
            }
            batch_loss /= static_cast<double>(end - start);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error(
                    "train: non-finite loss at epoch " + std::to_string(epoch) +
                    ", batch starting at sample " + std::to_string(start));
            epoch_loss += batch_loss * static_cast<double>(end - start);
            opt.step();
        }
        epoch_loss /= static_cast<double>(order.size());

        EpochRow row;
        row.epoch = epoch;
        row.train_loss = epoch_loss;
        row.val = evaluate_policy(net, val, cfg);
        row.val_loss = row.val.mean_loss;
        result.history.push_back(row);

        if (result.best_epoch < 0 || row.val.exact_acc > result.best_val_exact) {
            result.best_epoch = epoch;
            result.best_val_exact = row.val.exact_acc;
            best_snapshot = snapshot_params(net);
        }
    }

    if (!best_snapshot.empty()) restore_params(net, best_snapshot);
    return result;
}

void write_history_csv(const std::string& path, const std::vector<EpochRow>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file: " + path);
    out << "epoch,train_loss,val_loss,exact_acc,ms_acc,top3,move_target\n";
    for (const auto& row : history) {
        out << row.epoch << ',' << row.train_loss << ',' << row.val_loss << ','
            << row.val.exact_acc << ',' << row.val.move_stay_acc << ','
            << row.val.top3_acc << ',' << row.val.move_target_acc << "\n";
    }
}

}  // namespace altro::nn
