#include "altro/nn/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace altro::nn {

PolicyNet::PolicyNet(FeatureSchema schema_, int hidden_)
    : schema(std::move(schema_)), hidden(hidden_) {
    const int h = hidden;
    enc_team = Mlp(schema.team_dim(), h, h);
    enc_robot = Mlp(schema.robot_dim(), h, h);
    message = Mlp(2 * h + schema.edge_dim(), h, h);
    update = Mlp(2 * h, h, h);
    scorer = Mlp(3 * h + schema.edge_dim() + 1, h, 1);
    move_head = Mlp(2 * h, h, 1);
}

void PolicyNet::init_params(uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0xA17D0'5EEDULL));
    for (LinearLayer* l : layers()) l->init(rng);
}

std::vector<LinearLayer*> PolicyNet::layers() {
    return {&enc_team.l1, &enc_team.l2, &enc_robot.l1, &enc_robot.l2,
            &message.l1,  &message.l2,  &update.l1,    &update.l2,
            &scorer.l1,   &scorer.l2,   &move_head.l1, &move_head.l2};
}

std::vector<const LinearLayer*> PolicyNet::layers() const {
    auto mut = const_cast<PolicyNet*>(this)->layers();
    return {mut.begin(), mut.end()};
}

void PolicyNet::zero_grad() {
    for (LinearLayer* l : layers()) l->zero_grad();
}

size_t PolicyNet::param_count() const {
    size_t n = 0;
    for (const LinearLayer* l : layers()) n += l->param_count();
    return n;
}

int ForwardPass::predicted_team(int r) const {
    const Mat& s = tape->val(scores_node);
    int best = cand_team[cand_offset[r]];
    double best_score = s.a[cand_offset[r]];
    for (int k = cand_offset[r] + 1; k < cand_offset[r + 1]; ++k) {
        if (s.a[k] > best_score) {  // strict: ties keep the lowest team id
            best_score = s.a[k];
            best = cand_team[k];
        }
    }
    return best;
}

double ForwardPass::probability(int r, int team) const {
    const Mat& s = tape->val(scores_node);
    int pos = -1;
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = cand_offset[r]; k < cand_offset[r + 1]; ++k) {
        if (cand_team[k] == team) pos = k;
        mx = std::max(mx, s.a[k]);
    }
    if (pos < 0) return 0.0;  // infeasible action: mass is exactly zero
    double z = 0.0;
    for (int k = cand_offset[r]; k < cand_offset[r + 1]; ++k)
        z += std::exp(s.a[k] - mx);
    return std::exp(s.a[pos] - mx) / z;
}

bool ForwardPass::label_in_top_k(int r, int label_team, int k) const {
    const Mat& s = tape->val(scores_node);
    int pos = -1;
    for (int i = cand_offset[r]; i < cand_offset[r + 1]; ++i)
        if (cand_team[i] == label_team) pos = i;
    if (pos < 0) return false;
    int rank = 0;
    for (int i = cand_offset[r]; i < cand_offset[r + 1]; ++i) {
        if (i == pos) continue;
        if (s.a[i] > s.a[pos] || (s.a[i] == s.a[pos] && cand_team[i] < label_team))
            ++rank;
    }
    return rank < k;
}

namespace {

Mat to_mat(const std::vector<double>& flat, int rows, int cols) {
    Mat m(rows, cols);
    m.a = flat;
    return m;
}

}  // namespace

ForwardPass policy_forward(PolicyNet& net, const GraphSample& sample, bool train_mode,
                           double dropout_rate, uint64_t dropout_key) {
    const int m = sample.num_teams;
    const int n = sample.num_robots;
    const int td = net.schema.team_dim();
    const int rd = net.schema.robot_dim();
    const int ed = net.schema.edge_dim();
    if (static_cast<int>(sample.team_feat.size()) != m * td ||
        static_cast<int>(sample.robot_feat.size()) != n * rd ||
        sample.edge_feat.size() != sample.edges.size() * static_cast<size_t>(ed) ||
        static_cast<int>(sample.stay_edge_feat.size()) != ed)
        throw std::runtime_error("policy_forward: feature dimensions do not match schema");

    ForwardPass fwd;
    fwd.tape = std::make_unique<Tape>();
    Tape& t = *fwd.tape;

    uint64_t salt = 0;
    const bool drop = train_mode && dropout_rate > 0.0;
    auto mlp = [&](int x, Mlp& net_mlp) {
        int h = t.relu(t.linear(x, net_mlp.l1));
        if (drop) h = t.dropout(h, dropout_rate, dropout_key, salt++);
        return t.linear(h, net_mlp.l2);
    };

    const int z = t.input(to_mat(sample.team_feat, m, td));
    const int h0 = mlp(z, net.enc_team);
    const int u = t.input(to_mat(sample.robot_feat, n, rd));
    const int g = mlp(u, net.enc_robot);

    // One round of message passing; rows ordered by (dst, src) so the mean
    // aggregation sums in a fixed order for any storage order of edges.
    const int num_edges = static_cast<int>(sample.edges.size());
    std::vector<int> eorder(num_edges);
    std::iota(eorder.begin(), eorder.end(), 0);
    std::sort(eorder.begin(), eorder.end(), [&](int a, int b) {
        const auto& ea = sample.edges[a];
        const auto& eb = sample.edges[b];
        return std::make_pair(ea.second, ea.first) < std::make_pair(eb.second, eb.first);
    });
    std::vector<int> srcs(num_edges), dsts(num_edges);
    Mat efeat_ordered(num_edges, ed);
    for (int k = 0; k < num_edges; ++k) {
        srcs[k] = sample.edges[eorder[k]].first;
        dsts[k] = sample.edges[eorder[k]].second;
        const double* src_row = &sample.edge_feat[static_cast<size_t>(eorder[k]) * ed];
        std::copy(src_row, src_row + ed, efeat_ordered.row(k));
    }
    int h1;
    if (num_edges > 0) {
        const int ef = t.input(std::move(efeat_ordered));
        const int msg_in =
            t.concat_cols({t.gather_rows(h0, srcs), t.gather_rows(h0, dsts), ef});
        const int msgs = mlp(msg_in, net.message);
        const int mbar = t.segment_mean(msgs, dsts, m);
        h1 = mlp(t.concat_cols({h0, mbar}), net.update);
    } else {
        // Isolated graph: the aggregated message is the zero vector.
        const int mbar = t.input(Mat(m, net.hidden));
        h1 = mlp(t.concat_cols({h0, mbar}), net.update);
    }

    // Edge-feature lookup for candidate pairs; the last row is the
    // synthetic self pair used by the stay action.
    Mat efeat_plus(num_edges + 1, ed);
    std::copy(sample.edge_feat.begin(), sample.edge_feat.end(), efeat_plus.a.begin());
    std::copy(sample.stay_edge_feat.begin(), sample.stay_edge_feat.end(),
              efeat_plus.row(num_edges));
    std::vector<int> edge_row_of(static_cast<size_t>(m) * m, num_edges);
    for (int k = 0; k < num_edges; ++k)
        edge_row_of[static_cast<size_t>(sample.edges[k].first) * m +
                    sample.edges[k].second] = k;

    fwd.cand_offset.assign(n + 1, 0);
    std::vector<int> rep_robot, cur_rows, cand_rows, edge_rows;
    std::vector<double> xi;
    for (int r = 0; r < n; ++r) {
        fwd.cand_offset[r] = static_cast<int>(fwd.cand_team.size());
        const int i = sample.cur[r];
        for (int j = 0; j < m; ++j) {
            if (!sample.candidate(r, j)) continue;
            fwd.cand_team.push_back(j);
            rep_robot.push_back(r);
            cur_rows.push_back(i);
            cand_rows.push_back(j);
            edge_rows.push_back(j == i ? num_edges
                                       : edge_row_of[static_cast<size_t>(i) * m + j]);
            xi.push_back(sample.distance_row[static_cast<size_t>(r) * m + j]);
        }
    }
    fwd.cand_offset[n] = static_cast<int>(fwd.cand_team.size());

    const int ef_plus = t.input(std::move(efeat_plus));
    Mat xi_mat(static_cast<int>(xi.size()), 1);
    xi_mat.a = xi;
    const int act_in = t.concat_cols({t.gather_rows(g, rep_robot),
                                      t.gather_rows(h1, cur_rows),
                                      t.gather_rows(h1, cand_rows),
                                      t.gather_rows(ef_plus, edge_rows),
                                      t.input(std::move(xi_mat))});
    fwd.scores_node = mlp(act_in, net.scorer);

    const int aux_in = t.concat_cols({g, t.gather_rows(h1, sample.cur)});
    fwd.move_logits_node = mlp(aux_in, net.move_head);
    return fwd;
}

namespace {

LossParts compute_loss(const ForwardPass& fwd, const GraphSample& sample,
                       double move_emphasis, double aux_weight, Mat* score_grad,
                       Mat* logit_grad, double grad_scale) {
    const int n = sample.num_robots;
    const Mat& scores = fwd.tape->val(fwd.scores_node);
    const Mat& logits = fwd.tape->val(fwd.move_logits_node);
    const double inv_n = 1.0 / static_cast<double>(n);

    double ce_sum = 0.0;
    double bce_sum = 0.0;
    for (int r = 0; r < n; ++r) {
        const int o0 = fwd.cand_offset[r];
        const int o1 = fwd.cand_offset[r + 1];
        int label_pos = -1;
        double mx = scores.a[o0];
        for (int k = o0; k < o1; ++k) {
            if (fwd.cand_team[k] == sample.label[r]) label_pos = k;
            mx = std::max(mx, scores.a[k]);
        }
        if (label_pos < 0)
            throw std::runtime_error("loss: label of robot " + std::to_string(r) +
                                     " is not a feasible candidate");
        double z = 0.0;
        for (int k = o0; k < o1; ++k) z += std::exp(scores.a[k] - mx);
        const bool is_move = sample.label_is_move(r);
        const double w = is_move ? move_emphasis : 1.0;
        ce_sum += w * (std::log(z) - (scores.a[label_pos] - mx));
        if (score_grad) {
            for (int k = o0; k < o1; ++k) {
                const double p = std::exp(scores.a[k] - mx) / z;
                const double delta = (k == label_pos) ? 1.0 : 0.0;
                score_grad->a[k] += grad_scale * w * (p - delta) * inv_n;
            }
        }

        const double zlog = logits.a[r];
        const double tgt = is_move ? 1.0 : 0.0;
        bce_sum += std::max(zlog, 0.0) - zlog * tgt + std::log1p(std::exp(-std::abs(zlog)));
        if (logit_grad) {
            const double sig = 1.0 / (1.0 + std::exp(-zlog));
            logit_grad->a[r] += grad_scale * aux_weight * (sig - tgt) * inv_n;
        }
    }

    LossParts parts;
    parts.cross_entropy = ce_sum * inv_n;
    parts.move_stay_bce = bce_sum * inv_n;
    parts.total = parts.cross_entropy + aux_weight * parts.move_stay_bce;
    return parts;
}

}  // namespace

LossParts policy_loss(const ForwardPass& fwd, const GraphSample& sample,
                      double move_emphasis, double aux_weight) {
    return compute_loss(fwd, sample, move_emphasis, aux_weight, nullptr, nullptr, 0.0);
}

LossParts policy_loss_backward(ForwardPass& fwd, const GraphSample& sample,
                               double move_emphasis, double aux_weight,
                               double grad_scale) {
    Mat& sg = fwd.tape->grad(fwd.scores_node);
    Mat& lg = fwd.tape->grad(fwd.move_logits_node);
    const LossParts parts =
        compute_loss(fwd, sample, move_emphasis, aux_weight, &sg, &lg, grad_scale);
    fwd.tape->backward();
    return parts;
}

}  // namespace altro::nn
