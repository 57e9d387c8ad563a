#include "altro/features.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace altro {

using nlohmann::json;

json FeatureSchema::to_json() const {
    return json{{"version", version},
                {"team", team_features},
                {"robot", robot_features},
                {"edge", edge_features},
                {"transfer_descriptor", transfer_descriptor}};
}

FeatureSchema FeatureSchema::from_json(const json& j) {
    FeatureSchema s;
    s.version = j.at("version").get<int>();
    s.team_features = j.at("team").get<std::vector<std::string>>();
    s.robot_features = j.at("robot").get<std::vector<std::string>>();
    s.edge_features = j.at("edge").get<std::vector<std::string>>();
    s.transfer_descriptor = j.at("transfer_descriptor").get<std::string>();
    return s;
}

json GraphSample::to_json() const {
    json j;
    j["meta"] = {{"seed", seed}, {"teams", num_teams}, {"robots", num_robots}};
    j["team_feat"] = team_feat;
    j["robot_feat"] = robot_feat;
    json ej = json::array();
    for (const auto& [a, b] : edges) ej.push_back({a, b});
    j["edges"] = ej;
    j["edge_feat"] = edge_feat;
    j["stay_edge_feat"] = stay_edge_feat;
    j["cur"] = cur;
    j["hamilton_mask"] = hamilton_mask;
    j["candidate_mask"] = candidate_mask;
    j["distance_row"] = distance_row;
    j["label"] = label;
    return j;
}

GraphSample GraphSample::from_json(const json& j) {
    GraphSample s;
    s.seed = j.at("meta").at("seed").get<uint64_t>();
    s.num_teams = j.at("meta").at("teams").get<int>();
    s.num_robots = j.at("meta").at("robots").get<int>();
    s.team_feat = j.at("team_feat").get<std::vector<double>>();
    s.robot_feat = j.at("robot_feat").get<std::vector<double>>();
    for (const auto& e : j.at("edges")) s.edges.emplace_back(e.at(0), e.at(1));
    s.edge_feat = j.at("edge_feat").get<std::vector<double>>();
    s.stay_edge_feat = j.at("stay_edge_feat").get<std::vector<double>>();
    s.cur = j.at("cur").get<std::vector<int>>();
    s.hamilton_mask = j.at("hamilton_mask").get<std::vector<uint8_t>>();
    s.candidate_mask = j.at("candidate_mask").get<std::vector<uint8_t>>();
    s.distance_row = j.at("distance_row").get<std::vector<double>>();
    s.label = j.at("label").get<std::vector<int>>();
    return s;
}

namespace {

void accumulate(const std::vector<double>& mat, int dim, std::vector<double>& sum,
                std::vector<double>& sumsq, size_t& rows) {
    const size_t n = mat.size() / dim;
    for (size_t r = 0; r < n; ++r)
        for (int c = 0; c < dim; ++c) {
            sum[c] += mat[r * dim + c];
            sumsq[c] += mat[r * dim + c] * mat[r * dim + c];
        }
    rows += n;
}

void finalize(const std::vector<double>& sum, const std::vector<double>& sumsq,
              size_t rows, std::vector<double>& mean, std::vector<double>& stdev,
              std::vector<uint8_t>& constant) {
    const int dim = static_cast<int>(sum.size());
    mean.assign(dim, 0.0);
    stdev.assign(dim, 1.0);
    constant.assign(dim, 0);
    if (rows == 0) return;
    for (int c = 0; c < dim; ++c) {
        mean[c] = sum[c] / static_cast<double>(rows);
        const double var = sumsq[c] / static_cast<double>(rows) - mean[c] * mean[c];
        const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        if (sd > 1e-12) {
            stdev[c] = sd;
        } else {
            constant[c] = 1;  // flagged, left unscaled
        }
    }
}

void normalize(std::vector<double>& mat, int dim, const std::vector<double>& mean,
               const std::vector<double>& stdev) {
    const size_t n = mat.size() / dim;
    for (size_t r = 0; r < n; ++r)
        for (int c = 0; c < dim; ++c)
            mat[r * dim + c] = (mat[r * dim + c] - mean[c]) / stdev[c];
}

}  // namespace

NormStats NormStats::compute(const std::vector<GraphSample>& train,
                             const FeatureSchema& schema) {
    NormStats st;
    const int td = schema.team_dim(), rd = schema.robot_dim(), ed = schema.edge_dim();
    std::vector<double> tsum(td, 0.0), tsq(td, 0.0);
    std::vector<double> rsum(rd, 0.0), rsq(rd, 0.0);
    std::vector<double> esum(ed, 0.0), esq(ed, 0.0);
    double xsum = 0.0, xsq = 0.0;
    size_t trows = 0, rrows = 0, erows = 0, xrows = 0;
    for (const auto& s : train) {
        accumulate(s.team_feat, td, tsum, tsq, trows);
        accumulate(s.robot_feat, rd, rsum, rsq, rrows);
        accumulate(s.edge_feat, ed, esum, esq, erows);
        for (double x : s.distance_row) {
            xsum += x;
            xsq += x * x;
            ++xrows;
        }
    }
    finalize(tsum, tsq, trows, st.team_mean, st.team_std, st.team_constant);
    finalize(rsum, rsq, rrows, st.robot_mean, st.robot_std, st.robot_constant);
    finalize(esum, esq, erows, st.edge_mean, st.edge_std, st.edge_constant);
    if (xrows > 0) {
        st.xi_mean = xsum / static_cast<double>(xrows);
        const double var = xsq / static_cast<double>(xrows) - st.xi_mean * st.xi_mean;
        const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        if (sd > 1e-12) st.xi_std = sd;
        else st.xi_constant = true;
    }
    return st;
}

void NormStats::apply(GraphSample& s) const {
    normalize(s.team_feat, static_cast<int>(team_mean.size()), team_mean, team_std);
    normalize(s.robot_feat, static_cast<int>(robot_mean.size()), robot_mean, robot_std);
    normalize(s.edge_feat, static_cast<int>(edge_mean.size()), edge_mean, edge_std);
    normalize(s.stay_edge_feat, static_cast<int>(edge_mean.size()), edge_mean, edge_std);
    for (double& x : s.distance_row) x = (x - xi_mean) / xi_std;
}

json NormStats::to_json() const {
    return json{{"team_mean", team_mean},   {"team_std", team_std},
                {"robot_mean", robot_mean}, {"robot_std", robot_std},
                {"edge_mean", edge_mean},   {"edge_std", edge_std},
                {"xi_mean", xi_mean},       {"xi_std", xi_std},
                {"team_constant", team_constant},
                {"robot_constant", robot_constant},
                {"edge_constant", edge_constant},
                {"xi_constant", xi_constant}};
}

NormStats NormStats::from_json(const json& j) {
    NormStats st;
    st.team_mean = j.at("team_mean").get<std::vector<double>>();
    st.team_std = j.at("team_std").get<std::vector<double>>();
    st.robot_mean = j.at("robot_mean").get<std::vector<double>>();
    st.robot_std = j.at("robot_std").get<std::vector<double>>();
    st.edge_mean = j.at("edge_mean").get<std::vector<double>>();
    st.edge_std = j.at("edge_std").get<std::vector<double>>();
    st.xi_mean = j.at("xi_mean").get<double>();
    st.xi_std = j.at("xi_std").get<double>();
    st.team_constant = j.at("team_constant").get<std::vector<uint8_t>>();
    st.robot_constant = j.at("robot_constant").get<std::vector<uint8_t>>();
    st.edge_constant = j.at("edge_constant").get<std::vector<uint8_t>>();
    st.xi_constant = j.at("xi_constant").get<bool>();
    return st;
}

GraphSample encode_features(const InteractionGraph& graph, const TeamWeights& weights,
                            const std::vector<Robot>& robots, const Assignment& assignment,
                            const FireMissionState& fire,
                            const HamiltonMask& hamilton,
                            const HamiltonMask& candidate) {
    const int m = graph.num_teams;
    const int n = assignment.num_robots();
    GraphSample s;
    s.num_teams = m;
    s.num_robots = n;

    const auto sizes = assignment.team_sizes(m);
    s.team_feat.resize(static_cast<size_t>(m) * 8);
    for (int v = 0; v < m; ++v) {
        const auto& c = fire.cache(v);
        double* f = &s.team_feat[static_cast<size_t>(v) * 8];
        f[0] = weights.w[v];
        f[1] = static_cast<double>(sizes[v]);
        f[2] = static_cast<double>(c.n_sensing);
        f[3] = static_cast<double>(c.n_fighting);
        f[4] = c.total_fire;
        f[5] = c.psi;
        f[6] = c.power;
        f[7] = c.loc_cost;
    }

    s.robot_feat.resize(static_cast<size_t>(n) * 4);
    for (int r = 0; r < n; ++r) {
        double* f = &s.robot_feat[static_cast<size_t>(r) * 4];
        f[0] = robots[r].is_sensing() ? 1.0 : 0.0;
        f[1] = robots[r].is_fighting() ? 1.0 : 0.0;
        f[2] = robots[r].speed;
        f[3] = robots[r].capacity;
    }

    // Both orientations of every undirected edge: the weight ratio is
    // asymmetric.
    for (const auto& [a, b] : graph.edges) {
        s.edges.emplace_back(a, b);
        s.edges.emplace_back(b, a);
    }
    s.edge_feat.resize(s.edges.size() * 5);
    for (size_t e = 0; e < s.edges.size(); ++e) {
        const auto [i, j] = s.edges[e];
        double* f = &s.edge_feat[e * 5];
        f[0] = graph.team_positions[j].x - graph.team_positions[i].x;
        f[1] = graph.team_positions[j].y - graph.team_positions[i].y;
        f[2] = graph.distance(i, j);
        f[3] = relatedness(weights, i, j);
        f[4] = 1.0;
    }
    // Self pair used when scoring the stay action: zero displacement, unit
    // weight ratio, no adjacency.
    s.stay_edge_feat = {0.0, 0.0, 0.0, 1.0, 0.0};

    s.cur = assignment.team_of;
    s.hamilton_mask = hamilton.admissible;
    s.candidate_mask = candidate.admissible;

    s.distance_row.resize(static_cast<size_t>(n) * m);
    for (int r = 0; r < n; ++r)
        for (int v = 0; v < m; ++v)
            s.distance_row[static_cast<size_t>(r) * m + v] =
                graph.distance(assignment.team_of[r], v) / robots[r].speed;

    return s;
}

}  // namespace altro
