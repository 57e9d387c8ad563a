#include "altro/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "altro/rng.hpp"
#include "altro/solver.hpp"

namespace altro {

using nlohmann::json;

namespace {

// Team positions on a shuffled jittered grid; cell pitch keeps any two
// positions at least min_separation apart.
std::vector<Vec2> sample_positions(int m, double min_sep, Rng& rng) {
    const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
    const double pitch = 1.4 * min_sep;
    std::vector<int> cells(static_cast<size_t>(side) * side);
    for (size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
    rng.shuffle(cells);
    std::vector<Vec2> pos;
    pos.reserve(m);
    for (int k = 0; k < m; ++k) {
        const int cx = cells[k] % side;
        const int cy = cells[k] / side;
        pos.push_back({(cx + 0.5) * pitch + rng.uniform(-0.2, 0.2) * min_sep,
                       (cy + 0.5) * pitch + rng.uniform(-0.2, 0.2) * min_sep});
    }
    return pos;
}

std::vector<std::pair<int, int>> sample_connected_edges(int m, double extra_prob,
                                                        Rng& rng) {
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < m; ++v) edges.emplace_back(rng.uniform_int(0, v - 1), v);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            if (std::find(edges.begin(), edges.end(), std::make_pair(i, j)) != edges.end())
                continue;
            if (rng.u01() < extra_prob) edges.emplace_back(i, j);
        }
    return edges;
}

}  // namespace

Instance sample_instance(uint64_t seed, const GenParams& params) {
    Rng rng(splitmix64(seed));
    Instance inst;
    inst.seed = seed;

    const int m = rng.uniform_int(params.teams_min, params.teams_max);
    std::vector<int> team_count(m);
    int n = 0;
    for (int v = 0; v < m; ++v) {
        team_count[v] = rng.uniform_int(params.robots_per_team_min,
                                        params.robots_per_team_max);
        n += team_count[v];
    }

    auto positions = sample_positions(m, params.min_separation, rng);
    auto edges = sample_connected_edges(m, params.extra_edge_prob, rng);
    inst.graph = InteractionGraph::build(m, std::move(edges), std::move(positions));

    inst.weights.w.resize(m);
    for (int v = 0; v < m; ++v)
        inst.weights.w[v] = rng.uniform(params.weight_min, params.weight_max);

    // Capabilities are re-rolled until one sensing robot per team is
    // achievable.
    std::vector<uint8_t> sensing(n);
    for (int attempt = 0;; ++attempt) {
        int count = 0;
        for (int r = 0; r < n; ++r) {
            sensing[r] = rng.u01() < 0.5 ? 1 : 0;
            count += sensing[r];
        }
        if (count >= m) break;
        if (attempt > 10000)
            throw std::runtime_error("sample_instance: cannot draw enough sensing robots");
    }
    for (int r = 0; r < n; ++r) {
        const double speed = rng.uniform(params.speed_min, params.speed_max);
        if (sensing[r]) {
            inst.robots.push_back(make_sensing_robot(r, speed));
        } else {
            inst.robots.push_back(make_fighting_robot(
                r, speed, rng.uniform(params.capacity_min, params.capacity_max)));
        }
    }

    // Uniform feasible initial assignment with the drawn team sizes:
    // rejection-sample shuffles until every team has a sensing robot.
    std::vector<int> ids(n);
    for (int r = 0; r < n; ++r) ids[r] = r;
    inst.assignment.team_of.assign(n, 0);
    for (int attempt = 0;; ++attempt) {
        rng.shuffle(ids);
        int at = 0;
        for (int v = 0; v < m; ++v)
            for (int k = 0; k < team_count[v]; ++k) inst.assignment.team_of[ids[at++]] = v;
        std::vector<int> sens(m, 0);
        for (int r = 0; r < n; ++r)
            if (sensing[r]) ++sens[inst.assignment.team_of[r]];
        if (std::all_of(sens.begin(), sens.end(), [](int s) { return s > 0; })) break;
        if (attempt > 10000)
            throw std::runtime_error("sample_instance: cannot place sensing robots");
    }

    for (int v = 0; v < m; ++v) {
        TeamRegion reg;
        reg.origin = {inst.graph.team_positions[v].x - params.region_size / 2.0,
                      inst.graph.team_positions[v].y - params.region_size / 2.0};
        reg.width = params.region_size;
        reg.height = params.region_size;
        reg.grid_resolution = params.grid_resolution;
        inst.regions.push_back(reg);
        inst.density.push_back(sample_density_blobs(reg, rng));
    }

    inst.coverage = params.coverage;
    inst.dynamics = params.dynamics;
    inst.alpha = params.alpha;
    inst.lambda = params.lambda;
    inst.validate();
    return inst;
}

std::optional<GraphSample> label_instance(const Instance& instance, double lambda,
                                          double alpha, double timeout_seconds) {
    FireMissionState state = instance.make_fire_state();
    state.refresh(instance.assignment, instance.robots);
    FireOracle oracle(state, instance.robots);

    const auto rule = sensing_departure_rule(instance.robots);
    const HamiltonMask mask = hamilton_mask(instance.graph, instance.weights,
                                            instance.assignment, oracle, rule);

    const SolveResult result =
        solve_one_step(instance.graph, instance.weights, instance.robots,
                       instance.assignment, oracle, mask, lambda, alpha,
                       /*require_sensing=*/true, timeout_seconds);
    if (result.timed_out) return std::nullopt;

    // Candidate mask: Hamilton admissibility intersected with the
    // single-departure structural constraints (already zeroed in the mask,
    // recomputed here so the stored field is self-contained).
    HamiltonMask candidate = mask;
    const auto members = instance.assignment.members(instance.num_teams());
    for (int r = 0; r < instance.num_robots(); ++r) {
        const int i = instance.assignment.team_of[r];
        if (rule(r, i, members[i])) continue;
        for (int j = 0; j < instance.num_teams(); ++j)
            if (j != i) candidate.set(r, j, false);
    }

    GraphSample sample = encode_features(instance.graph, instance.weights, instance.robots,
                                         instance.assignment, state, mask, candidate);
    sample.seed = instance.seed;
    sample.label = result.best_assignment.team_of;
    return sample;
}

namespace {

constexpr const char* kDatasetFormat = "altro-dataset";
constexpr int kDatasetVersion = 1;

}  // namespace

void write_jsonl(const std::string& path, const std::vector<GraphSample>& samples,
                 const FeatureSchema& schema) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    json header{{"format", kDatasetFormat},
                {"version", kDatasetVersion},
                {"schema", schema.to_json()},
                {"count", samples.size()}};
    out << header.dump() << "\n";
    for (const auto& s : samples) out << s.to_json().dump() << "\n";
}

std::vector<GraphSample> read_jsonl(const std::string& path, FeatureSchema* schema_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("dataset file is empty: " + path);
    const json header = json::parse(line);
    if (header.value("format", "") != kDatasetFormat ||
        header.value("version", -1) != kDatasetVersion)
        throw std::runtime_error("unrecognized dataset header in " + path);
    if (schema_out) *schema_out = FeatureSchema::from_json(header.at("schema"));
    std::vector<GraphSample> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        samples.push_back(GraphSample::from_json(json::parse(line)));
    }
    return samples;
}

json DatasetManifest::to_json() const {
    json j;
    j["num_samples"] = num_samples;
    j["team_histogram"] = json::object();
    for (const auto& [k, v] : team_histogram) j["team_histogram"][std::to_string(k)] = v;
    j["robot_histogram"] = json::object();
    for (const auto& [k, v] : robot_histogram) j["robot_histogram"][std::to_string(k)] = v;
    j["skip_histogram"] = json::object();
    for (const auto& [k, v] : skip_histogram) j["skip_histogram"][std::to_string(k)] = v;
    j["stay_labels"] = stay_labels;
    j["move_labels"] = move_labels;
    j["move_fraction"] = move_fraction();
    j["train_size"] = train_size;
    j["val_size"] = val_size;
    j["test_size"] = test_size;
    j["schema"] = schema.to_json();
    j["normalization"] = normalization.to_json();
    j["normalization_source"] = normalization_source;
    return j;
}

DatasetManifest DatasetManifest::from_json(const json& j) {
    DatasetManifest man;
    man.num_samples = j.at("num_samples").get<int>();
    for (const auto& [k, v] : j.at("team_histogram").items())
        man.team_histogram[std::stoi(k)] = v.get<int>();
    for (const auto& [k, v] : j.at("robot_histogram").items())
        man.robot_histogram[std::stoi(k)] = v.get<int>();
    for (const auto& [k, v] : j.at("skip_histogram").items())
        man.skip_histogram[std::stoi(k)] = v.get<int>();
    man.stay_labels = j.at("stay_labels").get<long>();
    man.move_labels = j.at("move_labels").get<long>();
    man.train_size = j.at("train_size").get<int>();
    man.val_size = j.at("val_size").get<int>();
    man.test_size = j.at("test_size").get<int>();
    man.schema = FeatureSchema::from_json(j.at("schema"));
    man.normalization = NormStats::from_json(j.at("normalization"));
    man.normalization_source = j.at("normalization_source").get<std::string>();
    return man;
}

DatasetManifest generate_dataset(const GenConfig& config) {
    DatasetManifest man;

    std::vector<GraphSample> samples;
    samples.reserve(config.num_samples);
    for (int i = 0; i < config.num_samples; ++i) {
        bool done = false;
        // Timed-out instances are skipped and replaced from a per-slot
        // attempt stream, keeping the dataset independent of scheduling.
        for (int attempt = 0; attempt < 200 && !done; ++attempt) {
            const uint64_t seed = mix64(config.seed, static_cast<uint64_t>(i),
                                        static_cast<uint64_t>(attempt));
            const Instance inst = sample_instance(seed, config.params);
            auto labeled = label_instance(inst, config.params.lambda,
                                          config.params.alpha, config.timeout_seconds);
            if (labeled) {
                samples.push_back(std::move(*labeled));
                done = true;
            } else {
                ++man.skip_histogram[inst.num_teams()];
            }
        }
        if (!done)
            throw std::runtime_error("generate_dataset: sample slot " + std::to_string(i) +
                                     " timed out repeatedly");
    }

    man.num_samples = static_cast<int>(samples.size());
    for (const auto& s : samples) {
        ++man.team_histogram[s.num_teams];
        ++man.robot_histogram[s.num_robots];
        for (int r = 0; r < s.num_robots; ++r) {
            if (s.label_is_move(r)) ++man.move_labels;
            else ++man.stay_labels;
        }
    }
    for (const auto& [teams, skipped] : man.skip_histogram) {
        const int kept = man.team_histogram.count(teams) ? man.team_histogram[teams] : 0;
        if (skipped > kept)
            throw std::runtime_error("generate_dataset: timeout skip rate above 50% for " +
                                     std::to_string(teams) + " teams");
    }

    // 80/10/10 split stratified by team count; normalization statistics are
    // computed from the training split only.
    std::map<int, std::vector<size_t>> by_teams;
    for (size_t i = 0; i < samples.size(); ++i) by_teams[samples[i].num_teams].push_back(i);

    Rng split_rng(mix64(config.seed, 0x5941177ULL));
    std::vector<size_t> train_idx, val_idx, test_idx;
    const double test_frac = 1.0 - config.train_frac - config.val_frac;
    for (auto& [teams, idx] : by_teams) {
        split_rng.shuffle(idx);
        const size_t g = idx.size();
        const size_t n_val = static_cast<size_t>(g * config.val_frac + 0.5);
        const size_t n_test = static_cast<size_t>(g * test_frac + 0.5);
        size_t at = 0;
        for (size_t k = 0; k < n_val && at < g; ++k) val_idx.push_back(idx[at++]);
        for (size_t k = 0; k < n_test && at < g; ++k) test_idx.push_back(idx[at++]);
        while (at < g) train_idx.push_back(idx[at++]);
    }
    split_rng.shuffle(train_idx);
    split_rng.shuffle(val_idx);
    split_rng.shuffle(test_idx);

    auto collect = [&](const std::vector<size_t>& idx) {
        std::vector<GraphSample> out;
        out.reserve(idx.size());
        for (size_t i : idx) out.push_back(samples[i]);
        return out;
    };
    const auto train = collect(train_idx);
    const auto val = collect(val_idx);
    const auto test = collect(test_idx);

    man.train_size = static_cast<int>(train.size());
    man.val_size = static_cast<int>(val.size());
    man.test_size = static_cast<int>(test.size());
    man.normalization = NormStats::compute(train, man.schema);

    write_jsonl(config.out_dir + "/train.jsonl", train, man.schema);
    write_jsonl(config.out_dir + "/val.jsonl", val, man.schema);
    write_jsonl(config.out_dir + "/test.jsonl", test, man.schema);
    std::ofstream mf(config.out_dir + "/manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest in " + config.out_dir);
    mf << man.to_json().dump(2) << "\n";
    return man;
}

}  // namespace altro
