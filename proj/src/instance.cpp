#include "altro/instance.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace altro {

using nlohmann::json;

int Instance::total_sensing() const {
    int n = 0;
    for (const auto& r : robots)
        if (r.is_sensing()) ++n;
    return n;
}

FireMissionState Instance::make_fire_state() const {
    return FireMissionState(regions, density, coverage, dynamics, seed, total_sensing());
}

void Instance::validate() const {
    graph.validate();
    weights.validate();
    if (static_cast<int>(weights.w.size()) != graph.num_teams)
        throw std::invalid_argument("instance: weights size mismatch");
    if (static_cast<int>(regions.size()) != graph.num_teams ||
        static_cast<int>(density.size()) != graph.num_teams)
        throw std::invalid_argument("instance: mission params size mismatch");
    for (const auto& reg : regions) reg.validate();
    for (size_t v = 0; v < density.size(); ++v) {
        if (static_cast<int>(density[v].values.size()) != regions[v].num_cells())
            throw std::invalid_argument("instance: density grid size mismatch");
        for (double x : density[v].values)
            if (!(x >= 0.0)) throw std::invalid_argument("instance: negative fire density");
    }
    for (size_t r = 0; r < robots.size(); ++r) {
        if (robots[r].id != static_cast<int>(r))
            throw std::invalid_argument("instance: robot ids must be 0..N-1 in order");
        if (!(robots[r].speed > 0.0))
            throw std::invalid_argument("instance: robot speed must be positive");
        int caps = 0;
        for (uint8_t c : robots[r].capability) caps += c;
        if (caps != 1)
            throw std::invalid_argument("instance: robot must have exactly one capability");
    }
    validate_assignment(assignment, graph.num_teams, robots, /*require_sensing=*/true);
}

json Instance::to_json() const {
    json j;
    j["teams"] = graph.num_teams;
    j["edges"] = json::array();
    for (const auto& [a, b] : graph.edges) j["edges"].push_back({a, b});
    j["positions"] = json::array();
    for (const auto& p : graph.team_positions) j["positions"].push_back({p.x, p.y});
    j["weights"] = weights.w;
    j["robots"] = json::array();
    for (const auto& r : robots) {
        j["robots"].push_back({{"id", r.id},
                               {"capability", r.capability},
                               {"speed", r.speed},
                               {"capacity", r.capacity}});
    }
    j["assignment"] = assignment.team_of;

    json mp;
    mp["regions"] = json::array();
    for (const auto& reg : regions) {
        mp["regions"].push_back({{"origin", {reg.origin.x, reg.origin.y}},
                                 {"width", reg.width},
                                 {"height", reg.height},
                                 {"grid_resolution", reg.grid_resolution}});
    }
    mp["density"] = json::array();
    for (const auto& d : density) mp["density"].push_back(d.values);
    mp["coverage"] = {{"lloyd_max_iters", coverage.lloyd_max_iters},
                      {"lloyd_tol", coverage.lloyd_tol},
                      {"sigmoid_a", coverage.sigmoid_a},
                      {"sigmoid_b", coverage.sigmoid_b}};
    mp["dynamics"] = {{"eta", dynamics.eta}, {"dt", dynamics.dt}};
    mp["alpha"] = alpha;
    mp["lambda"] = lambda;
    mp["seed"] = seed;
    j["mission_params"] = mp;
    return j;
}

Instance Instance::from_json(const json& j) {
    Instance inst;
    const int m = j.at("teams").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0), e.at(1));
    std::vector<Vec2> positions;
    for (const auto& p : j.at("positions")) positions.push_back({p.at(0), p.at(1)});
    inst.graph = InteractionGraph::build(m, std::move(edges), std::move(positions));
    inst.weights.w = j.at("weights").get<std::vector<double>>();
    for (const auto& rj : j.at("robots")) {
        Robot r;
        r.id = rj.at("id").get<int>();
        r.capability = rj.at("capability").get<std::vector<uint8_t>>();
        r.speed = rj.at("speed").get<double>();
        r.capacity = rj.at("capacity").get<double>();
        inst.robots.push_back(std::move(r));
    }
    inst.assignment.team_of = j.at("assignment").get<std::vector<int>>();

    const auto& mp = j.at("mission_params");
    for (const auto& rj : mp.at("regions")) {
        TeamRegion reg;
        reg.origin = {rj.at("origin").at(0), rj.at("origin").at(1)};
        reg.width = rj.at("width").get<double>();
        reg.height = rj.at("height").get<double>();
        reg.grid_resolution = rj.at("grid_resolution").get<int>();
        inst.regions.push_back(reg);
    }
    for (size_t v = 0; v < mp.at("density").size(); ++v) {
        DensityField d;
        d.resolution = inst.regions[v].grid_resolution;
        d.cell_area = inst.regions[v].cell_area();
        d.values = mp.at("density").at(v).get<std::vector<double>>();
        inst.density.push_back(std::move(d));
    }
    const auto& cov = mp.at("coverage");
    inst.coverage.lloyd_max_iters = cov.at("lloyd_max_iters").get<int>();
    inst.coverage.lloyd_tol = cov.at("lloyd_tol").get<double>();
    inst.coverage.sigmoid_a = cov.at("sigmoid_a").get<double>();
    inst.coverage.sigmoid_b = cov.at("sigmoid_b").get<double>();
    inst.dynamics.eta = mp.at("dynamics").at("eta").get<double>();
    inst.dynamics.dt = mp.at("dynamics").at("dt").get<double>();
    inst.alpha = mp.at("alpha").get<double>();
    inst.lambda = mp.at("lambda").get<double>();
    inst.seed = mp.at("seed").get<uint64_t>();

    inst.validate();
    return inst;
}

void Instance::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << to_json().dump(2) << "\n";
}

Instance Instance::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open instance file: " + path);
    json j;
    in >> j;
    return from_json(j);
}

}  // namespace altro
