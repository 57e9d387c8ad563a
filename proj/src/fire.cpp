#include "altro/fire.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace altro {

void TeamRegion::validate() const {
    if (grid_resolution < 4)
        throw std::invalid_argument("region: grid must be at least 4x4 cells");
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("region: extent must be positive");
}

double locational_cost(const std::vector<Vec2>& positions, const TeamRegion& region,
                       const DensityField& density) {
    if (positions.empty()) return 0.0;
    double cost = 0.0;
    const int cells = region.num_cells();
    for (int c = 0; c < cells; ++c) {
        const double phi = density.values[c];
        if (phi == 0.0) continue;
        const Vec2 q = region.cell_center(c);
        double best = (positions[0] - q).norm2();
        for (size_t i = 1; i < positions.size(); ++i) {
            const double d2 = (positions[i] - q).norm2();
            if (d2 < best) best = d2;  // strict: ties stay with lowest index
        }
        cost += best * phi;
    }
    return cost * density.cell_area;
}

namespace {

// Jittered placement over a near-square layout of the region.
std::vector<Vec2> jittered_grid_init(const TeamRegion& region, int n, uint64_t seed) {
    Rng rng(seed);
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        const int cx = k % cols;
        const int cy = k / cols;
        const double jx = rng.uniform(0.25, 0.75);
        const double jy = rng.uniform(0.25, 0.75);
        pts.push_back({region.origin.x + (cx + jx) * region.width / cols,
                       region.origin.y + (cy + jy) * region.height / rows});
    }
    return pts;
}

}  // namespace

LloydResult lloyd_cvt(const TeamRegion& region, const DensityField& density,
                      int n_sensors, const CoverageConfig& config, uint64_t seed) {
    if (n_sensors < 1) throw std::invalid_argument("lloyd_cvt: need at least one sensor");

    // Zero total mass leaves centroids undefined; fall back to uniform.
    DensityField work = density;
    double mass = 0.0;
    for (double v : work.values) mass += v;
    if (mass == 0.0) std::fill(work.values.begin(), work.values.end(), 1.0);

    LloydResult res;
    res.positions = jittered_grid_init(region, n_sensors, seed);
    res.initial_cost = locational_cost(res.positions, region, work);

    const int cells = region.num_cells();
    std::vector<double> wx(n_sensors), wy(n_sensors), wm(n_sensors);
    for (res.iterations = 0; res.iterations < config.lloyd_max_iters; ++res.iterations) {
        std::fill(wx.begin(), wx.end(), 0.0);
        std::fill(wy.begin(), wy.end(), 0.0);
        std::fill(wm.begin(), wm.end(), 0.0);
        for (int c = 0; c < cells; ++c) {
            const double phi = work.values[c];
            if (phi == 0.0) continue;
            const Vec2 q = region.cell_center(c);
            int owner = 0;
            double best = (res.positions[0] - q).norm2();
            for (int i = 1; i < n_sensors; ++i) {
                const double d2 = (res.positions[i] - q).norm2();
                if (d2 < best) {
                    best = d2;
                    owner = i;
                }
            }
            wx[owner] += phi * q.x;
            wy[owner] += phi * q.y;
            wm[owner] += phi;
        }
        double max_move = 0.0;
        for (int i = 0; i < n_sensors; ++i) {
            if (wm[i] == 0.0) continue;  // empty cell keeps its position
            const Vec2 centroid{wx[i] / wm[i], wy[i] / wm[i]};
            max_move = std::max(max_move, (centroid - res.positions[i]).norm());
            res.positions[i] = centroid;
        }
        if (max_move < config.lloyd_tol) {
            res.converged = true;
            ++res.iterations;
            break;
        }
    }
    res.final_cost = locational_cost(res.positions, region, work);
    return res;
}

double sensing_effectiveness(int n_sensing, double loc_cost,
                             const CoverageConfig& config) {
    if (n_sensing == 0) return 0.0;
    if (loc_cost == 0.0) return 1.0;  // limit of sigma(1/L) as L -> 0+
    return 1.0 / (1.0 + std::exp(-config.sigmoid_a * (1.0 / loc_cost - config.sigmoid_b)));
}

double fire_power(const std::vector<int>& robot_set, const std::vector<Robot>& robots) {
    double p = 0.0;
    for (int r : robot_set)
        if (robots[r].is_fighting()) p += robots[r].capacity;
    return p;
}

DensityField decay_density(const DensityField& density, double power, double psi,
                           const FireDynamicsConfig& config) {
    DensityField out = density;
    const double factor = std::exp(-power * psi * config.dt / config.eta);
    for (double& v : out.values) v *= factor;
    return out;
}

DensityField sample_density_blobs(const TeamRegion& region, Rng& rng) {
    DensityField field;
    field.resolution = region.grid_resolution;
    field.cell_area = region.cell_area();
    field.values.assign(region.num_cells(), 0.0);

    const int blobs = rng.uniform_int(1, 3);
    const double scale = std::min(region.width, region.height);
    for (int b = 0; b < blobs; ++b) {
        const Vec2 center{region.origin.x + rng.uniform(0.2, 0.8) * region.width,
                          region.origin.y + rng.uniform(0.2, 0.8) * region.height};
        const double sigma = rng.uniform(0.10, 0.30) * scale;
        const double peak = rng.uniform(0.5, 2.0);
        for (int c = 0; c < region.num_cells(); ++c) {
            const Vec2 q = region.cell_center(c);
            field.values[c] += peak * std::exp(-(q - center).norm2() / (2.0 * sigma * sigma));
        }
    }
    return field;
}

FireMissionState::FireMissionState(std::vector<TeamRegion> regions,
                                   std::vector<DensityField> density,
                                   CoverageConfig coverage, FireDynamicsConfig dynamics,
                                   uint64_t base_seed, int max_sensing)
    : regions_(std::move(regions)),
      density_(std::move(density)),
      coverage_(coverage),
      dynamics_(dynamics),
      base_seed_(base_seed),
      max_sensing_(max_sensing) {
    if (regions_.size() != density_.size())
        throw std::invalid_argument("fire state: regions/density size mismatch");
    cache_.assign(regions_.size(), {});
    rebuild_psi_tables();
}

double FireMissionState::total_fire() const {
    double s = 0.0;
    for (double t : team_total_) s += t;
    return s;
}

double FireMissionState::psi_for_count(int v, int n_sensing) const {
    if (n_sensing <= 0) return 0.0;
    const auto& tab = psi_table_[v];
    const int idx = std::min(n_sensing, static_cast<int>(tab.size()) - 1);
    return tab[idx];
}

double FireMissionState::loc_cost_for_count(int v, int n_sensing) const {
    if (n_sensing <= 0) return 0.0;
    const auto& tab = loc_table_[v];
    const int idx = std::min(n_sensing, static_cast<int>(tab.size()) - 1);
    return tab[idx];
}

double FireMissionState::mission_value(int team, const std::vector<int>& robot_set,
                                       const std::vector<Robot>& robots) const {
    int n_sensing = 0;
    double power = 0.0;
    for (int r : robot_set) {
        if (robots[r].is_sensing()) ++n_sensing;
        else if (robots[r].is_fighting()) power += robots[r].capacity;
    }
    const double psi = psi_for_count(team, n_sensing);
    const double factor = std::exp(-power * psi * dynamics_.dt / dynamics_.eta);
    return -team_total_[team] * factor;
}

void FireMissionState::refresh(const Assignment& assignment,
                               const std::vector<Robot>& robots) {
    const auto members = assignment.members(num_teams());
    for (int v = 0; v < num_teams(); ++v) {
        TeamCache& c = cache_[v];
        c.n_sensing = 0;
        c.n_fighting = 0;
        c.power = 0.0;
        for (int r : members[v]) {
            if (robots[r].is_sensing()) ++c.n_sensing;
            if (robots[r].is_fighting()) {
                ++c.n_fighting;
                c.power += robots[r].capacity;
            }
        }
        c.total_fire = team_total_[v];
        c.loc_cost = loc_cost_for_count(v, c.n_sensing);
        c.psi = psi_for_count(v, c.n_sensing);
    }
}

void FireMissionState::advance(const Assignment& assignment,
                               const std::vector<Robot>& robots) {
    refresh(assignment, robots);
    for (int v = 0; v < num_teams(); ++v) {
        density_[v] = decay_density(density_[v], cache_[v].power, cache_[v].psi, dynamics_);
    }
    ++version_;
    rebuild_psi_tables();
    refresh(assignment, robots);
}

void FireMissionState::rebuild_psi_tables() {
    const int m = num_teams();
    team_total_.assign(m, 0.0);
    psi_table_.assign(m, {});
    loc_table_.assign(m, {});
    for (int v = 0; v < m; ++v) {
        team_total_[v] = density_[v].total();
        auto& psi = psi_table_[v];
        auto& loc = loc_table_[v];
        psi.assign(max_sensing_ + 1, 0.0);
        loc.assign(max_sensing_ + 1, 0.0);
        for (int n = 1; n <= max_sensing_; ++n) {
            const uint64_t seed = mix64(base_seed_, static_cast<uint64_t>(v),
                                        static_cast<uint64_t>(n));
            const auto cvt = lloyd_cvt(regions_[v], density_[v], n, coverage_, seed);
            loc[n] = cvt.final_cost;
            psi[n] = sensing_effectiveness(n, cvt.final_cost, coverage_);
        }
    }
}

}  // namespace altro
