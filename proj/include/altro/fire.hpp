#pragma once

#include <cstdint>
#include <vector>

#include "altro/assignment.hpp"
#include "altro/core.hpp"
#include "altro/geometry.hpp"
#include "altro/rng.hpp"
#include "altro/robot.hpp"

namespace altro {

// Axis-aligned rectangular team region discretized into a uniform
// grid_resolution x grid_resolution cell grid with midpoint quadrature.
struct TeamRegion {
    Vec2 origin;                // lower-left corner, meters
    double width = 1.0;
    double height = 1.0;
    int grid_resolution = 16;   // cells per side

    double cell_w() const { return width / grid_resolution; }
    double cell_h() const { return height / grid_resolution; }
    double cell_area() const { return cell_w() * cell_h(); }
    int num_cells() const { return grid_resolution * grid_resolution; }

    Vec2 cell_center(int index) const {
        const int ix = index % grid_resolution;
        const int iy = index / grid_resolution;
        return {origin.x + (ix + 0.5) * cell_w(), origin.y + (iy + 0.5) * cell_h()};
    }

    void validate() const;  // grid >= 4x4, positive extent
};

// Piecewise-constant fire intensity per cell, row-major.
struct DensityField {
    int resolution = 0;
    double cell_area = 0.0;
    std::vector<double> values;

    double total() const {  // integral over the region
        double s = 0.0;
        for (double v : values) s += v;
        return s * cell_area;
    }
};

struct CoverageConfig {
    int lloyd_max_iters = 200;
    double lloyd_tol = 1e-4;  // meters of centroid displacement
    double sigmoid_a = 1.0;
    double sigmoid_b = 0.0;
};

struct FireDynamicsConfig {
    double eta = 1.0;  // decay-rate scale
    double dt = 1.0;   // seconds per iteration
};

struct LloydResult {
    std::vector<Vec2> positions;
    int iterations = 0;
    bool converged = false;
    double initial_cost = 0.0;
    double final_cost = 0.0;
};

// Density-weighted sum of squared distances from cell centers to their
// nearest position (ties to the lowest index); zero for empty input.
double locational_cost(const std::vector<Vec2>& positions, const TeamRegion& region,
                       const DensityField& density);

// Lloyd's algorithm on the cell grid from a seeded jittered-grid start.
// An identically-zero density is replaced by a uniform one.
LloydResult lloyd_cvt(const TeamRegion& region, const DensityField& density,
                      int n_sensors, const CoverageConfig& config, uint64_t seed);

// Sigmoid of inverse locational cost; exactly 0 without sensors and
// exactly 1 at perfect coverage (L = 0).
double sensing_effectiveness(int n_sensing, double loc_cost,
                             const CoverageConfig& config);

// Sum of suppression capacities over the set's fire-fighting robots.
double fire_power(const std::vector<int>& robot_set, const std::vector<Robot>& robots);

// Every cell scaled by exp(-power * psi * dt / eta).
DensityField decay_density(const DensityField& density, double power, double psi,
                           const FireDynamicsConfig& config);

// 1-3 Gaussian blobs with peak intensity in [0.5, 2.0].
DensityField sample_density_blobs(const TeamRegion& region, Rng& rng);

// Owns the evolving per-team fire fields plus the per-step caches needed
// for feature encoding and fast set evaluation. Coverage solutions are
// computed eagerly per (team, sensing count) whenever the density
// changes, so mission_value is a pure read.
class FireMissionState {
public:
    struct TeamCache {
        double total_fire = 0.0;
        double loc_cost = 0.0;
        double psi = 0.0;
        double power = 0.0;
        int n_sensing = 0;
        int n_fighting = 0;
    };

    FireMissionState(std::vector<TeamRegion> regions, std::vector<DensityField> density,
                     CoverageConfig coverage, FireDynamicsConfig dynamics,
                     uint64_t base_seed, int max_sensing);

    int num_teams() const { return static_cast<int>(regions_.size()); }
    const TeamRegion& region(int v) const { return regions_[v]; }
    const DensityField& density(int v) const { return density_[v]; }
    const CoverageConfig& coverage() const { return coverage_; }
    const FireDynamicsConfig& dynamics() const { return dynamics_; }
    uint64_t version() const { return version_; }

    double total_fire(int v) const { return team_total_[v]; }
    double total_fire() const;
    double psi_for_count(int v, int n_sensing) const;
    double loc_cost_for_count(int v, int n_sensing) const;

    // Hypothetical next-step value for a candidate set: minus the integral
    // of the decayed field. Does not mutate state.
    double mission_value(int team, const std::vector<int>& robot_set,
                         const std::vector<Robot>& robots) const;

    // Recompute the per-team caches (L, psi, power, counts) for the given
    // assignment against the current fields.
    void refresh(const Assignment& assignment, const std::vector<Robot>& robots);

    // Commit one decay step using each team's actual assigned set, then
    // rebuild coverage tables and caches for the new fields.
    void advance(const Assignment& assignment, const std::vector<Robot>& robots);

    const TeamCache& cache(int v) const { return cache_[v]; }

private:
    void rebuild_psi_tables();

    std::vector<TeamRegion> regions_;
    std::vector<DensityField> density_;
    CoverageConfig coverage_;
    FireDynamicsConfig dynamics_;
    uint64_t base_seed_ = 0;
    int max_sensing_ = 0;
    uint64_t version_ = 0;

    std::vector<double> team_total_;               // integral of each field
    std::vector<std::vector<double>> psi_table_;   // [team][sensing count]
    std::vector<std::vector<double>> loc_table_;   // [team][sensing count]
    std::vector<TeamCache> cache_;
};

// MissionOracle view over a FireMissionState.
class FireOracle : public MissionOracle {
public:
    FireOracle(const FireMissionState& state, const std::vector<Robot>& robots)
        : state_(&state), robots_(&robots) {}

    double evaluate(int team, const std::vector<int>& robot_set) const override {
        return state_->mission_value(team, robot_set, *robots_);
    }

private:
    const FireMissionState* state_;
    const std::vector<Robot>* robots_;
};

}  // namespace altro
