#include "altro/sim.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "altro/features.hpp"
#include "altro/rng.hpp"

namespace altro {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const char* to_string(TerminalReason r) {
    switch (r) {
        case TerminalReason::kNoTransfers: return "no-transfers";
        case TerminalReason::kFireExtinguished: return "fire-extinguished";
        case TerminalReason::kMaxSteps: return "max-steps";
    }
    return "unknown";
}

InferStepResult infer_step(const InteractionGraph& graph, const TeamWeights& weights,
                           const std::vector<Robot>& robots, const Assignment& assignment,
                           FireMissionState& fire, nn::PolicyNet& net,
                           const NormStats& stats) {
    fire.refresh(assignment, robots);
    FireOracle oracle(fire, robots);
    const auto rule = sensing_departure_rule(robots);
    const HamiltonMask mask = hamilton_mask(graph, weights, assignment, oracle, rule);

    GraphSample sample =
        encode_features(graph, weights, robots, assignment, fire, mask, mask);
    stats.apply(sample);

    nn::ForwardPass fwd = nn::policy_forward(net, sample, /*train_mode=*/false, 0.0, 0);

    // Proposals: robots whose best candidate is a move, grouped by source.
    struct Proposal {
        int robot;
        int dst;
        double score;
    };
    const int m = graph.num_teams;
    std::vector<std::vector<Proposal>> by_team(m);
    for (int r = 0; r < assignment.num_robots(); ++r) {
        const int pred = fwd.predicted_team(r);
        if (pred == assignment.team_of[r]) continue;
        double score = 0.0;
        for (int k = fwd.cand_offset[r]; k < fwd.cand_offset[r + 1]; ++k)
            if (fwd.cand_team[k] == pred) score = fwd.score(k);
        by_team[assignment.team_of[r]].push_back({r, pred, score});
    }

    // Teams in ascending id; proposals in descending score (ties: robot id).
    // A transfer is accepted when the source stays nonempty with a sensing
    // robot, counting departures already accepted this round.
    InferStepResult out;
    out.next = assignment;
    const auto counts = assignment.team_sizes(m);
    std::vector<int> sens(m, 0);
    for (int r = 0; r < assignment.num_robots(); ++r)
        if (robots[r].is_sensing()) ++sens[assignment.team_of[r]];

    for (int i = 0; i < m; ++i) {
        auto& props = by_team[i];
        std::sort(props.begin(), props.end(), [](const Proposal& a, const Proposal& b) {
            if (a.score != b.score) return a.score > b.score;
            return a.robot < b.robot;
        });
        int departures = 0;
        int sens_departures = 0;
        for (const auto& p : props) {
            const bool sensing = robots[p.robot].is_sensing();
            if (counts[i] - departures < 2) continue;
            if (sensing && sens[i] - sens_departures < 2) continue;
            ++departures;
            if (sensing) ++sens_departures;
            out.next.team_of[p.robot] = p.dst;
            out.accepted.push_back({p.robot, i, p.dst});
        }
    }
    validate_assignment(out.next, m, robots, /*require_sensing=*/true);
    return out;
}

EpisodeLog run_episode(const Instance& instance, nn::PolicyNet& net,
                       const NormStats& stats, const EpisodeConfig& cfg) {
    const auto episode_start = Clock::now();
    FireMissionState fire = instance.make_fire_state();
    Assignment assignment = instance.assignment;

    EpisodeLog log;
    log.initial_fire = fire.total_fire();
    const double eps = cfg.fire_eps_frac * log.initial_fire;

    std::vector<double> totals{log.initial_fire};
    int consecutive_idle = 0;

    for (int step = 1; step <= cfg.max_steps; ++step) {
        const auto t0 = Clock::now();
        InferStepResult res =
            infer_step(instance.graph, instance.weights, instance.robots, assignment,
                       fire, net, stats);
        assignment = res.next;

        // Capture the coverage values the decay commit will use.
        fire.refresh(assignment, instance.robots);
        StepLog sl;
        sl.step = step;
        sl.assignment = assignment;
        sl.accepted = res.accepted;
        for (int v = 0; v < instance.num_teams(); ++v) {
            const auto& c = fire.cache(v);
            sl.team_psi.push_back(c.psi);
            sl.team_power.push_back(c.power);
            sl.team_loc.push_back(c.loc_cost);
        }
        fire.advance(assignment, instance.robots);
        for (int v = 0; v < instance.num_teams(); ++v)
            sl.team_fire.push_back(fire.total_fire(v));
        sl.total_fire = fire.total_fire();
        sl.wall_seconds =
            std::max(1e-9, std::chrono::duration<double>(Clock::now() - t0).count());
        log.steps.push_back(std::move(sl));

        totals.push_back(fire.total_fire());
        consecutive_idle = res.accepted.empty() ? consecutive_idle + 1 : 0;

        if (totals.back() < eps) {
            log.reason = TerminalReason::kFireExtinguished;
            break;
        }
        const size_t k = totals.size() - 1;
        if (consecutive_idle >= 3 &&
            totals[k - 3] - totals[k] <= 1e-9 * std::max(log.initial_fire, 1e-300)) {
            log.reason = TerminalReason::kNoTransfers;
            break;
        }
        log.reason = TerminalReason::kMaxSteps;
    }

    log.final_fire = fire.total_fire();
    log.total_seconds = std::chrono::duration<double>(Clock::now() - episode_start).count();
    return log;
}

json EpisodeLog::to_json() const {
    json j;
    j["reason"] = to_string(reason);
    j["initial_fire"] = initial_fire;
    j["final_fire"] = final_fire;
    j["total_seconds"] = total_seconds;
    j["steps"] = json::array();
    for (const auto& s : steps) {
        json t;
        t["step"] = s.step;
        t["assignment"] = s.assignment.team_of;
        t["accepted"] = json::array();
        for (const auto& a : s.accepted)
            t["accepted"].push_back({{"robot", a.robot}, {"src", a.src}, {"dst", a.dst}});
        t["team_fire"] = s.team_fire;
        t["total_fire"] = s.total_fire;
        t["wall_seconds"] = s.wall_seconds;
        j["steps"].push_back(std::move(t));
    }
    return j;
}

void EpisodeLog::write_steps_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write episode csv: " + path);
    out << "step,team,total_fire,psi,power,L\n";
    for (const auto& s : steps)
        for (size_t v = 0; v < s.team_fire.size(); ++v)
            out << s.step << ',' << v << ',' << s.team_fire[v] << ',' << s.team_psi[v]
                << ',' << s.team_power[v] << ',' << s.team_loc[v] << "\n";
}

std::vector<BenchRow> run_bench(const std::vector<int>& team_counts, int robots_per_team,
                                double exact_timeout_seconds, nn::PolicyNet* net,
                                const NormStats* stats, uint64_t seed,
                                const GenParams& params, const EpisodeConfig& episode) {
    std::vector<BenchRow> rows;
    for (int m : team_counts) {
        GenParams p = params;
        p.teams_min = p.teams_max = m;
        p.robots_per_team_min = p.robots_per_team_max = robots_per_team;
        const Instance inst = sample_instance(mix64(seed, static_cast<uint64_t>(m)), p);

        {
            // Iterative exact baseline: one-step solves applied until the
            // unchanged assignment wins, fire advancing between steps.
            BenchRow row;
            row.teams = m;
            row.robots = inst.num_robots();
            row.method = "exact";
            const auto start = Clock::now();
            const auto deadline =
                start + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(exact_timeout_seconds));
            FireMissionState fire = inst.make_fire_state();
            Assignment assignment = inst.assignment;
            const double eps = episode.fire_eps_frac * fire.total_fire();
            for (int step = 1; step <= episode.max_steps; ++step) {
                const double remaining =
                    std::chrono::duration<double>(deadline - Clock::now()).count();
                if (remaining <= 0.0) {
                    row.timed_out = true;
                    break;
                }
                fire.refresh(assignment, inst.robots);
                FireOracle oracle(fire, inst.robots);
                const HamiltonMask mask =
                    hamilton_mask(inst.graph, inst.weights, assignment, oracle,
                                  sensing_departure_rule(inst.robots));
                const SolveResult res = solve_one_step(
                    inst.graph, inst.weights, inst.robots, assignment, oracle, mask,
                    inst.lambda, inst.alpha, /*require_sensing=*/true, remaining);
                if (res.timed_out) {
                    row.timed_out = true;
                    break;
                }
                ++row.steps;
                const bool changed = !(res.best_assignment == assignment);
                assignment = res.best_assignment;
                fire.advance(assignment, inst.robots);
                if (!changed || fire.total_fire() < eps) break;
            }
            row.total_seconds =
                std::chrono::duration<double>(Clock::now() - start).count();
            row.mean_step_seconds = row.total_seconds / std::max(1, row.steps);
            rows.push_back(std::move(row));
        }

        if (net != nullptr && stats != nullptr) {
            BenchRow row;
            row.teams = m;
            row.robots = inst.num_robots();
            row.method = "gnn";
            const EpisodeLog log = run_episode(inst, *net, *stats, episode);
            row.total_seconds = log.total_seconds;
            row.steps = static_cast<int>(log.steps.size());
            row.mean_step_seconds = row.total_seconds / std::max(1, row.steps);
            row.timed_out = false;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write bench csv: " + path);
    out << "teams,robots,method,total_seconds,mean_step_seconds,steps,timed_out\n";
    for (const auto& r : rows)
        out << r.teams << ',' << r.robots << ',' << r.method << ',' << r.total_seconds
            << ',' << r.mean_step_seconds << ',' << r.steps << ','
            << (r.timed_out ? 1 : 0) << "\n";
}

GapReport compare_with_exact(const std::vector<Instance>& instances, nn::PolicyNet& net,
                             const NormStats& stats, double lambda, double alpha) {
    GapReport report;
    double identical_sum = 0.0;
    for (const Instance& inst : instances) {
        FireMissionState fire = inst.make_fire_state();
        fire.refresh(inst.assignment, inst.robots);
        FireOracle oracle(fire, inst.robots);
        const HamiltonMask mask =
            hamilton_mask(inst.graph, inst.weights, inst.assignment, oracle,
                          sensing_departure_rule(inst.robots));
        const SolveResult exact =
            solve_one_step(inst.graph, inst.weights, inst.robots, inst.assignment, oracle,
                           mask, lambda, alpha, /*require_sensing=*/true, 0.0);

        const InferStepResult gnn = infer_step(inst.graph, inst.weights, inst.robots,
                                               inst.assignment, fire, net, stats);
        const double gnn_score =
            global_objective(gnn.next, inst.weights, oracle) -
            lambda * transfer_cost(inst.assignment, gnn.next, inst.graph, inst.robots,
                                   alpha);

        GapRow row;
        row.seed = inst.seed;
        row.exact_score = exact.best_score;
        row.gnn_score = gnn_score;
        row.rel_gap = (exact.best_score - gnn_score) /
                      std::max(std::abs(exact.best_score), 1e-12);
        int same = 0;
        for (int r = 0; r < inst.num_robots(); ++r)
            if (exact.best_assignment.team_of[r] == gnn.next.team_of[r]) ++same;
        row.identical_fraction = static_cast<double>(same) / inst.num_robots();
        identical_sum += row.identical_fraction;
        report.rows.push_back(row);
    }
    if (!report.rows.empty()) {
        std::vector<double> gaps;
        for (const auto& r : report.rows) gaps.push_back(r.rel_gap);
        std::sort(gaps.begin(), gaps.end());
        const size_t n = gaps.size();
        report.median_gap = (n % 2 == 1) ? gaps[n / 2]
                                         : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
        report.mean_identical = identical_sum / static_cast<double>(n);
    }
    return report;
}

json GapReport::to_json() const {
    json j;
    j["median_gap"] = median_gap;
    j["mean_identical_fraction"] = mean_identical;
    j["rows"] = json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"seed", r.seed},
                             {"exact_score", r.exact_score},
                             {"gnn_score", r.gnn_score},
                             {"rel_gap", r.rel_gap},
                             {"identical_fraction", r.identical_fraction}});
    return j;
}

}  // namespace altro
