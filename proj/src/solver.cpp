#include "altro/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace altro {

namespace {

using Clock = std::chrono::steady_clock;

struct EnumContext {
    const std::vector<Robot>* robots = nullptr;
    bool require_sensing = false;
    int num_robots = 0;
    int num_teams = 0;

    std::vector<std::vector<int>> cand;  // per robot, ascending destinations
    std::vector<int> cur;
    std::vector<int> dest;       // working assignment along the path
    std::vector<int> count;      // members per team along the path
    std::vector<int> sens;       // sensing members per team along the path
    // refill[v * (N+1) + r]: some robot with id >= r can move into v
    std::vector<char> refill_any;
    std::vector<char> refill_sens;

    bool can_refill(int v, int from_robot) const {
        return refill_any[static_cast<size_t>(v) * (num_robots + 1) + from_robot] != 0;
    }
    bool can_refill_sens(int v, int from_robot) const {
        return refill_sens[static_cast<size_t>(v) * (num_robots + 1) + from_robot] != 0;
    }

    bool leaf_feasible() const {
        for (int v = 0; v < num_teams; ++v) {
            if (count[v] == 0) return false;
            if (require_sensing && sens[v] == 0) return false;
        }
        return true;
    }
};

EnumContext make_context(const Assignment& assignment, const HamiltonMask& mask,
                         const std::vector<Robot>& robots, bool require_sensing) {
    const int n = assignment.num_robots();
    const int m = mask.num_teams;
    EnumContext ctx;
    ctx.robots = &robots;
    ctx.require_sensing = require_sensing;
    ctx.num_robots = n;
    ctx.num_teams = m;
    ctx.cur = assignment.team_of;
    ctx.dest = assignment.team_of;
    ctx.count = assignment.team_sizes(m);
    ctx.sens.assign(m, 0);
    for (int r = 0; r < n; ++r)
        if (robots[r].is_sensing()) ++ctx.sens[assignment.team_of[r]];

    ctx.cand.resize(n);
    for (int r = 0; r < n; ++r) {
        if (!mask.at(r, ctx.cur[r]))
            throw std::invalid_argument("enumerate: mask does not allow robot " +
                                        std::to_string(r) + " to stay");
        ctx.cand[r] = mask.destinations(r);
    }

    // Suffix tables: can any robot with id >= r move into team v?
    ctx.refill_any.assign(static_cast<size_t>(m) * (n + 1), 0);
    ctx.refill_sens.assign(static_cast<size_t>(m) * (n + 1), 0);
    for (int r = n - 1; r >= 0; --r) {
        for (int v = 0; v < m; ++v) {
            const size_t idx = static_cast<size_t>(v) * (n + 1) + r;
            ctx.refill_any[idx] = ctx.refill_any[idx + 1];
            ctx.refill_sens[idx] = ctx.refill_sens[idx + 1];
        }
        for (int v : ctx.cand[r]) {
            if (v == ctx.cur[r]) continue;
            const size_t idx = static_cast<size_t>(v) * (n + 1) + r;
            ctx.refill_any[idx] = 1;
            if (robots[r].is_sensing()) ctx.refill_sens[idx] = 1;
        }
    }
    return ctx;
}

// Shared DFS skeleton. Apply/undo of count/sens/dest happens here; the
// Visitor supplies the per-move hooks and the leaf action.
template <typename Visitor>
bool dfs(EnumContext& ctx, int r, Visitor& vis) {
    if (r == ctx.num_robots) {
        if (!ctx.leaf_feasible()) return true;
        return vis.leaf();
    }
    const int i = ctx.cur[r];
    const bool sensing = (*ctx.robots)[r].is_sensing();
    for (int j : ctx.cand[r]) {
        if (j == i) {
            if (!dfs(ctx, r + 1, vis)) return false;
            continue;
        }
        // Prune only when the departure can never be compensated later.
        if (ctx.count[i] == 1 && !ctx.can_refill(i, r + 1)) continue;
        if (ctx.require_sensing && sensing && ctx.sens[i] == 1 &&
            !ctx.can_refill_sens(i, r + 1))
            continue;

        --ctx.count[i];
        ++ctx.count[j];
        if (sensing) {
            --ctx.sens[i];
            ++ctx.sens[j];
        }
        ctx.dest[r] = j;
        vis.apply(r, i, j);

        const bool keep_going = dfs(ctx, r + 1, vis);

        vis.undo(r, i, j);
        ctx.dest[r] = i;
        ++ctx.count[i];
        --ctx.count[j];
        if (sensing) {
            ++ctx.sens[i];
            --ctx.sens[j];
        }
        if (!keep_going) return false;
    }
    return true;
}

struct MaterializeVisitor {
    EnumContext* ctx;
    const std::function<bool(const Assignment&)>* visit;

    void apply(int, int, int) {}
    void undo(int, int, int) {}
    bool leaf() {
        Assignment a;
        a.team_of = ctx->dest;
        return (*visit)(a);
    }
};

struct SolveVisitor {
    EnumContext* ctx;
    const InteractionGraph* graph;
    const TeamWeights* weights;
    const MissionOracle* oracle;
    double lambda = 0.0;
    double alpha = 0.0;

    std::vector<std::vector<int>> members;  // sorted member lists along the path
    std::vector<double> fval;               // oracle value of each current list
    int moved = 0;

    uint64_t evaluated = 0;
    double best_score = 0.0;
    int best_moved = 0;
    std::vector<int> best_dest;

    Clock::time_point deadline;
    bool has_deadline = false;
    bool timed_out = false;
    uint64_t tick = 0;

    void apply(int r, int i, int j) {
        if (has_deadline && (++tick & 0xFFF) == 0 && Clock::now() >= deadline)
            timed_out = true;
        auto& mi = members[i];
        mi.erase(std::find(mi.begin(), mi.end(), r));
        auto& mj = members[j];
        mj.insert(std::upper_bound(mj.begin(), mj.end(), r), r);
        fval[i] = oracle->evaluate(i, mi);
        fval[j] = oracle->evaluate(j, mj);
        ++moved;
    }

    void undo(int r, int i, int j) {
        auto& mj = members[j];
        mj.erase(std::find(mj.begin(), mj.end(), r));
        auto& mi = members[i];
        mi.insert(std::upper_bound(mi.begin(), mi.end(), r), r);
        fval[i] = oracle->evaluate(i, mi);
        fval[j] = oracle->evaluate(j, mj);
        --moved;
    }

    double score_current() const {
        double g = 0.0;
        for (int v = 0; v < ctx->num_teams; ++v) g += weights->w[v] * fval[v];
        double cost = 0.0;
        for (int r = 0; r < ctx->num_robots; ++r) {
            if (ctx->dest[r] != ctx->cur[r])
                cost += alpha * graph->distance(ctx->cur[r], ctx->dest[r]) /
                        (*ctx->robots)[r].speed;
        }
        return g - lambda * cost;
    }

    bool leaf() {
        if (has_deadline && ((++tick & 0xFFF) == 0 && Clock::now() >= deadline))
            timed_out = true;
        if (timed_out) return false;
        if (moved == 0) return true;  // seeded before the search
        ++evaluated;
        const double s = score_current();
        if (s > best_score ||
            (s == best_score &&
             (moved < best_moved ||
              (moved == best_moved && ctx->dest < best_dest)))) {
            best_score = s;
            best_moved = moved;
            best_dest = ctx->dest;
        }
        return true;
    }
};

}  // namespace

void enumerate_feasible(const Assignment& assignment, const HamiltonMask& mask,
                        const std::vector<Robot>& robots, bool require_sensing,
                        const std::function<bool(const Assignment&)>& visit) {
    EnumContext ctx = make_context(assignment, mask, robots, require_sensing);
    MaterializeVisitor vis{&ctx, &visit};
    dfs(ctx, 0, vis);
}

SolveResult solve_one_step(const InteractionGraph& graph, const TeamWeights& weights,
                           const std::vector<Robot>& robots, const Assignment& assignment,
                           const MissionOracle& oracle, const HamiltonMask& mask,
                           double lambda, double alpha, bool require_sensing,
                           double timeout_seconds) {
    const auto start = Clock::now();
    EnumContext ctx = make_context(assignment, mask, robots, require_sensing);

    SolveVisitor vis;
    vis.ctx = &ctx;
    vis.graph = &graph;
    vis.weights = &weights;
    vis.oracle = &oracle;
    vis.lambda = lambda;
    vis.alpha = alpha;
    vis.members = assignment.members(ctx.num_teams);
    vis.fval.resize(ctx.num_teams);
    for (int v = 0; v < ctx.num_teams; ++v)
        vis.fval[v] = oracle.evaluate(v, vis.members[v]);

    // The unchanged assignment is scored first so a timeout always has a
    // feasible answer.
    vis.best_score = vis.score_current();
    vis.best_moved = 0;
    vis.best_dest = ctx.dest;
    vis.evaluated = 1;

    if (timeout_seconds > 0.0) {
        vis.has_deadline = true;
        vis.deadline = start + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(timeout_seconds));
    }

    dfs(ctx, 0, vis);

    SolveResult res;
    res.best_assignment.team_of = vis.best_dest;
    res.best_score = vis.best_score;
    res.evaluated_count = vis.evaluated;
    res.timed_out = vis.timed_out;
    res.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return res;
}

// --- Partition reduction -------------------------------------------------

namespace {

class PartitionOracle : public MissionOracle {
public:
    explicit PartitionOracle(std::vector<int> values) : values_(std::move(values)) {
        for (int v : values_) half_sum_ += v;
        half_sum_ /= 2.0;
    }

    double evaluate(int, const std::vector<int>& robot_set) const override {
        double s = 0.0;
        for (int r : robot_set) s += values_[r];
        return -std::abs(s - half_sum_);
    }

private:
    std::vector<int> values_;
    double half_sum_ = 0.0;
};

}  // namespace

PartitionInstance build_partition_instance(const std::vector<int>& integers) {
    if (integers.size() < 2)
        throw std::invalid_argument(
            "partition instance: need at least two integers for two nonempty teams");
    for (int a : integers)
        if (a <= 0) throw std::invalid_argument("partition instance: integers must be positive");

    PartitionInstance inst;
    inst.graph = InteractionGraph::build(2, {{0, 1}}, {{0.0, 0.0}, {1.0, 0.0}});
    inst.weights.w = {1.0, 1.0};
    const int n = static_cast<int>(integers.size());
    for (int r = 0; r < n; ++r) {
        Robot robot;
        robot.id = r;
        robot.capability = {1, 0};
        robot.speed = 1.0;
        robot.capacity = static_cast<double>(integers[r]);
        inst.robots.push_back(std::move(robot));
    }
    inst.assignment.team_of.assign(n, 1);
    inst.assignment.team_of[0] = 0;

    inst.full_mask.num_robots = n;
    inst.full_mask.num_teams = 2;
    inst.full_mask.admissible.assign(static_cast<size_t>(n) * 2, 1);

    inst.oracle = std::make_shared<PartitionOracle>(integers);
    return inst;
}

// --- Homogeneous framework ------------------------------------------------

double homogeneous_objective(const std::vector<int>& sizes, const TeamWeights& weights,
                             const std::vector<std::function<double(int)>>& value_fn) {
    double g = 0.0;
    for (size_t v = 0; v < sizes.size(); ++v) g += weights.w[v] * value_fn[v](sizes[v]);
    return g;
}

HomogeneousTrace solve_homogeneous_iterative(const HomogeneousInstance& instance) {
    const int m = instance.graph.num_teams;
    std::vector<int> n = instance.team_sizes;
    for (int v = 0; v < m; ++v)
        if (n[v] < 1) throw std::invalid_argument("homogeneous: every team needs a robot");

    HomogeneousTrace trace;
    trace.size_history.push_back(n);

    int total = 0;
    for (int s : n) total += s;
    const unsigned long long round_cap = count_feasible_homogeneous(total, m);

    const auto benefit = [&](int j) { return instance.value_fn[j](n[j] + 1) -
                                             instance.value_fn[j](n[j]); };
    const auto cost = [&](int i) { return instance.value_fn[i](n[i]) -
                                          instance.value_fn[i](n[i] - 1); };

    for (unsigned long long round = 0; round <= round_cap; ++round) {
        // Best outgoing proposal per team (tie: lowest destination id).
        std::vector<int> proposal(m, -1);
        std::vector<double> proposal_gain(m, 0.0);
        bool any = false;
        for (int i = 0; i < m; ++i) {
            if (n[i] < 2) continue;  // donor must stay nonempty
            const double ci = cost(i);
            for (int j : instance.graph.neighbors[i]) {
                const double gain = relatedness(instance.weights, i, j) * benefit(j) - ci;
                if (gain > 0.0 && (proposal[i] < 0 || gain > proposal_gain[i])) {
                    proposal[i] = j;
                    proposal_gain[i] = gain;
                }
            }
            if (proposal[i] >= 0) any = true;
        }
        if (!any) break;

        // Best incoming acceptance per team (tie: lowest source id).
        std::vector<int> accepted_from(m, -1);
        std::vector<double> accepted_gain(m, 0.0);
        for (int i = 0; i < m; ++i) {
            const int j = proposal[i];
            if (j < 0) continue;
            if (accepted_from[j] < 0 || proposal_gain[i] > accepted_gain[j]) {
                accepted_from[j] = i;
                accepted_gain[j] = proposal_gain[i];
            }
        }

        std::vector<std::pair<int, int>> round_moves;
        for (int j = 0; j < m; ++j) {
            if (accepted_from[j] < 0) continue;
            round_moves.emplace_back(accepted_from[j], j);
        }
        for (const auto& [src, dst] : round_moves) {
            --n[src];
            ++n[dst];
        }
        trace.executed.push_back(round_moves);
        trace.total_transfers += static_cast<int>(round_moves.size());
        trace.size_history.push_back(n);
    }

    trace.final_objective = homogeneous_objective(n, instance.weights, instance.value_fn);
    return trace;
}

unsigned long long count_feasible_homogeneous(int n_robots, int n_teams) {
    if (n_teams < 1 || n_robots < n_teams)
        throw std::invalid_argument("count_feasible: need N >= M >= 1");
    // binomial(N-1, M-1) with interleaved multiply/divide to stay exact.
    unsigned long long result = 1;
    const int n = n_robots - 1;
    const int k = std::min(n_teams - 1, n - (n_teams - 1));
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned long long>(n - k + i) /
                 static_cast<unsigned long long>(i);
    }
    return result;
}

}  // namespace altro
