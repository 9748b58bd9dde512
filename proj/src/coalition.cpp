#include "eisim/coalition.hpp"

#include <algorithm>
#include <stdexcept>

#include "eisim/rng.hpp"

namespace eisim {

std::shared_ptr<const CoalitionEval> evaluate_coalition(SlotContext& ctx, int server,
                                                        std::vector<int> members) {
    std::sort(members.begin(), members.end());
    if (auto cached = ctx.find_eval(server, members)) return cached;

    auto eval = std::make_shared<CoalitionEval>();
    eval->members = members;
    if (members.empty()) {
        ctx.store_eval(server, members, eval);
        return eval;
    }

    const int n_assoc = static_cast<int>(members.size());
    eval->deployment = greedy_deploy(ctx, members, server);
    std::vector<bool> cached_service(static_cast<std::size_t>(ctx.scenario().n_services()), false);
    for (int svc : eval->deployment.deployed) cached_service[static_cast<std::size_t>(svc)] = true;

    std::vector<double> delays, losses, budgets, weights;
    delays.reserve(members.size());
    for (int md : members) {
        const Request& req = ctx.request(md);
        ServiceOutcome out =
            realize_service(ctx, md, server, n_assoc, req.service, req.d_items,
                            cached_service[static_cast<std::size_t>(req.service)]);
        eval->sum_delay_s += out.delay.total_s;
        eval->sum_loss += out.upsilon;
        delays.push_back(out.delay.total_s);
        losses.push_back(out.upsilon);
        budgets.push_back(ctx.budget(md));
        weights.push_back(ctx.queue_weight(md));
        eval->outcomes.push_back(std::move(out));
    }
    eval->utility = coalition_utility_weighted(delays, losses, budgets, weights, ctx.alpha(),
                                               ctx.queue().theta);
    ctx.store_eval(server, members, eval);
    return eval;
}

bool PartitionStructure::valid(int n_mds, int n_servers) const {
    if (static_cast<int>(members.size()) != n_servers) return false;
    if (static_cast<int>(assignment.size()) != n_mds) return false;
    std::vector<int> seen(static_cast<std::size_t>(n_mds), 0);
    for (int sv = 0; sv < n_servers; ++sv) {
        for (int md : members[static_cast<std::size_t>(sv)]) {
            if (md < 0 || md >= n_mds) return false;
            if (assignment[static_cast<std::size_t>(md)] != sv) return false;
            if (seen[static_cast<std::size_t>(md)]++) return false;
        }
    }
    for (int c : seen)
        if (c != 1) return false;
    return true;
}

PartitionStructure partition_from_assignment(std::vector<int> assignment, int n_servers) {
    PartitionStructure p;
    p.members.resize(static_cast<std::size_t>(n_servers));
    p.assignment = std::move(assignment);
    for (std::size_t md = 0; md < p.assignment.size(); ++md) {
        const int sv = p.assignment[md];
        if (sv < 0 || sv >= n_servers)
            throw std::invalid_argument("partition_from_assignment: server index out of range");
        p.members[static_cast<std::size_t>(sv)].push_back(static_cast<int>(md));
    }
    p.utilities.assign(static_cast<std::size_t>(n_servers), 0.0);
    return p;
}

void evaluate_partition(PartitionStructure& p, SlotContext& ctx) {
    p.utilities.assign(p.members.size(), 0.0);
    p.welfare = 0.0;
    for (std::size_t sv = 0; sv < p.members.size(); ++sv) {
        if (p.members[sv].empty()) continue;
        p.utilities[sv] = evaluate_coalition(ctx, static_cast<int>(sv), p.members[sv])->utility;
        p.welfare += p.utilities[sv];
    }
}

namespace {

std::vector<int> without(const std::vector<int>& v, int md) {
    std::vector<int> out;
    out.reserve(v.size());
    for (int x : v)
        if (x != md) out.push_back(x);
    return out;
}

std::vector<int> with(const std::vector<int>& v, int md) {
    std::vector<int> out = v;
    out.insert(std::lower_bound(out.begin(), out.end(), md), md);
    return out;
}

double utility_of(SlotContext& ctx, int server, const std::vector<int>& members) {
    return members.empty() ? 0.0 : evaluate_coalition(ctx, server, members)->utility;
}

}  // namespace

double switch_delta(const PartitionStructure& p, int md, int to, SlotContext& ctx) {
    const int from = p.assignment[static_cast<std::size_t>(md)];
    const double u_from = utility_of(ctx, from, without(p.members[static_cast<std::size_t>(from)], md));
    const double u_to = utility_of(ctx, to, with(p.members[static_cast<std::size_t>(to)], md));
    return u_from + u_to - p.utilities[static_cast<std::size_t>(from)] -
           p.utilities[static_cast<std::size_t>(to)];
}

double exchange_delta(const PartitionStructure& p, int md_a, int md_b, SlotContext& ctx) {
    const int sa = p.assignment[static_cast<std::size_t>(md_a)];
    const int sb = p.assignment[static_cast<std::size_t>(md_b)];
    const double u_a =
        utility_of(ctx, sa, with(without(p.members[static_cast<std::size_t>(sa)], md_a), md_b));
    const double u_b =
        utility_of(ctx, sb, with(without(p.members[static_cast<std::size_t>(sb)], md_b), md_a));
    return u_a + u_b - p.utilities[static_cast<std::size_t>(sa)] -
           p.utilities[static_cast<std::size_t>(sb)];
}

bool try_switch(PartitionStructure& p, int md, int from, int to, SlotContext& ctx,
                double epsilon) {
    if (from == to) throw std::invalid_argument("try_switch: source equals target");
    if (p.assignment[static_cast<std::size_t>(md)] != from)
        throw std::invalid_argument("try_switch: device is not in the source coalition");
    const double delta = switch_delta(p, md, to, ctx);
    if (!(delta > epsilon)) return false;

    p.members[static_cast<std::size_t>(from)] =
        without(p.members[static_cast<std::size_t>(from)], md);
    p.members[static_cast<std::size_t>(to)] = with(p.members[static_cast<std::size_t>(to)], md);
    p.assignment[static_cast<std::size_t>(md)] = to;
    p.utilities[static_cast<std::size_t>(from)] =
        utility_of(ctx, from, p.members[static_cast<std::size_t>(from)]);
    p.utilities[static_cast<std::size_t>(to)] =
        utility_of(ctx, to, p.members[static_cast<std::size_t>(to)]);
    p.welfare += delta;
    return true;
}

bool try_exchange(PartitionStructure& p, int md_a, int md_b, SlotContext& ctx, double epsilon) {
    const int sa = p.assignment[static_cast<std::size_t>(md_a)];
    const int sb = p.assignment[static_cast<std::size_t>(md_b)];
    if (sa == sb) throw std::invalid_argument("try_exchange: devices share a coalition");
    const double delta = exchange_delta(p, md_a, md_b, ctx);
    if (!(delta > epsilon)) return false;

    p.members[static_cast<std::size_t>(sa)] =
        with(without(p.members[static_cast<std::size_t>(sa)], md_a), md_b);
    p.members[static_cast<std::size_t>(sb)] =
        with(without(p.members[static_cast<std::size_t>(sb)], md_b), md_a);
    p.assignment[static_cast<std::size_t>(md_a)] = sb;
    p.assignment[static_cast<std::size_t>(md_b)] = sa;
    p.utilities[static_cast<std::size_t>(sa)] =
        utility_of(ctx, sa, p.members[static_cast<std::size_t>(sa)]);
    p.utilities[static_cast<std::size_t>(sb)] =
        utility_of(ctx, sb, p.members[static_cast<std::size_t>(sb)]);
    p.welfare += delta;
    return true;
}

namespace {

// Deterministic pass over the full deviation set; true if any move landed.
bool sweep_all(PartitionStructure& p, SlotContext& ctx, const GameConfig& cfg,
               std::vector<GameTraceEntry>& trace, int& iterations, int& accepted_moves) {
    const int n = static_cast<int>(p.assignment.size());
    const int m = static_cast<int>(p.members.size());
    bool any = false;
    for (int md = 0; md < n; ++md) {
        for (int to = 0; to < m; ++to) {
            const int from = p.assignment[static_cast<std::size_t>(md)];
            if (to == from) continue;
            ++iterations;
            const bool ok = try_switch(p, md, from, to, ctx, cfg.improvement_epsilon);
            if (cfg.collect_trace)
                trace.push_back({iterations, MoveKind::SweepSwitch, ok, p.welfare});
            if (ok) {
                ++accepted_moves;
                any = true;
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (p.assignment[static_cast<std::size_t>(a)] ==
                p.assignment[static_cast<std::size_t>(b)])
                continue;
            ++iterations;
            const bool ok = try_exchange(p, a, b, ctx, cfg.improvement_epsilon);
            if (cfg.collect_trace)
                trace.push_back({iterations, MoveKind::SweepExchange, ok, p.welfare});
            if (ok) {
                ++accepted_moves;
                any = true;
            }
        }
    }
    return any;
}

}  // namespace

GameResult run_game(PartitionStructure initial, const GameConfig& cfg, SlotContext& ctx) {
    GameResult res;
    res.partition = std::move(initial);
    evaluate_partition(res.partition, ctx);

    const int n = static_cast<int>(res.partition.assignment.size());
    const int m = static_cast<int>(res.partition.members.size());
    if (m < 2) {
        res.converged = true;
        return res;
    }

    KeyedRng rng{cfg.seed, fnv1a("coalition-game")};
    const int stall_threshold = 2 * n * m;
    int consecutive_rejections = 0;

    while (res.iterations < cfg.max_iterations) {
        ++res.iterations;
        const int md = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
        const int from = res.partition.assignment[static_cast<std::size_t>(md)];
        int to = static_cast<int>(rng.index(static_cast<std::size_t>(m) - 1));
        if (to >= from) ++to;
        const bool ok = try_switch(res.partition, md, from, to, ctx, cfg.improvement_epsilon);
        if (cfg.collect_trace)
            res.trace.push_back({res.iterations, MoveKind::Switch, ok, res.partition.welfare});
        if (ok) {
            ++res.accepted_moves;
            consecutive_rejections = 0;
        } else {
            ++consecutive_rejections;
        }

        if (res.iterations % cfg.exchange_period == 0) {
            // Pick a device pair across two distinct coalitions, if one exists.
            const int a = static_cast<int>(rng.index(static_cast<std::size_t>(n)));
            std::vector<int> others;
            for (int b = 0; b < n; ++b)
                if (res.partition.assignment[static_cast<std::size_t>(b)] !=
                    res.partition.assignment[static_cast<std::size_t>(a)])
                    others.push_back(b);
            if (!others.empty()) {
                const int b = others[rng.index(others.size())];
                const bool xok =
                    try_exchange(res.partition, a, b, ctx, cfg.improvement_epsilon);
                if (cfg.collect_trace)
                    res.trace.push_back(
                        {res.iterations, MoveKind::Exchange, xok, res.partition.welfare});
                if (xok) {
                    ++res.accepted_moves;
                    consecutive_rejections = 0;
                } else {
                    ++consecutive_rejections;
                }
            }
        }

        if (consecutive_rejections >= stall_threshold) {
            if (!sweep_all(res.partition, ctx, cfg, res.trace, res.iterations,
                           res.accepted_moves)) {
                res.converged = true;
                return res;
            }
            consecutive_rejections = 0;
        }
    }
    // Proposal budget exhausted; one last sweep may still certify stability.
    res.converged = !sweep_all(res.partition, ctx, cfg, res.trace, res.iterations,
                               res.accepted_moves);
    return res;
}

StabilityReport check_d_stable(const PartitionStructure& p, SlotContext& ctx, double epsilon,
                               int guard_n) {
    const int n = static_cast<int>(p.assignment.size());
    const int m = static_cast<int>(p.members.size());
    if (n > guard_n)
        throw std::invalid_argument("check_d_stable: " + std::to_string(n) +
                                    " devices exceeds exhaustive guard of " +
                                    std::to_string(guard_n));
    StabilityReport report;
    for (int md = 0; md < n; ++md)
        for (int to = 0; to < m; ++to) {
            if (to == p.assignment[static_cast<std::size_t>(md)]) continue;
            if (switch_delta(p, md, to, ctx) > epsilon) ++report.improving_switches;
        }
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (p.assignment[static_cast<std::size_t>(a)] ==
                p.assignment[static_cast<std::size_t>(b)])
                continue;
            if (exchange_delta(p, a, b, ctx) > epsilon) ++report.improving_exchanges;
        }
    return report;
}

}  // namespace eisim
