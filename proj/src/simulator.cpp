#include "eisim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "eisim/errors.hpp"
#include "eisim/rng.hpp"

namespace eisim {

std::string policy_name(Policy p) {
    switch (p) {
        case Policy::Proposed: return "proposed";
        case Policy::FullLocal: return "fl";
        case Policy::FullEdge: return "fe";
        case Policy::Matching: return "matching";
    }
    return "?";
}

std::optional<Policy> policy_from_name(const std::string& name) {
    if (name == "proposed") return Policy::Proposed;
    if (name == "fl") return Policy::FullLocal;
    if (name == "fe") return Policy::FullEdge;
    if (name == "matching") return Policy::Matching;
    return std::nullopt;
}

SlotState initial_state(const Scenario& scenario, const RunOptions& opts) {
    SlotState state;
    state.deployed.assign(static_cast<std::size_t>(scenario.n_servers()),
                          std::vector<bool>(static_cast<std::size_t>(scenario.n_services()), false));
    state.queue = opts.per_md_queues
                      ? PrivacyQueue::per_device(scenario.theta(), scenario.n_mds())
                      : PrivacyQueue::aggregate(scenario.theta());
    return state;
}

std::vector<Request> sample_requests(const Scenario& scenario, std::uint64_t seed,
                                     std::int64_t slot) {
    const std::vector<double> p = scenario.request.probabilities(scenario.n_services());
    std::vector<double> cdf(p.size(), 0.0);
    std::partial_sum(p.begin(), p.end(), cdf.begin());

    std::vector<Request> requests;
    requests.reserve(static_cast<std::size_t>(scenario.n_mds()));
    for (int md = 0; md < scenario.n_mds(); ++md) {
        KeyedRng rng{seed, fnv1a("request"), static_cast<std::uint64_t>(slot),
                     static_cast<std::uint64_t>(md)};
        const double u = rng.uniform01();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const int service = static_cast<int>(std::min<std::ptrdiff_t>(
            std::distance(cdf.begin(), it), static_cast<std::ptrdiff_t>(p.size()) - 1));
        const int d_items = static_cast<int>(
            rng.uniform_int(scenario.request.d_min, scenario.request.d_max));
        requests.push_back(Request{md, service, d_items});
    }
    return requests;
}

namespace {

DecisionPolicy decision_policy(Policy policy, const RunOptions& opts) {
    DecisionPolicy dp;
    dp.prospective = !opts.realized_value;
    switch (policy) {
        case Policy::Proposed:
            break;
        case Policy::FullLocal:
            dp.use_queue = false;
            dp.allow_deployment = false;
            break;
        case Policy::FullEdge:
            dp.use_queue = false;
            dp.forced_z = 0;
            break;
        case Policy::Matching:
            dp.use_queue = false;
            dp.per_slot_cap = true;
            break;
    }
    return dp;
}

// Baseline association: devices in descending item-count order each join the
// server currently offering them the lowest delay at the shares they would
// get there.
std::vector<int> greedy_assignment(SlotContext& ctx, Policy policy) {
    const int n = ctx.scenario().n_mds();
    const int m = ctx.scenario().n_servers();
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return ctx.request(a).d_items > ctx.request(b).d_items;
    });

    std::vector<int> assignment(static_cast<std::size_t>(n), 0);
    std::vector<int> counts(static_cast<std::size_t>(m), 0);
    for (int md : order) {
        const Request& req = ctx.request(md);
        int best = 0;
        double best_est = 0.0;
        for (int sv = 0; sv < m; ++sv) {
            const auto& e = ctx.eval(sv, counts[static_cast<std::size_t>(sv)] + 1, md, req.service);
            const double est = policy == Policy::FullLocal
                                   ? e.fallback_obj
                                   : std::min(e.served_obj, e.fallback_obj);
            if (sv == 0 || est < best_est) {
                best = sv;
                best_est = est;
            }
        }
        assignment[static_cast<std::size_t>(md)] = best;
        ++counts[static_cast<std::size_t>(best)];
    }
    return assignment;
}

PartitionStructure random_partition(int n_mds, int n_servers, KeyedRng& rng) {
    std::vector<int> assignment(static_cast<std::size_t>(n_mds));
    for (int& a : assignment) a = static_cast<int>(rng.index(static_cast<std::size_t>(n_servers)));
    return partition_from_assignment(std::move(assignment), n_servers);
}

}  // namespace

SlotMetrics run_slot(SlotState& state, const std::vector<Request>& requests, Policy policy,
                     const Scenario& scenario, const RunOptions& opts, std::int64_t slot,
                     SlotTrace* trace) {
    SlotContext ctx(scenario, slot, opts.seed, state.queue, requests, state.deployed,
                    decision_policy(policy, opts));

    PartitionStructure partition;
    SlotMetrics metrics;
    metrics.slot = slot;

    if (policy == Policy::Proposed) {
        const bool warm = !opts.cold_start && slot > 0 &&
                          state.partition.valid(scenario.n_mds(), scenario.n_servers());
        PartitionStructure initial;
        if (warm) {
            initial = state.partition;
        } else {
            KeyedRng rng{opts.seed, fnv1a("initial-partition"), static_cast<std::uint64_t>(slot)};
            initial = random_partition(scenario.n_mds(), scenario.n_servers(), rng);
        }
        GameConfig cfg = opts.game;
        cfg.seed = mix_keys({opts.seed, fnv1a("game"), static_cast<std::uint64_t>(slot)});
        cfg.collect_trace = opts.collect_trace && trace != nullptr;
        GameResult game = run_game(std::move(initial), cfg, ctx);
        partition = std::move(game.partition);
        metrics.game_iterations = game.iterations;
        metrics.game_accepted = game.accepted_moves;
        metrics.game_converged = game.converged;
        if (trace) {
            trace->slot = slot;
            trace->entries = std::move(game.trace);
        }
    } else {
        partition = partition_from_assignment(greedy_assignment(ctx, policy),
                                              scenario.n_servers());
        evaluate_partition(partition, ctx);
        if (trace) trace->slot = slot;
    }

    // Realize outcomes per coalition and assemble slot records.
    metrics.per_md.resize(static_cast<std::size_t>(scenario.n_mds()));
    metrics.deployed.resize(static_cast<std::size_t>(scenario.n_servers()));
    metrics.used_bytes.assign(static_cast<std::size_t>(scenario.n_servers()), 0.0);
    std::vector<double> losses(static_cast<std::size_t>(scenario.n_mds()), 0.0);
    std::vector<double> budgets(static_cast<std::size_t>(scenario.n_mds()), 0.0);
    for (int md = 0; md < scenario.n_mds(); ++md)
        budgets[static_cast<std::size_t>(md)] = scenario.mds[static_cast<std::size_t>(md)].privacy_budget;

    std::vector<std::vector<bool>> deployed_now(
        static_cast<std::size_t>(scenario.n_servers()),
        std::vector<bool>(static_cast<std::size_t>(scenario.n_services()), false));

    for (int sv = 0; sv < scenario.n_servers(); ++sv) {
        const auto& members = partition.members[static_cast<std::size_t>(sv)];
        const auto eval = evaluate_coalition(ctx, sv, members);
        metrics.deployed[static_cast<std::size_t>(sv)] = eval->deployment.deployed;
        metrics.used_bytes[static_cast<std::size_t>(sv)] = eval->deployment.used_bytes;
        for (int svc : eval->deployment.deployed)
            deployed_now[static_cast<std::size_t>(sv)][static_cast<std::size_t>(svc)] = true;
        for (std::size_t i = 0; i < eval->members.size(); ++i) {
            const int md = eval->members[i];
            const ServiceOutcome& out = eval->outcomes[i];
            const Request& req = ctx.request(md);
            MdSlotRecord rec;
            rec.md = md;
            rec.server = sv;
            rec.service = req.service;
            rec.d_items = req.d_items;
            rec.z = out.z;
            rec.cached = out.cached;
            rec.delay = out.delay;
            rec.upsilon = out.upsilon;
            metrics.per_md[static_cast<std::size_t>(md)] = rec;
            losses[static_cast<std::size_t>(md)] = out.upsilon;
            metrics.system_delay_s += out.delay.total_s;
        }
    }

    metrics.sum_losses = std::accumulate(losses.begin(), losses.end(), 0.0);
    metrics.sum_budgets = std::accumulate(budgets.begin(), budgets.end(), 0.0);

    // Reported objective and welfare use the actual queue state, also for
    // baselines whose decisions ignore it.
    metrics.xi_before = state.queue.total_backlog();
    metrics.objective =
        slot_objective(metrics.system_delay_s, losses, budgets, state.queue, scenario.alpha);
    metrics.welfare = 0.0;
    for (int sv = 0; sv < scenario.n_servers(); ++sv) {
        const auto& members = partition.members[static_cast<std::size_t>(sv)];
        if (members.empty()) continue;
        std::vector<double> cd, cl, cb, cw;
        for (int md : members) {
            cd.push_back(metrics.per_md[static_cast<std::size_t>(md)].delay.total_s);
            cl.push_back(losses[static_cast<std::size_t>(md)]);
            cb.push_back(budgets[static_cast<std::size_t>(md)]);
            cw.push_back(state.queue.weight_for(md));
        }
        metrics.welfare +=
            coalition_utility_weighted(cd, cl, cb, cw, scenario.alpha, state.queue.theta);
    }

    const PrivacyQueue next_queue = queue_update(state.queue, losses, budgets);
    metrics.xi_after = next_queue.total_backlog();

    // Pathwise drift diagnostics (per queue, folded).
    if (state.queue.per_md) {
        DriftReport fold;
        fold.quad_ok = true;
        fold.theta_ok = true;
        for (int md = 0; md < scenario.n_mds(); ++md) {
            const double theta_n = 0.5 * budgets[static_cast<std::size_t>(md)] *
                                   budgets[static_cast<std::size_t>(md)];
            const DriftReport r = drift_check(
                state.queue.xi_n[static_cast<std::size_t>(md)],
                next_queue.xi_n[static_cast<std::size_t>(md)],
                losses[static_cast<std::size_t>(md)] - budgets[static_cast<std::size_t>(md)],
                theta_n);
            fold.delta_l += r.delta_l;
            fold.excess += r.excess;
            fold.quad_ok = fold.quad_ok && r.quad_ok;
            fold.theta_ok = fold.theta_ok && r.theta_ok;
        }
        metrics.drift = fold;
    } else {
        metrics.drift = drift_check(state.queue.xi, next_queue.xi,
                                    metrics.sum_losses - metrics.sum_budgets, state.queue.theta);
    }

    state.queue = next_queue;
    state.deployed = std::move(deployed_now);
    state.partition = std::move(partition);
    return metrics;
}

RunResult run_horizon(const Scenario& base_scenario, Policy policy, const RunOptions& opts) {
    if (opts.slots < 1) throw ConfigError("run_horizon: slots must be >= 1");
    Scenario scenario = base_scenario;
    if (opts.alpha_override) scenario.alpha = *opts.alpha_override;

    RunResult result;
    SlotState state = initial_state(scenario, opts);
    double delay_sum = 0.0;
    double loss_sum = 0.0;
    double item_sum = 0.0;
    double excess_sum = 0.0;
    double game_iter_sum = 0.0;

    for (std::int64_t t = 0; t < opts.slots; ++t) {
        const std::vector<Request> requests = sample_requests(scenario, opts.seed, t);
        SlotTrace trace;
        SlotMetrics metrics = run_slot(state, requests, policy, scenario, opts, t,
                                       opts.collect_trace ? &trace : nullptr);
        delay_sum += metrics.system_delay_s;
        loss_sum += metrics.sum_losses;
        for (const Request& r : requests) item_sum += r.d_items;
        excess_sum += metrics.sum_losses - metrics.sum_budgets;
        game_iter_sum += metrics.game_iterations;
        if (!metrics.game_converged) ++result.summary.unconverged_slots;
        if (!metrics.drift.quad_ok) ++result.summary.drift_quad_violations;
        if (!metrics.drift.theta_ok) ++result.summary.drift_theta_warnings;
        if (opts.collect_trace) result.traces.push_back(std::move(trace));
        result.slots.push_back(std::move(metrics));
    }

    RunSummary& s = result.summary;
    s.slots = opts.slots;
    s.avg_delay_s = delay_sum / (static_cast<double>(opts.slots) * scenario.n_mds());
    s.privacy_loss_pct = item_sum > 0.0 ? 100.0 * loss_sum / item_sum : 0.0;
    s.final_xi = state.queue.total_backlog();
    s.xi_over_t = s.final_xi / static_cast<double>(opts.slots);
    s.avg_slot_excess = excess_sum / static_cast<double>(opts.slots);
    s.sum_budgets_per_slot = scenario.sum_budgets();
    s.theta = scenario.theta();
    s.avg_game_iterations = game_iter_sum / static_cast<double>(opts.slots);
    return result;
}

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name) {
    if (name == "mds") return SweepAxis::Mds;
    if (name == "servers") return SweepAxis::Servers;
    if (name == "services") return SweepAxis::Services;
    if (name == "storage") return SweepAxis::Storage;
    if (name == "privacy-budget") return SweepAxis::PrivacyBudget;
    if (name == "alpha") return SweepAxis::Alpha;
    return std::nullopt;
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Mds: return "mds";
        case SweepAxis::Servers: return "servers";
        case SweepAxis::Services: return "services";
        case SweepAxis::Storage: return "storage";
        case SweepAxis::PrivacyBudget: return "privacy-budget";
        case SweepAxis::Alpha: return "alpha";
    }
    return "?";
}

ScenarioSpec apply_axis(const ScenarioSpec& base, SweepAxis axis, double value) {
    ScenarioSpec spec = base;
    switch (axis) {
        case SweepAxis::Mds:
            if (!spec.generator)
                throw ConfigError("mds sweep needs a generator-form scenario");
            spec.generator->n_mds = static_cast<int>(value);
            if (spec.generator->n_mds < 1) throw ConfigError("mds sweep: value must be >= 1");
            break;
        case SweepAxis::Servers:
            if (!spec.generator)
                throw ConfigError("servers sweep needs a generator-form scenario");
            spec.generator->n_servers = static_cast<int>(value);
            if (spec.generator->n_servers < 1)
                throw ConfigError("servers sweep: value must be >= 1");
            break;
        case SweepAxis::Services:
            spec.n_services_override = static_cast<int>(value);
            if (*spec.n_services_override < 1)
                throw ConfigError("services sweep: value must be >= 1");
            break;
        case SweepAxis::Storage:
            spec.storage_override_bytes = value * 1024.0 * 1024.0 * 1024.0;  // GB
            break;
        case SweepAxis::PrivacyBudget:
            if (value < 0.0 || value > 1.0)
                throw ConfigError("privacy-budget sweep: fraction outside [0,1]");
            spec.budget_fraction_override = value;
            break;
        case SweepAxis::Alpha:
            if (value <= 0.0) throw ConfigError("alpha sweep: value must be positive");
            spec.alpha = value;
            break;
    }
    return spec;
}

std::vector<SweepRow> run_sweep(const ScenarioSpec& spec, const SweepSpec& sweep,
                                const RunOptions& opts, int n_threads) {
    if (sweep.values.empty() || sweep.policies.empty() || sweep.n_seeds < 1)
        throw ConfigError("run_sweep: empty axis values, policies, or seed count");

    struct Job {
        double value;
        Policy policy;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (double v : sweep.values)
        for (Policy p : sweep.policies)
            for (int s = 0; s < sweep.n_seeds; ++s)
                jobs.push_back({v, p, opts.seed + static_cast<std::uint64_t>(s)});

    std::vector<SweepRow> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const Job& job = jobs[i];
            const ScenarioSpec derived = apply_axis(spec, sweep.axis, job.value);
            RunOptions run_opts = opts;
            run_opts.seed = job.seed;
            run_opts.collect_trace = false;
            const Scenario scenario = materialize(derived, job.seed);
            const RunResult res = run_horizon(scenario, job.policy, run_opts);
            rows[i] = SweepRow{job.value, job.policy, job.seed, res.summary};
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (n_threads <= 0) n_threads = static_cast<int>(hw == 0 ? 1 : hw);
    n_threads = std::min<int>(n_threads, static_cast<int>(jobs.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return rows;
}

}  // namespace eisim
