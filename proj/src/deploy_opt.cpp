#include "eisim/deploy_opt.hpp"

#include <algorithm>
#include <stdexcept>

namespace eisim {

namespace {

// Per-service data for one (coalition, server): expected utility gain of
// caching the service and the aggregated request probability over members.
struct ServiceStats {
    std::vector<double> gain;    // sum over members of weight * (fallback - served)
    std::vector<double> p_agg;   // aggregated request probability
    double base = 0.0;           // value of the empty deployment
};

ServiceStats collect(const SlotContext& ctx, std::span<const int> members, int server) {
    const int n_services = ctx.scenario().n_services();
    const int n_assoc = static_cast<int>(members.size());
    const bool prospective = ctx.policy().prospective;
    const std::vector<double>& p = ctx.request_probabilities();

    ServiceStats st;
    st.gain.assign(static_cast<std::size_t>(n_services), 0.0);
    st.p_agg.assign(static_cast<std::size_t>(n_services), 0.0);
    for (int md : members) {
        if (prospective) {
            for (int svc = 0; svc < n_services; ++svc) {
                const auto& e = ctx.eval(server, n_assoc, md, svc);
                const double w = p[static_cast<std::size_t>(svc)];
                st.base -= w * e.fallback_obj;
                st.gain[static_cast<std::size_t>(svc)] += w * (e.fallback_obj - e.served_obj);
                st.p_agg[static_cast<std::size_t>(svc)] += w;
            }
        } else {
            const Request& req = ctx.request(md);
            const auto& e = ctx.eval(server, n_assoc, md, req.service);
            st.base -= e.fallback_obj;
            st.gain[static_cast<std::size_t>(req.service)] += e.fallback_obj - e.served_obj;
            st.p_agg[static_cast<std::size_t>(req.service)] += 1.0;
        }
    }
    return st;
}

double service_bytes(const SlotContext& ctx, int service) {
    return ctx.scenario().service_profile(service).total_bytes;
}

}  // namespace

double deployment_value(const SlotContext& ctx, std::span<const int> members, int server,
                        std::span<const int> candidate_services) {
    const ServiceStats st = collect(ctx, members, server);
    double value = st.base;
    for (int svc : candidate_services) value += st.gain[static_cast<std::size_t>(svc)];
    return value;
}

DeploymentDecision greedy_deploy(const SlotContext& ctx, std::span<const int> members,
                                 int server) {
    DeploymentDecision decision;
    decision.server = server;
    if (members.empty() || !ctx.policy().allow_deployment) {
        decision.value = members.empty() ? 0.0 : deployment_value(ctx, members, server, {});
        return decision;
    }

    const ServiceStats st = collect(ctx, members, server);
    const int n_services = ctx.scenario().n_services();
    double remaining = ctx.scenario().servers[static_cast<std::size_t>(server)].storage_bytes;
    std::vector<bool> taken(static_cast<std::size_t>(n_services), false);
    decision.value = st.base;

    for (;;) {
        int best = -1;
        double best_score = 0.0;
        for (int svc = 0; svc < n_services; ++svc) {
            if (taken[static_cast<std::size_t>(svc)]) continue;
            const double bytes = service_bytes(ctx, svc);
            if (bytes > remaining) continue;
            const double score =
                st.p_agg[static_cast<std::size_t>(svc)] * st.gain[static_cast<std::size_t>(svc)] /
                std::max(bytes, 1.0);
            if (best == -1 || score > best_score) {
                best = svc;
                best_score = score;
            }
        }
        if (best == -1 || st.gain[static_cast<std::size_t>(best)] <= 0.0) break;
        taken[static_cast<std::size_t>(best)] = true;
        decision.deployed.push_back(best);
        decision.used_bytes += service_bytes(ctx, best);
        decision.value += st.gain[static_cast<std::size_t>(best)];
        remaining -= service_bytes(ctx, best);
    }
    std::sort(decision.deployed.begin(), decision.deployed.end());
    return decision;
}

DeploymentDecision brute_force_deploy(const SlotContext& ctx, std::span<const int> members,
                                      int server, int max_library) {
    const int n_services = ctx.scenario().n_services();
    if (n_services > max_library)
        throw std::invalid_argument("brute_force_deploy: library of " +
                                    std::to_string(n_services) + " services exceeds guard of " +
                                    std::to_string(max_library));

    DeploymentDecision best;
    best.server = server;
    if (members.empty()) return best;

    const double capacity = ctx.scenario().servers[static_cast<std::size_t>(server)].storage_bytes;
    const ServiceStats st = collect(ctx, members, server);
    bool have_best = false;
    std::vector<int> subset;
    for (std::uint32_t mask = 0; mask < (1u << n_services); ++mask) {
        subset.clear();
        double used = 0.0;
        double value = st.base;
        bool feasible = true;
        for (int svc = 0; svc < n_services; ++svc) {
            if (!(mask & (1u << svc))) continue;
            used += service_bytes(ctx, svc);
            value += st.gain[static_cast<std::size_t>(svc)];
            subset.push_back(svc);
            if (used > capacity) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        const bool better =
            !have_best || value > best.value ||
            (value == best.value && std::lexicographical_compare(subset.begin(), subset.end(),
                                                                 best.deployed.begin(),
                                                                 best.deployed.end()));
        if (better) {
            best.deployed = subset;
            best.used_bytes = used;
            best.value = value;
            have_best = true;
        }
    }
    return best;
}

}  // namespace eisim
