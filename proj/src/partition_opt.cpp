#include "eisim/partition_opt.hpp"

#include <limits>

namespace eisim {

namespace {

double loss_if_served(const SlotContext& ctx, const ModelProfile& model, int z, int d_items) {
    if (ctx.policy().forced_z && *ctx.policy().forced_z == 0) return static_cast<double>(d_items);
    return d_items * possibility_at(model, z, preferred_mode(model));
}

}  // namespace

double per_md_objective(const SlotContext& ctx, int md, int server, int n_assoc, int service,
                        int z, int d_items) {
    const Scenario& sc = ctx.scenario();
    const ModelProfile& model = sc.service_profile(service);
    const DelayBreakdown d = delay_components(
        sc.mds[static_cast<std::size_t>(md)], sc.servers[static_cast<std::size_t>(server)], model,
        z, d_items, /*deployed_now=*/true, ctx.was_deployed(server, service), n_assoc,
        ctx.gain(md, server, LinkDir::Up), ctx.gain(md, server, LinkDir::Down), sc.channel);
    const double upsilon = loss_if_served(ctx, model, z, d_items);
    ++ctx.objective_evals;
    return ctx.alpha() * d.total_s - ctx.queue_weight(md) * (ctx.budget(md) - upsilon);
}

double fallback_objective(const SlotContext& ctx, int md, int server, int n_assoc, int service,
                          int d_items) {
    const Scenario& sc = ctx.scenario();
    const ModelProfile& model = sc.service_profile(service);
    ++ctx.objective_evals;
    if (ctx.policy().forced_z) {
        // On-demand edge service: model streamed from the cloud, not cached.
        const DelayBreakdown d = delay_components(
            sc.mds[static_cast<std::size_t>(md)], sc.servers[static_cast<std::size_t>(server)],
            model, std::min(*ctx.policy().forced_z, model.depth()), d_items,
            /*deployed_now=*/true, /*deployed_prev=*/false, n_assoc,
            ctx.gain(md, server, LinkDir::Up), ctx.gain(md, server, LinkDir::Down), sc.channel);
        const double upsilon = loss_if_served(ctx, model, *ctx.policy().forced_z, d_items);
        return ctx.alpha() * d.total_s - ctx.queue_weight(md) * (ctx.budget(md) - upsilon);
    }
    const DelayBreakdown d = fallback_components(
        sc.mds[static_cast<std::size_t>(md)], sc.servers[static_cast<std::size_t>(server)], model,
        d_items, n_assoc, ctx.gain(md, server, LinkDir::Down), sc.channel);
    return ctx.alpha() * d.total_s - ctx.queue_weight(md) * ctx.budget(md);
}

PartitionChoice optimal_partition(const SlotContext& ctx, int md, int server, int n_assoc,
                                  int service, int d_items) {
    const ModelProfile& model = ctx.scenario().service_profile(service);
    PartitionChoice best{md, service, 0,
                         per_md_objective(ctx, md, server, n_assoc, service, 0, d_items)};
    for (int z = 1; z <= model.depth(); ++z) {
        const double obj = per_md_objective(ctx, md, server, n_assoc, service, z, d_items);
        if (obj < best.objective_at_z) {
            best.z_star = z;
            best.objective_at_z = obj;
        }
    }
    return best;
}

std::optional<PartitionChoice> best_admissible_partition(const SlotContext& ctx, int md,
                                                         int server, int n_assoc, int service,
                                                         int d_items) {
    const ModelProfile& model = ctx.scenario().service_profile(service);
    const DecisionPolicy& policy = ctx.policy();

    int z_lo = 0;
    int z_hi = model.depth();
    if (policy.forced_z) z_lo = z_hi = std::min(*policy.forced_z, model.depth());

    std::optional<PartitionChoice> best;
    for (int z = z_lo; z <= z_hi; ++z) {
        if (policy.per_slot_cap) {
            const double upsilon = loss_if_served(ctx, model, z, d_items);
            if (upsilon > ctx.budget(md)) continue;
        }
        const double obj = per_md_objective(ctx, md, server, n_assoc, service, z, d_items);
        if (!best || obj < best->objective_at_z) best = PartitionChoice{md, service, z, obj};
    }
    return best;
}

ServiceOutcome realize_service(const SlotContext& ctx, int md, int server, int n_assoc,
                               int service, int d_items, bool cached) {
    const Scenario& sc = ctx.scenario();
    const MobileDevice& dev = sc.mds[static_cast<std::size_t>(md)];
    const EdgeServer& srv = sc.servers[static_cast<std::size_t>(server)];
    const ModelProfile& model = sc.service_profile(service);

    ServiceOutcome out;
    if (cached) {
        const auto choice = best_admissible_partition(ctx, md, server, n_assoc, service, d_items);
        if (choice) {
            out.cached = true;
            out.z = choice->z_star;
            out.delay = delay_components(dev, srv, model, out.z, d_items, true,
                                         ctx.was_deployed(server, service), n_assoc,
                                         ctx.gain(md, server, LinkDir::Up),
                                         ctx.gain(md, server, LinkDir::Down), sc.channel);
            out.upsilon = loss_if_served(ctx, model, out.z, d_items);
            return out;
        }
        // No admissible split under the policy; fall through to fallback.
    }
    if (ctx.policy().forced_z) {
        // FE-style on-demand service: cloud-streamed, raw data still uploaded.
        out.cached = false;
        out.z = std::min(*ctx.policy().forced_z, model.depth());
        out.delay = delay_components(dev, srv, model, out.z, d_items, true, false, n_assoc,
                                     ctx.gain(md, server, LinkDir::Up),
                                     ctx.gain(md, server, LinkDir::Down), sc.channel);
        out.upsilon = loss_if_served(ctx, model, out.z, d_items);
        return out;
    }
    out.cached = false;
    out.z = model.depth();
    out.delay = fallback_components(dev, srv, model, d_items, n_assoc,
                                    ctx.gain(md, server, LinkDir::Down), sc.channel);
    out.upsilon = 0.0;
    return out;
}

}  // namespace eisim
