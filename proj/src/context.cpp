#include "eisim/context.hpp"

#include "eisim/partition_opt.hpp"
#include "eisim/rng.hpp"

namespace eisim {

SlotContext::SlotContext(const Scenario& scenario, std::int64_t slot, std::uint64_t run_seed,
                         PrivacyQueue queue, std::vector<Request> requests,
                         std::vector<std::vector<bool>> deployed_prev, DecisionPolicy policy)
    : scenario_(&scenario),
      slot_(slot),
      run_seed_(run_seed),
      queue_(std::move(queue)),
      requests_(std::move(requests)),
      deployed_prev_(std::move(deployed_prev)),
      policy_(policy),
      probabilities_(scenario.request.probabilities(scenario.n_services())) {
    const int n = scenario.n_mds();
    const int m = scenario.n_servers();
    gains_.resize(static_cast<std::size_t>(n) * m * 2);
    for (int md = 0; md < n; ++md)
        for (int sv = 0; sv < m; ++sv)
            for (int dir = 0; dir < 2; ++dir)
                gains_[(static_cast<std::size_t>(md) * m + sv) * 2 + dir] = channel_gain(
                    scenario.mds[static_cast<std::size_t>(md)],
                    scenario.servers[static_cast<std::size_t>(sv)], scenario.channel, run_seed,
                    slot, dir == 0 ? LinkDir::Up : LinkDir::Down);
}

double SlotContext::gain(int md, int server, LinkDir dir) const {
    return gains_[(static_cast<std::size_t>(md) * scenario_->n_servers() + server) * 2 +
                  (dir == LinkDir::Up ? 0 : 1)];
}

const SlotContext::ServiceEval& SlotContext::eval(int server, int n_assoc, int md,
                                                  int service) const {
    auto [it, inserted] = tables_.try_emplace({server, n_assoc});
    EvalTable& table = it->second;
    const int n_services = scenario_->n_services();
    if (inserted) {
        table.entries.resize(static_cast<std::size_t>(scenario_->n_mds()) * n_services);
        table.row_built.assign(static_cast<std::size_t>(scenario_->n_mds()), 0);
    }
    if (!table.row_built[static_cast<std::size_t>(md)]) {
        const int d_items = requests_[static_cast<std::size_t>(md)].d_items;
        for (int svc = 0; svc < n_services; ++svc) {
            ServiceEval& e = table.entries[static_cast<std::size_t>(md) * n_services + svc];
            e.fallback_obj = fallback_objective(*this, md, server, n_assoc, svc, d_items);
            const auto best = best_admissible_partition(*this, md, server, n_assoc, svc, d_items);
            if (best) {
                e.served_obj = best->objective_at_z;
                e.z_star = best->z_star;
            } else {
                e.served_obj = e.fallback_obj;  // deploying cannot help this device
                e.z_star = -1;
            }
        }
        table.row_built[static_cast<std::size_t>(md)] = 1;
    }
    return table.entries[static_cast<std::size_t>(md) * n_services + service];
}

std::shared_ptr<const CoalitionEval> SlotContext::find_eval(
    int server, const std::vector<int>& members) const {
    auto it = coalition_cache_.find({server, members});
    return it == coalition_cache_.end() ? nullptr : it->second;
}

void SlotContext::store_eval(int server, const std::vector<int>& members,
                             std::shared_ptr<const CoalitionEval> eval) const {
    coalition_cache_.emplace(std::make_pair(server, members), std::move(eval));
}

}  // namespace eisim
