#ifndef EISIM_PARTITION_OPT_HPP
#define EISIM_PARTITION_OPT_HPP

#include <optional>

#include "eisim/context.hpp"
#include "eisim/delay.hpp"

namespace eisim {

struct PartitionChoice {
    int md_index = 0;
    int service = 0;
    int z_star = 0;
    double objective_at_z = 0.0;
};

// Per-device share of the drift-plus-penalty objective when the request is
// served from the edge cache at split z:
//   alpha * tau_n(z) - xi_n * (budget_n - loss_n(z)).
// tau includes the c2e term when the service was not cached in the previous
// slot. n_assoc is the coalition size fixing the bandwidth/compute shares.
double per_md_objective(const SlotContext& ctx, int md, int server, int n_assoc, int service,
                        int z, int d_items);

// Same objective on the no-cache path (full-local with cloud fetch; zero
// privacy loss). Under a forced-z policy the uncached path instead serves at
// the forced split with the model streamed from the cloud each slot.
double fallback_objective(const SlotContext& ctx, int md, int server, int n_assoc, int service,
                          int d_items);

// Exact argmin over every split point z in {0..K}; ties break toward the
// smaller z. Ignores the context's admissibility policy knobs.
PartitionChoice optimal_partition(const SlotContext& ctx, int md, int server, int n_assoc,
                                  int service, int d_items);

// Policy-aware variant: honors forced_z and the per-slot privacy cap; empty
// admissible set yields nullopt and the caller falls back.
std::optional<PartitionChoice> best_admissible_partition(const SlotContext& ctx, int md,
                                                         int server, int n_assoc, int service,
                                                         int d_items);

// Realizes the decision for one request into measurable quantities.
struct ServiceOutcome {
    bool cached = false;
    int z = 0;
    double upsilon = 0.0;
    DelayBreakdown delay;
};
ServiceOutcome realize_service(const SlotContext& ctx, int md, int server, int n_assoc,
                               int service, int d_items, bool cached);

}  // namespace eisim

#endif
