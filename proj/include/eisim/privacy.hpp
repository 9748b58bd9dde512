#ifndef EISIM_PRIVACY_HPP
#define EISIM_PRIVACY_HPP

#include <span>
#include <vector>

namespace eisim {

// Per-slot exposure of one device: items times leakage possibility at the
// chosen split. Unassociated (or fully-local fallback) requests leak nothing.
double privacy_loss(int d_items, double possibility, bool associated);

// Virtual queue of accumulated budget excess. The default is the single
// aggregate queue summed over devices; a per-device variant is kept behind
// the per_md flag for sensitivity studies.
struct PrivacyQueue {
    bool per_md = false;
    double xi = 0.0;             // aggregate backlog
    std::vector<double> xi_n;    // per-device backlogs (per_md mode)
    double theta = 0.0;          // 0.5 * sum of squared budgets, fixed per scenario

    static PrivacyQueue aggregate(double theta);
    static PrivacyQueue per_device(double theta, int n_mds);

    // Pressure weight applied to device n's budget slack in objectives.
    double weight_for(int md_index) const {
        return per_md ? xi_n[static_cast<std::size_t>(md_index)] : xi;
    }
    double total_backlog() const;
};

// xi' = max(0, xi + sum(losses) - sum(budgets)); per-device mode projects each
// queue separately. Lists must be the same length (contract error otherwise).
PrivacyQueue queue_update(const PrivacyQueue& q, std::span<const double> losses,
                          std::span<const double> budgets);

// Drift-plus-penalty objective for one slot:
//   alpha * delay - sum_n weight_n * (budget_n - loss_n) + theta.
double slot_objective(double total_delay_s, std::span<const double> losses,
                      std::span<const double> budgets, const PrivacyQueue& q, double alpha);

// Coalition utility: (-alpha * sum(delays) + xi-weighted budget slack - theta)
// averaged over members. Empty coalitions are handled by callers (utility 0).
double coalition_utility(std::span<const double> delays, std::span<const double> losses,
                         std::span<const double> budgets, double xi, double alpha, double theta);
double coalition_utility_weighted(std::span<const double> delays, std::span<const double> losses,
                                  std::span<const double> budgets,
                                  std::span<const double> xi_weights, double alpha, double theta);

// Pathwise drift diagnostics for one queue step. quad_ok checks the
// always-valid bound dL <= xi*X + X^2/2; theta_ok checks the looser
// dL <= xi*X + theta form, which can fail when |X| exceeds the root of the
// squared-budget sum (reported as a warning, not an invariant).
struct DriftReport {
    double delta_l = 0.0;
    double excess = 0.0;  // X = sum(losses) - sum(budgets)
    bool quad_ok = true;
    bool theta_ok = true;
};
DriftReport drift_check(double xi_before, double xi_after, double excess, double theta);

}  // namespace eisim

#endif
