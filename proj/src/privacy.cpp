#include "eisim/privacy.hpp"

#include <algorithm>
#include <stdexcept>

namespace eisim {

double privacy_loss(int d_items, double possibility, bool associated) {
    if (d_items < 0) throw std::invalid_argument("privacy_loss: negative item count");
    return associated ? d_items * possibility : 0.0;
}

PrivacyQueue PrivacyQueue::aggregate(double theta) {
    PrivacyQueue q;
    q.theta = theta;
    return q;
}

PrivacyQueue PrivacyQueue::per_device(double theta, int n_mds) {
    PrivacyQueue q;
    q.per_md = true;
    q.theta = theta;
    q.xi_n.assign(static_cast<std::size_t>(n_mds), 0.0);
    return q;
}

double PrivacyQueue::total_backlog() const {
    if (!per_md) return xi;
    double s = 0.0;
    for (double v : xi_n) s += v;
    return s;
}

PrivacyQueue queue_update(const PrivacyQueue& q, std::span<const double> losses,
                          std::span<const double> budgets) {
    if (losses.size() != budgets.size())
        throw std::invalid_argument("queue_update: losses/budgets length mismatch");
    PrivacyQueue next = q;
    if (q.per_md) {
        if (q.xi_n.size() != losses.size())
            throw std::invalid_argument("queue_update: queue size does not match device count");
        for (std::size_t n = 0; n < losses.size(); ++n)
            next.xi_n[n] = std::max(0.0, q.xi_n[n] + losses[n] - budgets[n]);
    } else {
        double excess = 0.0;
        for (std::size_t n = 0; n < losses.size(); ++n) excess += losses[n] - budgets[n];
        next.xi = std::max(0.0, q.xi + excess);
    }
    return next;
}

double slot_objective(double total_delay_s, std::span<const double> losses,
                      std::span<const double> budgets, const PrivacyQueue& q, double alpha) {
    double weighted_slack = 0.0;
    for (std::size_t n = 0; n < losses.size(); ++n)
        weighted_slack += q.weight_for(static_cast<int>(n)) * (budgets[n] - losses[n]);
    return alpha * total_delay_s - weighted_slack + q.theta;
}

double coalition_utility(std::span<const double> delays, std::span<const double> losses,
                         std::span<const double> budgets, double xi, double alpha,
                         double theta) {
    std::vector<double> weights(delays.size(), xi);
    return coalition_utility_weighted(delays, losses, budgets, weights, alpha, theta);
}

double coalition_utility_weighted(std::span<const double> delays, std::span<const double> losses,
                                  std::span<const double> budgets,
                                  std::span<const double> xi_weights, double alpha,
                                  double theta) {
    if (delays.empty()) throw std::invalid_argument("coalition_utility: empty coalition");
    double sum_delay = 0.0;
    double weighted_slack = 0.0;
    for (std::size_t n = 0; n < delays.size(); ++n) {
        sum_delay += delays[n];
        weighted_slack += xi_weights[n] * (budgets[n] - losses[n]);
    }
    return (-alpha * sum_delay + weighted_slack - theta) / static_cast<double>(delays.size());
}

DriftReport drift_check(double xi_before, double xi_after, double excess, double theta) {
    DriftReport r;
    r.excess = excess;
    r.delta_l = 0.5 * (xi_after * xi_after - xi_before * xi_before);
    const double slack = 1e-9 * std::max(1.0, std::abs(r.delta_l));
    r.quad_ok = r.delta_l <= xi_before * excess + 0.5 * excess * excess + slack;
    r.theta_ok = r.delta_l <= xi_before * excess + theta + slack;
    return r;
}

}  // namespace eisim
