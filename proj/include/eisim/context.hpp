#ifndef EISIM_CONTEXT_HPP
#define EISIM_CONTEXT_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "eisim/privacy.hpp"
#include "eisim/scenario.hpp"
#include "eisim/topology.hpp"

namespace eisim {

struct Request {
    int md_index = 0;
    int service = 0;
    int d_items = 0;
};

// How per-slot decisions are made; baselines override pieces of it.
struct DecisionPolicy {
    bool use_queue = true;          // false: ignore the virtual queue (FE, Matching)
    bool allow_deployment = true;   // false: nothing cached, all requests fall back (FL)
    std::optional<int> forced_z;    // FE pins z=0
    bool per_slot_cap = false;      // Matching: require d*phi(z) <= budget each slot
    bool prospective = true;        // deployment value: expectation over p_l vs realized request
};

struct CoalitionEval;  // defined in coalition.hpp

// Everything fixed for the duration of one slot's decision making: realized
// requests, channel gains, queue state, previous deployment. Also owns the
// memoization tables that make repeated coalition evaluations cheap. Gains
// and cached evaluations are pure functions of (scenario, seed, slot), so the
// caches never affect results, only speed.
class SlotContext {
public:
    SlotContext(const Scenario& scenario, std::int64_t slot, std::uint64_t run_seed,
                PrivacyQueue queue, std::vector<Request> requests,
                std::vector<std::vector<bool>> deployed_prev, DecisionPolicy policy = {});

    const Scenario& scenario() const { return *scenario_; }
    std::int64_t slot() const { return slot_; }
    std::uint64_t run_seed() const { return run_seed_; }
    double alpha() const { return scenario_->alpha; }
    const DecisionPolicy& policy() const { return policy_; }
    const PrivacyQueue& queue() const { return queue_; }

    // Queue pressure applied in objectives; zero when the policy ignores it.
    double queue_weight(int md) const {
        return policy_.use_queue ? queue_.weight_for(md) : 0.0;
    }
    double budget(int md) const {
        return scenario_->mds[static_cast<std::size_t>(md)].privacy_budget;
    }
    const Request& request(int md) const { return requests_[static_cast<std::size_t>(md)]; }
    const std::vector<Request>& requests() const { return requests_; }
    bool was_deployed(int server, int service) const {
        return deployed_prev_[static_cast<std::size_t>(server)][static_cast<std::size_t>(service)];
    }
    const std::vector<double>& request_probabilities() const { return probabilities_; }

    double gain(int md, int server, LinkDir dir) const;

    // Best served objective and fallback objective for one (device, service)
    // pair under a given coalition size. z_star = -1 when no admissible split
    // exists (then only the fallback path is available).
    struct ServiceEval {
        double served_obj = 0.0;
        int z_star = -1;
        double fallback_obj = 0.0;
    };
    const ServiceEval& eval(int server, int n_assoc, int md, int service) const;

    // Memoized coalition evaluations, keyed by (server, exact member list).
    std::shared_ptr<const CoalitionEval> find_eval(int server,
                                                   const std::vector<int>& members) const;
    void store_eval(int server, const std::vector<int>& members,
                    std::shared_ptr<const CoalitionEval> eval) const;

    mutable std::uint64_t objective_evals = 0;  // instrumentation for complexity checks

private:
    const Scenario* scenario_;
    std::int64_t slot_;
    std::uint64_t run_seed_;
    PrivacyQueue queue_;
    std::vector<Request> requests_;
    std::vector<std::vector<bool>> deployed_prev_;
    DecisionPolicy policy_;
    std::vector<double> probabilities_;
    std::vector<double> gains_;  // [md][server][dir], drawn eagerly by key

    struct EvalTable {
        std::vector<ServiceEval> entries;  // n_mds x n_services
        std::vector<char> row_built;       // per device, filled on demand
    };
    mutable std::map<std::pair<int, int>, EvalTable> tables_;
    mutable std::map<std::pair<int, std::vector<int>>, std::shared_ptr<const CoalitionEval>>
        coalition_cache_;
};

}  // namespace eisim

#endif
