#ifndef EISIM_DEPLOY_OPT_HPP
#define EISIM_DEPLOY_OPT_HPP

#include <span>
#include <vector>

#include "eisim/context.hpp"

namespace eisim {

struct DeploymentDecision {
    int server = 0;
    std::vector<int> deployed;  // service indices, sorted ascending
    double used_bytes = 0.0;
    double value = 0.0;  // coalition deployment utility of the chosen set
};

// Prospective expected coalition utility of caching candidate_services on
// server for this coalition: each member's request distribution is served at
// its best admissible split when cached, else through the fallback path.
// Defined for any candidate set, feasible or not.
double deployment_value(const SlotContext& ctx, std::span<const int> members, int server,
                        std::span<const int> candidate_services);

// Cost-effectiveness greedy under the storage budget: repeatedly adds the
// service maximizing p_j * gain_j / D_j among those still fitting, stopping
// when no remaining candidate improves the value. Ties break toward the
// smaller service index.
DeploymentDecision greedy_deploy(const SlotContext& ctx, std::span<const int> members,
                                 int server);

// Exact maximizer over all storage-feasible subsets; value ties break toward
// the lexicographically smallest deployed set. Guarded to small libraries.
DeploymentDecision brute_force_deploy(const SlotContext& ctx, std::span<const int> members,
                                      int server, int max_library = 20);

}  // namespace eisim

#endif
