#ifndef EISIM_COALITION_HPP
#define EISIM_COALITION_HPP

#include <memory>
#include <vector>

#include "eisim/context.hpp"
#include "eisim/deploy_opt.hpp"
#include "eisim/partition_opt.hpp"

namespace eisim {

// Full evaluation of one coalition under the slot's realized requests:
// deployment, per-member partition outcomes, and the averaged utility.
struct CoalitionEval {
    double utility = 0.0;
    DeploymentDecision deployment;
    std::vector<int> members;              // sorted ascending
    std::vector<ServiceOutcome> outcomes;  // aligned with members
    double sum_delay_s = 0.0;
    double sum_loss = 0.0;
};

std::shared_ptr<const CoalitionEval> evaluate_coalition(SlotContext& ctx, int server,
                                                        std::vector<int> members);

// One coalition per server; every device sits in exactly one coalition.
struct PartitionStructure {
    std::vector<std::vector<int>> members;  // per server, sorted ascending
    std::vector<int> assignment;            // device -> server
    std::vector<double> utilities;          // per server, 0 for empty coalitions
    double welfare = 0.0;

    bool valid(int n_mds, int n_servers) const;
};

PartitionStructure partition_from_assignment(std::vector<int> assignment, int n_servers);

struct GameConfig {
    int exchange_period = 10;       // propose an exchange every G-th iteration
    int max_iterations = 10000;     // proposal cap, reported when hit
    double improvement_epsilon = 1e-9;
    std::uint64_t seed = 0;
    bool collect_trace = true;
};

enum class MoveKind { Switch, Exchange, SweepSwitch, SweepExchange };

struct GameTraceEntry {
    int iteration = 0;
    MoveKind kind = MoveKind::Switch;
    bool accepted = false;
    double welfare = 0.0;
};

struct GameResult {
    PartitionStructure partition;
    std::vector<GameTraceEntry> trace;
    int iterations = 0;
    int accepted_moves = 0;
    bool converged = false;
};

// Computes utilities and welfare for every coalition of p.
void evaluate_partition(PartitionStructure& p, SlotContext& ctx);

// Welfare change if md moved from its coalition to `to` / if a and b swapped
// coalitions. Pure; used by both the move operators and the stability check.
double switch_delta(const PartitionStructure& p, int md, int to, SlotContext& ctx);
double exchange_delta(const PartitionStructure& p, int md_a, int md_b, SlotContext& ctx);

// Applies the move iff welfare strictly improves by more than epsilon; only
// the two affected coalitions are re-optimized.
bool try_switch(PartitionStructure& p, int md, int from, int to, SlotContext& ctx, double epsilon);
bool try_exchange(PartitionStructure& p, int md_a, int md_b, SlotContext& ctx, double epsilon);

// Randomized switch proposals with an exchange every G-th iteration. Once
// proposals stall (2*N*M consecutive rejections), a deterministic sweep over
// every single switch and pairwise exchange either finds a move or certifies
// stability. Random proposals alone cannot certify it.
GameResult run_game(PartitionStructure initial, const GameConfig& cfg, SlotContext& ctx);

struct StabilityReport {
    int improving_switches = 0;
    int improving_exchanges = 0;
    bool stable() const { return improving_switches == 0 && improving_exchanges == 0; }
};

// Exhaustively enumerates the permitted deviation set. Guarded to small
// instances (throws std::invalid_argument above guard_n devices).
StabilityReport check_d_stable(const PartitionStructure& p, SlotContext& ctx, double epsilon,
                               int guard_n = 12);

}  // namespace eisim

#endif
