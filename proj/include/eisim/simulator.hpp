#ifndef EISIM_SIMULATOR_HPP
#define EISIM_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eisim/coalition.hpp"
#include "eisim/context.hpp"
#include "eisim/delay.hpp"
#include "eisim/privacy.hpp"
#include "eisim/scenario.hpp"

namespace eisim {

enum class Policy { Proposed, FullLocal, FullEdge, Matching };

std::string policy_name(Policy p);
std::optional<Policy> policy_from_name(const std::string& name);

struct RunOptions {
    std::uint64_t seed = 1;
    int slots = 100;
    std::optional<double> alpha_override;
    GameConfig game;                // seed field is derived per slot internally
    bool per_md_queues = false;
    bool cold_start = false;        // re-randomize the partition every slot
    bool realized_value = false;    // deployment value on realized requests only
    bool collect_trace = true;
};

struct MdSlotRecord {
    int md = 0;
    int server = 0;
    int service = 0;
    int d_items = 0;
    int z = 0;
    bool cached = false;  // served from the edge cache (vs fallback / on-demand)
    DelayBreakdown delay;
    double upsilon = 0.0;
};

struct SlotMetrics {
    std::int64_t slot = 0;
    std::vector<MdSlotRecord> per_md;
    std::vector<std::vector<int>> deployed;  // per server, sorted service indices
    std::vector<double> used_bytes;          // per server
    double system_delay_s = 0.0;
    double sum_losses = 0.0;
    double sum_budgets = 0.0;
    double xi_before = 0.0;
    double xi_after = 0.0;
    double objective = 0.0;  // drift-plus-penalty value at the slot-start queue
    double welfare = 0.0;
    int game_iterations = 0;
    int game_accepted = 0;
    bool game_converged = true;
    DriftReport drift;
};

struct SlotState {
    PartitionStructure partition;
    std::vector<std::vector<bool>> deployed;
    PrivacyQueue queue;
};

SlotState initial_state(const Scenario& scenario, const RunOptions& opts);

// One request per device; model drawn from the configured distribution,
// item count uniform on [d_min, d_max]. Pure in (scenario, seed, slot).
std::vector<Request> sample_requests(const Scenario& scenario, std::uint64_t seed,
                                     std::int64_t slot);

struct SlotTrace {
    std::int64_t slot = 0;
    std::vector<GameTraceEntry> entries;
};

SlotMetrics run_slot(SlotState& state, const std::vector<Request>& requests, Policy policy,
                     const Scenario& scenario, const RunOptions& opts, std::int64_t slot,
                     SlotTrace* trace);

struct RunSummary {
    int slots = 0;
    double avg_delay_s = 0.0;        // mean over devices and slots
    double privacy_loss_pct = 0.0;   // sum(upsilon) / sum(d_items) * 100
    double final_xi = 0.0;
    double xi_over_t = 0.0;
    double avg_slot_excess = 0.0;    // mean of sum(upsilon) - sum(budget)
    double sum_budgets_per_slot = 0.0;
    double theta = 0.0;
    double avg_game_iterations = 0.0;
    int unconverged_slots = 0;
    int drift_quad_violations = 0;
    int drift_theta_warnings = 0;
};

struct RunResult {
    std::vector<SlotMetrics> slots;
    std::vector<SlotTrace> traces;
    RunSummary summary;
};

RunResult run_horizon(const Scenario& scenario, Policy policy, const RunOptions& opts);

enum class SweepAxis { Mds, Servers, Services, Storage, PrivacyBudget, Alpha };

std::optional<SweepAxis> sweep_axis_from_name(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepSpec {
    SweepAxis axis = SweepAxis::Mds;
    std::vector<double> values;
    std::vector<Policy> policies;
    int n_seeds = 1;  // seeds base_seed .. base_seed + n_seeds - 1
};

struct SweepRow {
    double value = 0.0;
    Policy policy = Policy::Proposed;
    std::uint64_t seed = 0;
    RunSummary summary;
};

// Applies one axis value to a copy of the spec (counts need a generator-form
// scenario; throws ConfigError otherwise).
ScenarioSpec apply_axis(const ScenarioSpec& spec, SweepAxis axis, double value);

// Cross product of (value, policy, seed); rows come back in deterministic
// nested order regardless of the number of worker threads.
std::vector<SweepRow> run_sweep(const ScenarioSpec& spec, const SweepSpec& sweep,
                                const RunOptions& opts, int n_threads = 0);

}  // namespace eisim

#endif
