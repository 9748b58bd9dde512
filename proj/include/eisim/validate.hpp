#ifndef EISIM_VALIDATE_HPP
#define EISIM_VALIDATE_HPP

#include <string>
#include <vector>

#include "eisim/scenario.hpp"
#include "eisim/simulator.hpp"

namespace eisim {

struct Finding {
    bool error = false;  // false means warning
    std::string where;
    std::string message;
};

struct ScenarioReport {
    std::vector<Finding> findings;
    bool ok() const;
    std::string to_text() const;
};

// Full invariant pass over a materialized scenario: catalog consistency,
// entity parameter ranges, budget sanity. Warnings cover configurations that
// are legal but force degenerate behavior (e.g. storage too small for any
// service, so every request takes the fallback path).
ScenarioReport validate_scenario(const Scenario& scenario);

struct ComplianceReport {
    int slots_checked = 0;
    int c1_violations = 0;  // storage capacity
    int c2_violations = 0;  // unique association
    std::vector<std::string> details;
    bool ok() const { return c1_violations == 0 && c2_violations == 0; }
};

// Re-derives the per-slot constraint status from the logged records and the
// catalog, independently of the optimizer's own bookkeeping. Storage sums are
// recomputed from model profiles and compared with one byte of slack.
ComplianceReport check_constraints(const Scenario& scenario,
                                   const std::vector<SlotMetrics>& slots);

}  // namespace eisim

#endif
