#ifndef EISIM_SCENARIO_HPP
#define EISIM_SCENARIO_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "eisim/catalog.hpp"
#include "eisim/topology.hpp"

namespace eisim {

struct RequestModel {
    std::string distribution = "uniform";  // "uniform" | "zipf"
    double zipf_s = 0.0;
    int d_min = 10;
    int d_max = 30;

    double mean_items() const { return 0.5 * (d_min + d_max); }
    // Per-service request probabilities p_l over n_services entries.
    std::vector<double> probabilities(int n_services) const;
};

// One deployable/requestable inference service backed by a model profile.
// Distinct services may share a profile but are cached independently.
struct Service {
    std::string service_id;
    int profile_index = 0;
};

struct Scenario {
    std::string name;
    double alpha = 1.0;
    ChannelModel channel;
    RequestModel request;
    std::vector<ModelProfile> profiles;
    std::vector<Service> services;
    std::vector<EdgeServer> servers;
    std::vector<MobileDevice> mds;

    int n_mds() const { return static_cast<int>(mds.size()); }
    int n_servers() const { return static_cast<int>(servers.size()); }
    int n_services() const { return static_cast<int>(services.size()); }
    const ModelProfile& service_profile(int service) const {
        return profiles[static_cast<std::size_t>(services[static_cast<std::size_t>(service)].profile_index)];
    }
    double theta() const;               // 0.5 * sum of squared budgets
    double sum_budgets() const;
};

struct Range {
    double min = 0.0;
    double max = 0.0;
};

// Present when the scenario file describes entity distributions rather than
// explicit lists; materialization draws concrete servers/MDs from it.
struct GeneratorSpec {
    std::uint64_t seed = 0;  // combined with the run seed
    int n_mds = 0;
    int n_servers = 0;
    Range md_compute_flops;
    double md_tx_power_dbm = 23.0;
    Range md_distance_m;
    Range privacy_budget_fraction;  // of mean requested items per slot
    Range server_compute_flops;
    Range server_storage_bytes;
    double server_bandwidth_hz = 0.0;
    double server_tx_power_dbm = 43.0;
    Range backhaul_bps;
};

struct ScenarioSpec {
    std::string name;
    double alpha = 1.0;
    ChannelModel channel;
    RequestModel request;
    std::vector<ModelProfile> profiles;
    int services_per_model = 1;
    std::optional<int> n_services_override;  // set by the services sweep axis
    std::optional<GeneratorSpec> generator;
    std::vector<EdgeServer> explicit_servers;
    std::vector<MobileDevice> explicit_mds;
    std::optional<double> storage_override_bytes;    // set by the storage sweep axis
    std::optional<double> budget_fraction_override;  // set by the privacy-budget axis
    std::string source_digest;  // hash of the file bytes, used in output names
};

ScenarioSpec load_scenario_spec(const std::filesystem::path& file);

// Draws concrete entities (generator specs) or copies explicit lists, applies
// overrides, and builds the service list. Deterministic in (spec, run_seed).
Scenario materialize(const ScenarioSpec& spec, std::uint64_t run_seed);

// Short hex digest used in output file names.
std::string scenario_digest(const ScenarioSpec& spec);

}  // namespace eisim

#endif
