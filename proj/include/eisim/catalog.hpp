#ifndef EISIM_CATALOG_HPP
#define EISIM_CATALOG_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace eisim {

// Fitted possibility curve phi(z) = w1 / (1 + exp(-w2 (z - w3))) + w4,
// clamped to [0,1] when used as a possibility.
struct SigmoidFit {
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;
    double w4 = 0.0;
};

// Unclamped curve value; defined for real-valued z.
double sigmoid_value(const SigmoidFit& fit, double z);

struct LayerProfile {
    int index = 0;  // 1-based position in the model
    std::string name;
    double param_bytes = 0.0;
    double flops_per_item = 0.0;
    double feature_bytes_per_item = 0.0;  // output feature map size
    std::optional<double> possibility;    // in [0,1] when measured
};

struct ModelProfile {
    std::string model_id;
    std::string name;
    double raw_input_bytes = 0.0;  // feature size "before layer 1"
    bool monotone = false;         // possibility column declared non-increasing
    std::optional<SigmoidFit> sigmoid_fit;
    std::vector<LayerProfile> layers;

    // Derived by finalize():
    double total_bytes = 0.0;
    double total_flops_per_item = 0.0;
    std::vector<double> param_prefix;  // size depth()+1, param_prefix[z] = sum of first z layers
    std::vector<double> flops_prefix;

    int depth() const { return static_cast<int>(layers.size()); }
    bool has_table() const;  // every layer carries a measured possibility

    // Recomputes totals/prefix sums and checks all invariants; throws
    // ConfigError naming the offending layer on violation.
    void finalize();
};

enum class PossibilityMode { Table, Sigmoid };

// phi(z). Table mode: z=0 is 1.0 by convention (raw input exposed), z in
// [1..K] reads the stored per-layer value. Sigmoid mode evaluates the fit and
// clamps to [0,1]. Out-of-range z throws std::out_of_range; sigmoid mode
// without fit parameters throws ConfigError.
double possibility_at(const ModelProfile& model, int z, PossibilityMode mode);

// Table when measured per-layer possibilities exist, else sigmoid.
PossibilityMode preferred_mode(const ModelProfile& model);

struct SplitAccounting {
    int z = 0;
    double w_dev = 0.0;
    double w_edge = 0.0;
    double d_dev = 0.0;
    double d_edge = 0.0;
    double feature_bytes = 0.0;  // per item uploaded at the split
    double possibility = 0.0;
};

// Accounting for running the first z layers on the device and the rest on the
// edge. Edge-side quantities are computed as total minus device-side so the
// decomposition identities hold exactly.
SplitAccounting split(const ModelProfile& model, int z);

// Loads one catalog file: either a single model object or {"models": [...]}.
// All profiles come back finalized. Schema violations throw ConfigError with
// the offending model/layer named.
std::vector<ModelProfile> load_catalog(const std::filesystem::path& file);
ModelProfile model_from_json(const nlohmann::json& j);

// Serializes with normalized units (B / FLOPs); save-load round-trips exactly.
nlohmann::json model_to_json(const ModelProfile& model);

}  // namespace eisim

#endif
