#include "eisim/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "eisim/errors.hpp"
#include "eisim/units.hpp"

namespace eisim {

using nlohmann::json;

double sigmoid_value(const SigmoidFit& fit, double z) {
    return fit.w1 / (1.0 + std::exp(-fit.w2 * (z - fit.w3))) + fit.w4;
}

bool ModelProfile::has_table() const {
    if (layers.empty()) return false;
    return std::all_of(layers.begin(), layers.end(),
                       [](const LayerProfile& l) { return l.possibility.has_value(); });
}

void ModelProfile::finalize() {
    if (layers.empty()) throw ConfigError("model '" + model_id + "': empty layer list");
    if (raw_input_bytes < 0.0)
        throw ConfigError("model '" + model_id + "': negative raw input size");
    if (!has_table() && !sigmoid_fit)
        throw ConfigError("model '" + model_id +
                          "': layers without measured possibility require a sigmoid fit");

    param_prefix.assign(layers.size() + 1, 0.0);
    flops_prefix.assign(layers.size() + 1, 0.0);
    double prev_possibility = 2.0;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        LayerProfile& layer = layers[i];
        layer.index = static_cast<int>(i) + 1;
        const std::string where =
            "model '" + model_id + "', layer " + std::to_string(layer.index) +
            (layer.name.empty() ? "" : " ('" + layer.name + "')");
        if (layer.param_bytes < 0.0 || layer.flops_per_item < 0.0 ||
            layer.feature_bytes_per_item < 0.0)
            throw ConfigError(where + ": negative quantity");
        if (layer.possibility) {
            if (*layer.possibility < 0.0 || *layer.possibility > 1.0)
                throw ConfigError(where + ": possibility " + std::to_string(*layer.possibility) +
                                  " outside [0,1]");
            if (monotone && *layer.possibility > prev_possibility)
                throw ConfigError(where + ": possibility increases in a monotone-flagged table");
            prev_possibility = *layer.possibility;
        }
        param_prefix[i + 1] = param_prefix[i] + layer.param_bytes;
        flops_prefix[i + 1] = flops_prefix[i] + layer.flops_per_item;
    }
    total_bytes = param_prefix.back();
    total_flops_per_item = flops_prefix.back();
}

PossibilityMode preferred_mode(const ModelProfile& model) {
    return model.has_table() ? PossibilityMode::Table : PossibilityMode::Sigmoid;
}

double possibility_at(const ModelProfile& model, int z, PossibilityMode mode) {
    if (z < 0 || z > model.depth())
        throw std::out_of_range("possibility_at: z=" + std::to_string(z) + " outside [0," +
                                std::to_string(model.depth()) + "] for model '" + model.model_id +
                                "'");
    if (mode == PossibilityMode::Table) {
        if (z == 0) return 1.0;  // raw input leaves the device
        const auto& p = model.layers[static_cast<std::size_t>(z) - 1].possibility;
        if (!p)
            throw ConfigError("model '" + model.model_id + "': layer " + std::to_string(z) +
                              " has no measured possibility");
        return *p;
    }
    if (!model.sigmoid_fit)
        throw ConfigError("model '" + model.model_id + "': sigmoid mode without fit parameters");
    return std::clamp(sigmoid_value(*model.sigmoid_fit, static_cast<double>(z)), 0.0, 1.0);
}

SplitAccounting split(const ModelProfile& model, int z) {
    const int k = model.depth();
    if (z < 0 || z > k)
        throw std::out_of_range("split: z=" + std::to_string(z) + " outside [0," +
                                std::to_string(k) + "] for model '" + model.model_id + "'");
    SplitAccounting acc;
    acc.z = z;
    acc.w_dev = model.flops_prefix[static_cast<std::size_t>(z)];
    acc.w_edge = model.total_flops_per_item - acc.w_dev;
    acc.d_dev = model.param_prefix[static_cast<std::size_t>(z)];
    acc.d_edge = model.total_bytes - acc.d_dev;
    if (z == 0)
        acc.feature_bytes = model.raw_input_bytes;
    else if (z == k)
        acc.feature_bytes = 0.0;  // nothing crosses the link
    else
        acc.feature_bytes = model.layers[static_cast<std::size_t>(z) - 1].feature_bytes_per_item;
    acc.possibility = possibility_at(model, z, preferred_mode(model));
    return acc;
}

namespace {

double quantity(const json& j, const char* field, const std::string& where,
                double (*convert)(double, std::string_view)) {
    if (!j.contains(field))
        throw ConfigError(where + ": missing field '" + std::string(field) + "'");
    const json& q = j.at(field);
    if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
        throw ConfigError(where + ": field '" + std::string(field) +
                          "' must be {\"value\": number, \"unit\": string}");
    return convert(q.at("value").get<double>(), q.at("unit").get<std::string>());
}

}  // namespace

ModelProfile model_from_json(const json& j) {
    ModelProfile m;
    try {
        m.model_id = j.at("model_id").get<std::string>();
    } catch (const json::exception&) {
        throw ConfigError("catalog entry without a 'model_id'");
    }
    const std::string where = "model '" + m.model_id + "'";
    try {
        m.name = j.value("name", m.model_id);
        m.monotone = j.value("monotone", false);
        m.raw_input_bytes = quantity(j, "raw_input", where, size_to_bytes);
        if (j.contains("sigmoid_fit")) {
            const json& f = j.at("sigmoid_fit");
            m.sigmoid_fit = SigmoidFit{f.at("w1").get<double>(), f.at("w2").get<double>(),
                                       f.at("w3").get<double>(), f.at("w4").get<double>()};
        }
        if (!j.contains("layers") || !j.at("layers").is_array())
            throw ConfigError(where + ": missing 'layers' array");
        for (const json& lj : j.at("layers")) {
            LayerProfile layer;
            layer.name = lj.value("name", "");
            const std::string lwhere =
                where + ", layer " + std::to_string(m.layers.size() + 1) +
                (layer.name.empty() ? "" : " ('" + layer.name + "')");
            layer.param_bytes = quantity(lj, "param", lwhere, size_to_bytes);
            layer.flops_per_item = quantity(lj, "flops", lwhere, flops_from);
            layer.feature_bytes_per_item = quantity(lj, "feature", lwhere, size_to_bytes);
            if (lj.contains("possibility"))
                layer.possibility = lj.at("possibility").get<double>();
            m.layers.push_back(std::move(layer));
        }
    } catch (const json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    m.finalize();
    // Cross-check declared totals when the file carries them.
    if (j.contains("total_param")) {
        const double declared = quantity(j, "total_param", where, size_to_bytes);
        if (std::abs(declared - m.total_bytes) > 0.5)
            throw ConfigError(where + ": declared total size " + std::to_string(declared) +
                              " B does not match layer sum " + std::to_string(m.total_bytes) +
                              " B");
    }
    if (j.contains("total_flops")) {
        const double declared = quantity(j, "total_flops", where, flops_from);
        if (std::abs(declared - m.total_flops_per_item) > 0.5)
            throw ConfigError(where + ": declared total FLOPs does not match layer sum");
    }
    return m;
}

json model_to_json(const ModelProfile& m) {
    json j;
    j["model_id"] = m.model_id;
    j["name"] = m.name;
    j["monotone"] = m.monotone;
    j["raw_input"] = {{"value", m.raw_input_bytes}, {"unit", "B"}};
    if (m.sigmoid_fit)
        j["sigmoid_fit"] = {{"w1", m.sigmoid_fit->w1},
                            {"w2", m.sigmoid_fit->w2},
                            {"w3", m.sigmoid_fit->w3},
                            {"w4", m.sigmoid_fit->w4}};
    json layers = json::array();
    for (const LayerProfile& l : m.layers) {
        json lj;
        lj["name"] = l.name;
        lj["param"] = {{"value", l.param_bytes}, {"unit", "B"}};
        lj["flops"] = {{"value", l.flops_per_item}, {"unit", "FLOPs"}};
        lj["feature"] = {{"value", l.feature_bytes_per_item}, {"unit", "B"}};
        if (l.possibility) lj["possibility"] = *l.possibility;
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    return j;
}

std::vector<ModelProfile> load_catalog(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open catalog file '" + file.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("catalog file '" + file.string() + "': " + e.what());
    }
    std::vector<ModelProfile> models;
    if (j.is_object() && j.contains("models")) {
        for (const json& mj : j.at("models")) models.push_back(model_from_json(mj));
    } else {
        models.push_back(model_from_json(j));
    }
    return models;
}

}  // namespace eisim
