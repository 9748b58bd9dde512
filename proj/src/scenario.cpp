#include "eisim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eisim/errors.hpp"
#include "eisim/rng.hpp"
#include "eisim/units.hpp"

namespace eisim {

using nlohmann::json;

std::vector<double> RequestModel::probabilities(int n_services) const {
    std::vector<double> p(static_cast<std::size_t>(n_services), 0.0);
    if (n_services == 0) return p;
    if (distribution == "uniform" || zipf_s == 0.0) {
        const double u = 1.0 / n_services;
        for (double& v : p) v = u;
        return p;
    }
    double norm = 0.0;
    for (int i = 0; i < n_services; ++i) {
        p[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i) + 1.0, -zipf_s);
        norm += p[static_cast<std::size_t>(i)];
    }
    for (double& v : p) v /= norm;
    return p;
}

double Scenario::theta() const {
    double t = 0.0;
    for (const MobileDevice& md : mds) t += md.privacy_budget * md.privacy_budget;
    return 0.5 * t;
}

double Scenario::sum_budgets() const {
    double s = 0.0;
    for (const MobileDevice& md : mds) s += md.privacy_budget;
    return s;
}

namespace {

double quantity_of(const json& q, const std::string& where,
                   double (*convert)(double, std::string_view)) {
    if (!q.is_object() || !q.contains("value") || !q.contains("unit"))
        throw ConfigError(where + ": expected {\"value\": number, \"unit\": string}");
    return convert(q.at("value").get<double>(), q.at("unit").get<std::string>());
}

Range range_of(const json& q, const std::string& where,
               double (*convert)(double, std::string_view)) {
    if (!q.is_object() || !q.contains("min") || !q.contains("max") || !q.contains("unit"))
        throw ConfigError(where + ": expected {\"min\", \"max\", \"unit\"}");
    const std::string unit = q.at("unit").get<std::string>();
    Range r{convert(q.at("min").get<double>(), unit), convert(q.at("max").get<double>(), unit)};
    if (r.min > r.max) throw ConfigError(where + ": min > max");
    return r;
}

Range plain_range(const json& q, const std::string& where) {
    if (!q.is_object() || !q.contains("min") || !q.contains("max"))
        throw ConfigError(where + ": expected {\"min\", \"max\"}");
    Range r{q.at("min").get<double>(), q.at("max").get<double>()};
    if (r.min > r.max) throw ConfigError(where + ": min > max");
    return r;
}

EdgeServer server_from_json(const json& j, const std::string& where) {
    EdgeServer s;
    s.server_id = j.at("server_id").get<std::string>();
    s.compute_flops = quantity_of(j.at("compute"), where + ".compute", flops_rate_from);
    s.storage_bytes = quantity_of(j.at("storage"), where + ".storage", size_to_bytes);
    s.bandwidth_hz = quantity_of(j.at("bandwidth"), where + ".bandwidth", freq_to_hz);
    s.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    s.backhaul_bps = quantity_of(j.at("backhaul"), where + ".backhaul", rate_to_bps);
    return s;
}

MobileDevice md_from_json(const json& j, const std::string& where) {
    MobileDevice d;
    d.md_id = j.at("md_id").get<std::string>();
    d.compute_flops = quantity_of(j.at("compute"), where + ".compute", flops_rate_from);
    d.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    d.distance_m = j.at("distance_m").get<double>();
    d.privacy_budget = j.at("privacy_budget").get<double>();
    return d;
}

}  // namespace

ScenarioSpec load_scenario_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open scenario file '" + file.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::exception& e) {
        throw ConfigError("scenario file '" + file.string() + "': " + e.what());
    }

    ScenarioSpec spec;
    {
        std::uint64_t digest = fnv1a(bytes);
        std::ostringstream hex;
        hex << std::hex << (digest & 0xffffffffull);
        spec.source_digest = hex.str();
    }
    try {
        spec.name = j.value("name", file.stem().string());
        spec.alpha = j.value("alpha", 1.0);
        if (spec.alpha <= 0.0) throw ConfigError("scenario: alpha must be positive");
        if (j.contains("channel")) {
            const json& c = j.at("channel");
            spec.channel.path_loss_exponent = c.value("path_loss_exponent", 3.5);
            spec.channel.shadowing_sigma_db = c.value("shadowing_sigma_db", 8.0);
            spec.channel.noise_psd_dbm_hz = c.value("noise_psd_dbm_hz", -174.0);
            if (spec.channel.path_loss_exponent <= 0.0)
                throw ConfigError("scenario: path_loss_exponent must be positive");
            if (spec.channel.shadowing_sigma_db < 0.0)
                throw ConfigError("scenario: shadowing_sigma_db must be non-negative");
        }
        if (j.contains("request")) {
            const json& r = j.at("request");
            spec.request.distribution = r.value("distribution", "uniform");
            if (spec.request.distribution != "uniform" && spec.request.distribution != "zipf")
                throw ConfigError("scenario: unknown request distribution '" +
                                  spec.request.distribution + "'");
            spec.request.zipf_s = r.value("zipf_s", 0.0);
            spec.request.d_min = r.value("d_min", 10);
            spec.request.d_max = r.value("d_max", 30);
            if (spec.request.d_min < 1 || spec.request.d_max < spec.request.d_min)
                throw ConfigError("scenario: invalid request item range");
        }

        if (!j.contains("catalogs") || !j.at("catalogs").is_array() || j.at("catalogs").empty())
            throw ConfigError("scenario: missing non-empty 'catalogs' array");
        for (const json& cj : j.at("catalogs")) {
            std::filesystem::path p = cj.get<std::string>();
            if (p.is_relative()) p = file.parent_path() / p;
            for (ModelProfile& m : load_catalog(p)) spec.profiles.push_back(std::move(m));
        }
        spec.services_per_model = j.value("services_per_model", 1);
        if (spec.services_per_model < 1)
            throw ConfigError("scenario: services_per_model must be >= 1");

        if (j.contains("generator")) {
            const json& g = j.at("generator");
            GeneratorSpec gen;
            gen.seed = g.value("seed", 0ull);
            gen.n_mds = g.at("n_mds").get<int>();
            gen.n_servers = g.at("n_servers").get<int>();
            if (gen.n_mds < 1 || gen.n_servers < 1)
                throw ConfigError("scenario generator: counts must be >= 1");
            gen.md_compute_flops = range_of(g.at("md_compute"), "md_compute", flops_rate_from);
            gen.md_tx_power_dbm = g.at("md_tx_power_dbm").get<double>();
            gen.md_distance_m = plain_range(g.at("md_distance_m"), "md_distance_m");
            gen.privacy_budget_fraction =
                plain_range(g.at("privacy_budget_fraction"), "privacy_budget_fraction");
            gen.server_compute_flops =
                range_of(g.at("server_compute"), "server_compute", flops_rate_from);
            gen.server_storage_bytes =
                range_of(g.at("server_storage"), "server_storage", size_to_bytes);
            gen.server_bandwidth_hz =
                quantity_of(g.at("server_bandwidth"), "server_bandwidth", freq_to_hz);
            gen.server_tx_power_dbm = g.at("server_tx_power_dbm").get<double>();
            gen.backhaul_bps = range_of(g.at("backhaul"), "backhaul", rate_to_bps);
            spec.generator = gen;
        } else {
            if (!j.contains("servers") || !j.contains("mds"))
                throw ConfigError(
                    "scenario: needs either a 'generator' section or explicit 'servers' and "
                    "'mds' lists");
            for (const json& sj : j.at("servers"))
                spec.explicit_servers.push_back(
                    server_from_json(sj, "server[" + std::to_string(spec.explicit_servers.size()) + "]"));
            for (const json& mj : j.at("mds"))
                spec.explicit_mds.push_back(
                    md_from_json(mj, "md[" + std::to_string(spec.explicit_mds.size()) + "]"));
            if (spec.explicit_servers.empty() || spec.explicit_mds.empty())
                throw ConfigError("scenario: explicit server/md lists must be non-empty");
        }
    } catch (const json::exception& e) {
        throw ConfigError("scenario file '" + file.string() + "': " + e.what());
    }
    return spec;
}

std::string scenario_digest(const ScenarioSpec& spec) { return spec.source_digest; }

Scenario materialize(const ScenarioSpec& spec, std::uint64_t run_seed) {
    Scenario sc;
    sc.name = spec.name;
    sc.alpha = spec.alpha;
    sc.channel = spec.channel;
    sc.request = spec.request;
    sc.profiles = spec.profiles;

    const int n_profiles = static_cast<int>(sc.profiles.size());
    const int n_services = spec.n_services_override
                               ? *spec.n_services_override
                               : spec.services_per_model * n_profiles;
    if (n_services < 1) throw ConfigError("scenario: no services");
    for (int s = 0; s < n_services; ++s) {
        const int profile = s % n_profiles;
        const int copy = s / n_profiles;
        sc.services.push_back(
            Service{sc.profiles[static_cast<std::size_t>(profile)].model_id + "#" +
                        std::to_string(copy),
                    profile});
    }

    if (spec.generator) {
        const GeneratorSpec& g = *spec.generator;
        KeyedRng rng{g.seed, run_seed, fnv1a("topology")};
        for (int i = 0; i < g.n_servers; ++i) {
            EdgeServer s;
            s.server_id = "s" + std::to_string(i);
            s.compute_flops = rng.uniform(g.server_compute_flops.min, g.server_compute_flops.max);
            s.storage_bytes = rng.uniform(g.server_storage_bytes.min, g.server_storage_bytes.max);
            s.bandwidth_hz = g.server_bandwidth_hz;
            s.tx_power_dbm = g.server_tx_power_dbm;
            s.backhaul_bps = rng.uniform(g.backhaul_bps.min, g.backhaul_bps.max);
            sc.servers.push_back(std::move(s));
        }
        const double mean_items = sc.request.mean_items();
        for (int i = 0; i < g.n_mds; ++i) {
            MobileDevice d;
            d.md_id = "md" + std::to_string(i);
            d.compute_flops = rng.uniform(g.md_compute_flops.min, g.md_compute_flops.max);
            d.tx_power_dbm = g.md_tx_power_dbm;
            d.distance_m = rng.uniform(g.md_distance_m.min, g.md_distance_m.max);
            const double frac =
                rng.uniform(g.privacy_budget_fraction.min, g.privacy_budget_fraction.max);
            d.privacy_budget = frac * mean_items;
            sc.mds.push_back(std::move(d));
        }
    } else {
        sc.servers = spec.explicit_servers;
        sc.mds = spec.explicit_mds;
    }

    if (spec.storage_override_bytes)
        for (EdgeServer& s : sc.servers) s.storage_bytes = *spec.storage_override_bytes;
    if (spec.budget_fraction_override)
        for (MobileDevice& d : sc.mds)
            d.privacy_budget = *spec.budget_fraction_override * sc.request.mean_items();

    return sc;
}

}  // namespace eisim
