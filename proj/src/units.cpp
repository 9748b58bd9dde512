#include "eisim/units.hpp"

#include <array>
#include <utility>

#include "eisim/errors.hpp"

namespace eisim {
namespace {

struct UnitEntry {
    std::string_view name;
    double factor;
};

double lookup(std::string_view unit, const UnitEntry* table, std::size_t n,
              std::string_view kind, double value) {
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].name == unit) return value * table[i].factor;
    }
    throw ConfigError("unknown " + std::string(kind) + " unit '" + std::string(unit) + "'");
}

constexpr std::array kSizeUnits = {
    UnitEntry{"B", 1.0},
    UnitEntry{"KB", 1024.0},
    UnitEntry{"MB", 1024.0 * 1024.0},
    UnitEntry{"GB", 1024.0 * 1024.0 * 1024.0},
    UnitEntry{"KiB", 1024.0},
    UnitEntry{"MiB", 1024.0 * 1024.0},
    UnitEntry{"GiB", 1024.0 * 1024.0 * 1024.0},
};

constexpr std::array kFlopsUnits = {
    UnitEntry{"FLOPs", 1.0},
    UnitEntry{"KFLOPs", 1e3},
    UnitEntry{"MFLOPs", 1e6},
    UnitEntry{"GFLOPs", 1e9},
    UnitEntry{"TFLOPs", 1e12},
};

constexpr std::array kFlopsRateUnits = {
    UnitEntry{"FLOPS", 1.0},
    UnitEntry{"KFLOPS", 1e3},
    UnitEntry{"MFLOPS", 1e6},
    UnitEntry{"GFLOPS", 1e9},
    UnitEntry{"TFLOPS", 1e12},
};

constexpr std::array kRateUnits = {
    UnitEntry{"bps", 1.0},
    UnitEntry{"Kbps", 1e3},
    UnitEntry{"Mbps", 1e6},
    UnitEntry{"Gbps", 1e9},
};

constexpr std::array kFreqUnits = {
    UnitEntry{"Hz", 1.0},
    UnitEntry{"KHz", 1e3},
    UnitEntry{"MHz", 1e6},
    UnitEntry{"GHz", 1e9},
};

}  // namespace

double size_to_bytes(double value, std::string_view unit) {
    return lookup(unit, kSizeUnits.data(), kSizeUnits.size(), "size", value);
}

double flops_from(double value, std::string_view unit) {
    return lookup(unit, kFlopsUnits.data(), kFlopsUnits.size(), "compute-load", value);
}

double flops_rate_from(double value, std::string_view unit) {
    return lookup(unit, kFlopsRateUnits.data(), kFlopsRateUnits.size(), "compute-rate", value);
}

double rate_to_bps(double value, std::string_view unit) {
    return lookup(unit, kRateUnits.data(), kRateUnits.size(), "rate", value);
}

double freq_to_hz(double value, std::string_view unit) {
    return lookup(unit, kFreqUnits.data(), kFreqUnits.size(), "frequency", value);
}

std::string canonical_size_unit() { return "B"; }

}  // namespace eisim
