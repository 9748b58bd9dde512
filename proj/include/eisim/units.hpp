#ifndef EISIM_UNITS_HPP
#define EISIM_UNITS_HPP

#include <string>
#include <string_view>

namespace eisim {

// Every physical quantity in config files carries an explicit unit; a missing
// or unknown unit is a ConfigError, never a silent default.
//
// Conventions (see README): data sizes are binary (KB = 1024 B, matching the
// layer tables this tool consumes), while rates, bandwidth and compute are
// decimal (Mbps = 1e6 bit/s, MHz = 1e6 Hz, GFLOPS = 1e9 FLOP/s).

double size_to_bytes(double value, std::string_view unit);
double flops_from(double value, std::string_view unit);        // work: FLOPs
double flops_rate_from(double value, std::string_view unit);   // speed: FLOP/s
double rate_to_bps(double value, std::string_view unit);       // bit/s
double freq_to_hz(double value, std::string_view unit);

// Inverse of size_to_bytes for a fixed display unit (used by writers).
std::string canonical_size_unit();

}  // namespace eisim

#endif
