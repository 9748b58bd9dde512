#ifndef EISIM_TOPOLOGY_HPP
#define EISIM_TOPOLOGY_HPP

#include <cstdint>
#include <string>

namespace eisim {

struct EdgeServer {
    std::string server_id;
    double compute_flops = 0.0;   // F_m, FLOP/s
    double storage_bytes = 0.0;   // C_m
    double bandwidth_hz = 0.0;    // B_m, shared up/down
    double tx_power_dbm = 0.0;    // P_m
    double backhaul_bps = 0.0;    // cloud-to-edge rate
};

struct MobileDevice {
    std::string md_id;
    double compute_flops = 0.0;   // F_n
    double tx_power_dbm = 0.0;    // P_n
    double distance_m = 0.0;      // to any candidate server
    double privacy_budget = 0.0;  // per-slot average cap, possibility-weighted items
};

struct ChannelModel {
    double path_loss_exponent = 3.5;
    double shadowing_sigma_db = 8.0;
    double noise_psd_dbm_hz = -174.0;
};

enum class LinkDir { Up, Down };

double dbm_to_watts(double dbm);

// distance^-exponent path loss with i.i.d. lognormal shadowing, redrawn per
// (slot, device, server, direction). Fully determined by the key, not by call
// order, so candidate coalitions can be evaluated in any sequence.
double channel_gain(const MobileDevice& md, const EdgeServer& server, const ChannelModel& ch,
                    std::uint64_t seed, std::int64_t slot, LinkDir dir);

// Equal split of B_m / F_m across the coalition; n_associated=0 is a caller
// error (empty coalitions have no rates), reported as std::domain_error.
double shared_bandwidth(const EdgeServer& server, int n_associated);
double shared_compute(const EdgeServer& server, int n_associated);

// Shannon capacity b log2(1 + P h / (N0 b)), P in dBm, N0 in dBm/Hz.
double link_rate(double bandwidth_hz, double tx_power_dbm, double gain, double noise_psd_dbm_hz);

}  // namespace eisim

#endif
