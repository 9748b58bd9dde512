#include "eisim/topology.hpp"

#include <cmath>
#include <stdexcept>

#include "eisim/rng.hpp"

namespace eisim {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double channel_gain(const MobileDevice& md, const EdgeServer& server, const ChannelModel& ch,
                    std::uint64_t seed, std::int64_t slot, LinkDir dir) {
    const double path_loss = std::pow(md.distance_m, -ch.path_loss_exponent);
    if (ch.shadowing_sigma_db <= 0.0) return path_loss;
    KeyedRng rng{seed, fnv1a("channel-gain"), static_cast<std::uint64_t>(slot),
                 fnv1a(md.md_id), fnv1a(server.server_id),
                 static_cast<std::uint64_t>(dir == LinkDir::Up ? 1 : 2)};
    const double shadow_db = rng.normal(0.0, ch.shadowing_sigma_db);
    return path_loss * std::pow(10.0, shadow_db / 10.0);
}

double shared_bandwidth(const EdgeServer& server, int n_associated) {
    if (n_associated < 1)
        throw std::domain_error("shared_bandwidth: no associated devices on server '" +
                                server.server_id + "'");
    return server.bandwidth_hz / n_associated;
}

double shared_compute(const EdgeServer& server, int n_associated) {
    if (n_associated < 1)
        throw std::domain_error("shared_compute: no associated devices on server '" +
                                server.server_id + "'");
    return server.compute_flops / n_associated;
}

double link_rate(double bandwidth_hz, double tx_power_dbm, double gain,
                 double noise_psd_dbm_hz) {
    const double signal_w = dbm_to_watts(tx_power_dbm) * gain;
    const double noise_w = dbm_to_watts(noise_psd_dbm_hz) * bandwidth_hz;
    return bandwidth_hz * std::log2(1.0 + signal_w / noise_w);
}

}  // namespace eisim
