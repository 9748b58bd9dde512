#include "eisim/delay.hpp"

#include <algorithm>
#include <stdexcept>

#include "eisim/errors.hpp"

namespace eisim {

namespace {
constexpr double kBitsPerByte = 8.0;
}

double pipelined_total(const DelayBreakdown& b) {
    return b.c2e_s + b.down_s + std::max(b.local_s, std::max(b.up_s, b.edge_s));
}

DelayBreakdown delay_components(const MobileDevice& md, const EdgeServer& server,
                                const ModelProfile& model, int z, int d_items,
                                bool deployed_now, bool deployed_prev, int n_associated,
                                double gain_up, double gain_down, const ChannelModel& ch) {
    if (d_items < 1) throw std::invalid_argument("delay_components: d_items must be >= 1");
    if (!deployed_now)
        throw UnservedError("delay_components: model '" + model.model_id +
                            "' not deployed on server '" + server.server_id + "'");

    const SplitAccounting acc = split(model, z);
    const double b = shared_bandwidth(server, n_associated);
    const double f = shared_compute(server, n_associated);
    const double r_up = link_rate(b, md.tx_power_dbm, gain_up, ch.noise_psd_dbm_hz);
    const double r_down = link_rate(b, server.tx_power_dbm, gain_down, ch.noise_psd_dbm_hz);

    DelayBreakdown d;
    if (!deployed_prev) d.c2e_s = model.total_bytes * kBitsPerByte / server.backhaul_bps;
    d.down_s = acc.d_dev * kBitsPerByte / r_down;
    d.local_s = d_items * acc.w_dev / md.compute_flops;
    d.up_s = d_items * acc.feature_bytes * kBitsPerByte / r_up;
    d.edge_s = d_items * acc.w_edge / f;
    d.total_s = pipelined_total(d);
    return d;
}

DelayBreakdown fallback_components(const MobileDevice& md, const EdgeServer& server,
                                   const ModelProfile& model, int d_items, int n_associated,
                                   double gain_down, const ChannelModel& ch) {
    if (d_items < 1) throw std::invalid_argument("fallback_components: d_items must be >= 1");
    const double b = shared_bandwidth(server, n_associated);
    const double r_down = link_rate(b, server.tx_power_dbm, gain_down, ch.noise_psd_dbm_hz);

    DelayBreakdown d;
    d.c2e_s = model.total_bytes * kBitsPerByte / server.backhaul_bps;
    d.down_s = model.total_bytes * kBitsPerByte / r_down;
    d.local_s = d_items * model.total_flops_per_item / md.compute_flops;
    d.total_s = pipelined_total(d);
    return d;
}

double system_delay(std::span<const DelayBreakdown> breakdowns) {
    double total = 0.0;
    for (const DelayBreakdown& b : breakdowns) total += b.total_s;
    return total;
}

}  // namespace eisim
