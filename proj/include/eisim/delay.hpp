#ifndef EISIM_DELAY_HPP
#define EISIM_DELAY_HPP

#include <span>

#include "eisim/catalog.hpp"
#include "eisim/topology.hpp"

namespace eisim {

// All wire transfers convert bytes to bits; rates are bit/s.
struct DelayBreakdown {
    double c2e_s = 0.0;    // cloud-to-edge model download
    double down_s = 0.0;   // device sub-model download
    double local_s = 0.0;  // device-side inference
    double up_s = 0.0;     // intermediate feature upload
    double edge_s = 0.0;   // edge-side inference
    double total_s = 0.0;  // pipelined total
};

// c2e + down + max(local, max(up, edge)): upload and edge compute overlap the
// device-side computation once the sub-model is in place.
double pipelined_total(const DelayBreakdown& b);

// Full pipeline for one request served at partition point z on an edge-cached
// model. c2e is charged only on a 0->1 deployment transition. Throws
// UnservedError when deployed_now is false (callers route undeployed requests
// through fallback_components instead).
DelayBreakdown delay_components(const MobileDevice& md, const EdgeServer& server,
                                const ModelProfile& model, int z, int d_items,
                                bool deployed_now, bool deployed_prev, int n_associated,
                                double gain_up, double gain_down, const ChannelModel& ch);

// Service path for a model the server does not cache: the device fetches the
// whole model through the edge (cloud backhaul + downlink, every slot) and
// runs it locally. Nothing is uploaded.
DelayBreakdown fallback_components(const MobileDevice& md, const EdgeServer& server,
                                   const ModelProfile& model, int d_items, int n_associated,
                                   double gain_down, const ChannelModel& ch);

double system_delay(std::span<const DelayBreakdown> breakdowns);

}  // namespace eisim

#endif
