#pragma once

#include <cstdint>

#include "econet/graph.hpp"

namespace econet {

/// Parameters for the coupled physical/virtual network generator.
struct SynthParams {
    std::size_t n_physical = 200;
    std::size_t attach_m = 2;     // edges per new node, preferential attachment
    // Defaults are calibrated so the ecosystem-vs-physical global efficiency
    // gain of a generated network lands near 30%.
    double p_website = 0.8;       // probability a physical node owns a virtual twin
    double p_mirror = 0.3;        // probability a physical edge is mirrored virtually
    double p_cross = 0.3;         // probability a physical node links a neighbor's twin
    double extra_vv = 0.3;        // expected extra random v-v edges per virtual node
    std::uint64_t seed = 0;

    void validate() const;
};

// Scale-free physical layer with a coupled virtual layer: twins, mirrored
// edges, and random virtual noise. Deterministic for a fixed seed.
EcosystemGraph generate_coupled(const SynthParams& params);

}  // namespace econet
