#pragma once

#include <map>
#include <string>
#include <vector>

#include "econet/graph.hpp"

namespace econet {

/// Link traversal costs by endpoint kinds.
struct CostScheme {
    double vv = 1;  // virtual-virtual
    double vp = 2;  // virtual-physical (either order)
    double pp = 3;  // physical-physical

    void validate() const;
};

enum class EfficiencyScope { Ecosystem, PhysicalOnly };

struct EfficiencyReport {
    double e_glob = 0;
    std::map<std::string, double> e_loc;  // node id -> local efficiency
    CostScheme scheme;
    EfficiencyScope scope = EfficiencyScope::Ecosystem;
};

struct ElocPair {
    std::string node_id;
    double physical;   // E_loc in the physical projection (0 if isolated there)
    double ecosystem;  // E_loc in the full ecosystem
};

struct ComparisonReport {
    EfficiencyReport ecosystem;
    EfficiencyReport physical;
    double relative_difference = 0;  // (E_eco - E_phys) / E_phys
    int relative_difference_percent = 0;  // rounded for display
    std::vector<ElocPair> paired_local;   // per physical node, sorted by id
};

EcosystemGraph assign_costs(const EcosystemGraph& g, const CostScheme& scheme = {});

// Dijkstra distances from a source; unreachable nodes get +infinity.
std::vector<double> shortest_costs_from(const EcosystemGraph& g, std::uint32_t source);
std::map<std::string, double> shortest_costs_from(const EcosystemGraph& g,
                                                  const std::string& source_id);

// Mean inverse shortest-path cost over ordered pairs; 1/inf = 0.
// threads > 1 parallelizes per-source searches; the accumulation order is
// fixed so results are identical for any thread count.
double global_efficiency(const EcosystemGraph& g, unsigned threads = 1);

// Global efficiency of the induced neighbor subgraph; 0 for degree < 2.
double local_efficiency(const EcosystemGraph& g, std::uint32_t node);
double local_efficiency(const EcosystemGraph& g, const std::string& node_id);

EfficiencyReport efficiency_report(const EcosystemGraph& g, const CostScheme& scheme,
                                   EfficiencyScope scope, unsigned threads = 1);

ComparisonReport compare_components(const EcosystemGraph& g,
                                    const CostScheme& scheme = {},
                                    unsigned threads = 1);

}  // namespace econet
