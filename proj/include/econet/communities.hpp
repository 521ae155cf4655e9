#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "econet/graph.hpp"

namespace econet {

/// Node -> group assignment with m contiguous nonempty groups.
struct Partition {
    std::vector<std::uint32_t> groups;  // indexed like EcosystemGraph::nodes()
    std::uint32_t m = 0;

    void validate(const EcosystemGraph& g) const;
};

struct MixingMatrix {
    Eigen::MatrixXd e;   // e(r,s) = fraction of edge endpoints joining r and s
    Eigen::VectorXd a;   // row sums
};

enum class ModularityVariant { Standard, SquaredShare };

struct ModularityScore {
    double q = 0;
    double q_norm = 0;
    std::uint32_t m = 0;
    ModularityVariant variant = ModularityVariant::Standard;
};

struct CompositionReport {
    std::vector<double> virtual_fraction;  // per group
    double mean_virtual_fraction = 0;
    double gini = 0;
};

// Degree-corrected blockmodel log-likelihood
//   L = sum_{r,s} m_rs ln(m_rs / (kappa_r kappa_s)),
// with m_rr counting internal edge endpoints twice and 0 ln 0 = 0.
double dcsbm_objective(const EcosystemGraph& g, const Partition& p);

// Kernighan-Lin style vertex moving from random starts; deterministic for
// fixed (seed, restarts).
Partition fit_dcsbm(const EcosystemGraph& g, std::uint32_t m, std::uint64_t seed,
                    std::uint32_t restarts = 20);

MixingMatrix mixing_matrix(const EcosystemGraph& g, const Partition& p);

double modularity(const MixingMatrix& mx,
                  ModularityVariant variant = ModularityVariant::Standard);

double normalized_modularity(double q, std::uint32_t m);

CompositionReport composition(const EcosystemGraph& g, const Partition& p);

double gini(const std::vector<double>& values);

struct SweepRow {
    std::uint32_t m;
    double objective;
    double q_norm;
};

std::vector<SweepRow> sweep_group_count(const EcosystemGraph& g, std::uint32_t m_lo,
                                        std::uint32_t m_hi, std::uint64_t seed,
                                        std::uint32_t restarts = 20);

}  // namespace econet
