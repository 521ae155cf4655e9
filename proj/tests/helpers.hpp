#pragma once

#include <random>
#include <string>
#include <vector>

#include "econet/graph.hpp"

namespace econet::testutil {

// Build a graph from short specs: kinds like "pvpv" (p=physical, v=virtual),
// ids "n0", "n1", ...; edges by index.
inline EcosystemGraph make_graph(const std::string& kinds,
                                 const std::vector<std::pair<int, int>>& edges) {
    std::vector<Node> nodes;
    for (std::size_t i = 0; i < kinds.size(); ++i)
        nodes.push_back({"n" + std::to_string(i),
                         kinds[i] == 'p' ? NodeKind::Physical : NodeKind::Virtual, ""});
    std::vector<std::pair<std::string, std::string>> es;
    for (auto [a, b] : edges)
        es.emplace_back("n" + std::to_string(a), "n" + std::to_string(b));
    return EcosystemGraph(std::move(nodes), std::move(es));
}

// Erdos-Renyi G(n, p); retries until at least one edge when require_edge.
inline EcosystemGraph random_graph(std::size_t n, double p, std::mt19937_64& rng,
                                   bool require_edge = true, double p_virtual = 0.5) {
    for (;;) {
        std::vector<Node> nodes;
        std::bernoulli_distribution virt(p_virtual);
        for (std::size_t i = 0; i < n; ++i)
            nodes.push_back({"n" + std::to_string(i),
                             virt(rng) ? NodeKind::Virtual : NodeKind::Physical, ""});
        std::vector<std::pair<std::string, std::string>> edges;
        std::bernoulli_distribution coin(p);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (coin(rng))
                    edges.emplace_back("n" + std::to_string(i), "n" + std::to_string(j));
        if (!require_edge || !edges.empty())
            return EcosystemGraph(std::move(nodes), std::move(edges));
    }
}

}  // namespace econet::testutil
