#include "econet/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

namespace econet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void CostScheme::validate() const {
    if (!(vv > 0) || !(vp > 0) || !(pp > 0))
        throw std::invalid_argument("cost scheme values must be strictly positive");
}

EcosystemGraph assign_costs(const EcosystemGraph& g, const CostScheme& scheme) {
    scheme.validate();
    std::vector<double> costs;
    costs.reserve(g.edge_count());
    for (auto [u, v] : g.edges()) {
        bool up = g.node(u).kind == NodeKind::Physical;
        bool vp_ = g.node(v).kind == NodeKind::Physical;
        costs.push_back(up && vp_ ? scheme.pp : (!up && !vp_ ? scheme.vv : scheme.vp));
    }
    return g.with_costs(std::move(costs));
}

std::vector<double> shortest_costs_from(const EcosystemGraph& g, std::uint32_t source) {
    if (source >= g.node_count()) throw std::out_of_range("source index out of range");
    if (!g.has_costs() && g.edge_count() > 0)
        throw std::invalid_argument("graph has no edge costs");
    std::vector<double> dist(g.node_count(), kInf);
    dist[source] = 0;
    using Entry = std::pair<double, std::uint32_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (auto v : g.neighbors(u)) {
            double nd = d + g.cost_between(u, v);
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.emplace(nd, v);
            }
        }
    }
    return dist;
}

std::map<std::string, double> shortest_costs_from(const EcosystemGraph& g,
                                                  const std::string& source_id) {
    auto dist = shortest_costs_from(g, g.index_of(source_id));
    std::map<std::string, double> out;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) out[g.node(i).id] = dist[i];
    return out;
}

double global_efficiency(const EcosystemGraph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    if (n < 2) throw std::invalid_argument("global efficiency needs at least 2 nodes");
    if (!g.has_costs() && g.edge_count() > 0)
        throw std::invalid_argument("graph has no edge costs");

    // Per-source partial sums indexed by node so the final accumulation order
    // is independent of the execution schedule.
    std::vector<double> partial(n, 0.0);
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            auto dist = shortest_costs_from(g, static_cast<std::uint32_t>(s));
            double sum = 0;
            for (std::size_t t = 0; t < n; ++t)
                if (t != s && dist[t] < kInf) sum += 1.0 / dist[t];
            partial[s] = sum;
        }
    };
    if (threads <= 1) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            std::size_t b = std::min<std::size_t>(t * chunk, n);
            std::size_t e = std::min<std::size_t>(b + chunk, n);
            if (b < e) pool.emplace_back(worker, b, e);
        }
        for (auto& th : pool) th.join();
    }
    double total = 0;
    for (double p : partial) total += p;
    return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

namespace {

// Induced subgraph on the neighbors of a node, costs inherited.
EcosystemGraph neighbor_subgraph(const EcosystemGraph& g, std::uint32_t node) {
    const auto& nbrs = g.neighbors(node);
    std::vector<char> in(g.node_count(), 0);
    for (auto v : nbrs) in[v] = 1;
    std::vector<Node> nodes;
    for (auto v : nbrs) nodes.push_back(g.node(v));
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> orig;
    for (auto [u, v] : g.edges()) {
        if (in[u] && in[v]) {
            edges.emplace_back(g.node(u).id, g.node(v).id);
            orig.emplace_back(u, v);
        }
    }
    EcosystemGraph sub(std::move(nodes), std::move(edges));
    std::vector<double> costs(sub.edge_count());
    for (std::size_t e = 0; e < sub.edges().size(); ++e) {
        auto [u, v] = sub.edges()[e];
        costs[e] = g.cost_between(g.index_of(sub.node(u).id), g.index_of(sub.node(v).id));
    }
    return sub.with_costs(std::move(costs));
}

}  // namespace

double local_efficiency(const EcosystemGraph& g, std::uint32_t node) {
    if (node >= g.node_count()) throw std::out_of_range("node index out of range");
    if (g.degree(node) < 2) return 0;
    return global_efficiency(neighbor_subgraph(g, node));
}

double local_efficiency(const EcosystemGraph& g, const std::string& node_id) {
    return local_efficiency(g, g.index_of(node_id));
}

EfficiencyReport efficiency_report(const EcosystemGraph& g, const CostScheme& scheme,
                                   EfficiencyScope scope, unsigned threads) {
    EfficiencyReport rep;
    rep.scheme = scheme;
    rep.scope = scope;
    const EcosystemGraph weighted = assign_costs(
        scope == EfficiencyScope::PhysicalOnly ? physical_projection(g) : g, scheme);
    rep.e_glob = weighted.node_count() >= 2 ? global_efficiency(weighted, threads) : 0;
    for (std::uint32_t i = 0; i < weighted.node_count(); ++i)
        rep.e_loc[weighted.node(i).id] = local_efficiency(weighted, i);
    return rep;
}

ComparisonReport compare_components(const EcosystemGraph& g, const CostScheme& scheme,
                                    unsigned threads) {
    scheme.validate();
    std::size_t n_phys = 0;
    for (const auto& nd : g.nodes())
        if (nd.kind == NodeKind::Physical) ++n_phys;
    if (n_phys < 2)
        throw std::invalid_argument("comparison needs at least 2 physical nodes");

    ComparisonReport rep;
    rep.ecosystem = efficiency_report(g, scheme, EfficiencyScope::Ecosystem, threads);
    rep.physical = efficiency_report(g, scheme, EfficiencyScope::PhysicalOnly, threads);
    rep.relative_difference =
        rep.physical.e_glob > 0
            ? (rep.ecosystem.e_glob - rep.physical.e_glob) / rep.physical.e_glob
            : 0;
    rep.relative_difference_percent =
        static_cast<int>(std::lround(rep.relative_difference * 100.0));
    for (const auto& nd : g.nodes()) {
        if (nd.kind != NodeKind::Physical) continue;
        auto it = rep.physical.e_loc.find(nd.id);
        rep.paired_local.push_back({nd.id,
                                    it == rep.physical.e_loc.end() ? 0 : it->second,
                                    rep.ecosystem.e_loc.at(nd.id)});
    }
    std::sort(rep.paired_local.begin(), rep.paired_local.end(),
              [](const ElocPair& a, const ElocPair& b) { return a.node_id < b.node_id; });
    return rep;
}

}  // namespace econet
