#include "econet/graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace econet {

namespace {

std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

std::string to_string(NodeKind k) {
    return k == NodeKind::Physical ? "physical" : "virtual";
}

NodeKind parse_node_kind(const std::string& token) {
    std::string t = lower(trim(token));
    if (t == "physical") return NodeKind::Physical;
    if (t == "virtual") return NodeKind::Virtual;
    throw ParseError("unknown node kind '" + token + "'");
}

EcosystemGraph::EcosystemGraph(
    std::vector<Node> nodes, std::vector<std::pair<std::string, std::string>> edges)
    : nodes_(std::move(nodes)) {
    for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second)
            throw ParseError("duplicate node id '" + nodes_[i].id + "'");
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> dedup;
    for (const auto& [a, b] : edges) {
        auto ia = index_.find(a);
        auto ib = index_.find(b);
        if (ia == index_.end() || ib == index_.end())
            throw ParseError("edge (" + a + "," + b + ") references undeclared node '" +
                             (ia == index_.end() ? a : b) + "'");
        std::uint32_t u = ia->second, v = ib->second;
        if (u == v) throw ParseError("self-loop on node '" + a + "'");
        if (u > v) std::swap(u, v);
        dedup.emplace(u, v);
    }
    edges_.assign(dedup.begin(), dedup.end());
    build_adjacency();
}

void EcosystemGraph::build_adjacency() {
    adjacency_.assign(nodes_.size(), {});
    for (const auto& [u, v] : edges_) {
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool EcosystemGraph::has_node(const std::string& id) const {
    return index_.count(id) > 0;
}

std::uint32_t EcosystemGraph::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node id '" + id + "'");
    return it->second;
}

double EcosystemGraph::cost_between(std::uint32_t u, std::uint32_t v) const {
    if (u > v) std::swap(u, v);
    auto it = cost_lookup_.find(edge_key(u, v));
    if (it == cost_lookup_.end()) throw std::out_of_range("no such edge");
    return it->second;
}

EcosystemGraph EcosystemGraph::with_costs(std::vector<double> costs) const {
    if (costs.size() != edges_.size())
        throw std::invalid_argument("cost vector size mismatch");
    for (double c : costs)
        if (!(c > 0)) throw std::invalid_argument("edge costs must be positive");
    EcosystemGraph out = *this;
    out.costs_ = std::move(costs);
    out.cost_lookup_.clear();
    for (std::size_t i = 0; i < edges_.size(); ++i)
        out.cost_lookup_[edge_key(edges_[i].first, edges_[i].second)] = out.costs_[i];
    return out;
}

EcosystemGraph load_network(std::istream& nodes_source, std::istream& edges_source,
                            const IngestOptions& options) {
    std::vector<Node> nodes;
    std::string line;
    std::size_t row = 0;
    bool saw_header = false;
    while (std::getline(nodes_source, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_csv(t);
        if (!saw_header && lower(fields[0]) == "id") {
            saw_header = true;
            continue;
        }
        saw_header = true;
        if (fields.size() < 2)
            throw ParseError("nodes row " + std::to_string(row) + ": expected id,kind[,label]");
        NodeKind kind;
        try {
            kind = parse_node_kind(fields[1]);
        } catch (const ParseError& e) {
            throw ParseError("nodes row " + std::to_string(row) + ": " + e.what());
        }
        nodes.push_back({fields[0], kind, fields.size() > 2 ? fields[2] : ""});
    }
    if (nodes.empty()) throw ParseError("node file is empty");

    std::vector<std::pair<std::string, std::string>> edges;
    row = 0;
    saw_header = false;
    while (std::getline(edges_source, line)) {
        ++row;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto fields = split_csv(t);
        if (!saw_header && lower(fields[0]) == "source") {
            saw_header = true;
            continue;
        }
        saw_header = true;
        if (fields.size() < 2)
            throw ParseError("edges row " + std::to_string(row) + ": expected source,target");
        if (fields[0] == fields[1]) {
            if (options.drop_self_loops) continue;
            throw ParseError("edges row " + std::to_string(row) + ": self-loop on '" +
                             fields[0] + "'");
        }
        edges.emplace_back(fields[0], fields[1]);
    }
    // Symmetrization is implicit: the constructor stores unordered pairs, so
    // (a,b) and (b,a) collapse. With symmetrize off the same merge applies,
    // matching the undirected data model.
    (void)options.symmetrize_directed_input;

    EcosystemGraph g(std::move(nodes), std::move(edges));
    if (options.restrict_to_largest_component) g = largest_component(g);
    return g;
}

EcosystemGraph load_network_files(const std::string& nodes_path,
                                  const std::string& edges_path,
                                  const IngestOptions& options) {
    std::ifstream nf(nodes_path);
    if (!nf) throw ParseError("cannot open nodes file '" + nodes_path + "'");
    std::ifstream ef(edges_path);
    if (!ef) throw ParseError("cannot open edges file '" + edges_path + "'");
    return load_network(nf, ef, options);
}

void serialize_network(const EcosystemGraph& g, std::ostream& nodes_out,
                       std::ostream& edges_out) {
    std::vector<const Node*> sorted;
    sorted.reserve(g.node_count());
    for (const auto& n : g.nodes()) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(),
              [](const Node* a, const Node* b) { return a->id < b->id; });
    nodes_out << "id,kind,label\n";
    for (const Node* n : sorted)
        nodes_out << n->id << ',' << to_string(n->kind) << ',' << n->label << '\n';

    std::vector<std::pair<std::string, std::string>> eids;
    eids.reserve(g.edge_count());
    for (const auto& [u, v] : g.edges()) {
        std::string a = g.node(u).id, b = g.node(v).id;
        if (b < a) std::swap(a, b);
        eids.emplace_back(std::move(a), std::move(b));
    }
    std::sort(eids.begin(), eids.end());
    edges_out << "source,target\n";
    for (const auto& [a, b] : eids) edges_out << a << ',' << b << '\n';
}

void serialize_network_files(const EcosystemGraph& g, const std::string& nodes_path,
                             const std::string& edges_path) {
    std::ofstream nf(nodes_path);
    std::ofstream ef(edges_path);
    serialize_network(g, nf, ef);
}

namespace {

EcosystemGraph induced_subgraph(const EcosystemGraph& g,
                                const std::vector<std::uint32_t>& keep) {
    std::vector<char> in(g.node_count(), 0);
    for (auto i : keep) in[i] = 1;
    std::vector<Node> nodes;
    nodes.reserve(keep.size());
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        if (in[i]) nodes.push_back(g.node(i));
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<double> costs;
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        auto [u, v] = g.edges()[e];
        if (in[u] && in[v]) {
            edges.emplace_back(g.node(u).id, g.node(v).id);
            if (g.has_costs()) costs.push_back(g.edge_costs()[e]);
        }
    }
    EcosystemGraph out(std::move(nodes), std::move(edges));
    if (g.has_costs()) {
        // Constructor sorts edges by index pair; remap costs through ids.
        std::vector<double> remapped(out.edge_count());
        for (std::size_t e = 0; e < out.edges().size(); ++e) {
            auto [u, v] = out.edges()[e];
            remapped[e] = g.cost_between(g.index_of(out.node(u).id),
                                         g.index_of(out.node(v).id));
        }
        out = out.with_costs(std::move(remapped));
    }
    return out;
}

}  // namespace

EcosystemGraph physical_projection(const EcosystemGraph& g) {
    std::vector<std::uint32_t> keep;
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        if (g.node(i).kind == NodeKind::Physical) keep.push_back(i);
    return induced_subgraph(g, keep);
}

std::vector<std::size_t> degree_sequence(const EcosystemGraph& g,
                                         std::optional<NodeKind> kind_filter) {
    std::vector<std::size_t> out;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        if (kind_filter && g.node(i).kind != *kind_filter) continue;
        out.push_back(g.degree(i));
    }
    return out;
}

EcosystemGraph largest_component(const EcosystemGraph& g) {
    if (g.node_count() == 0) throw std::invalid_argument("empty graph has no components");
    std::vector<std::int64_t> comp(g.node_count(), -1);
    std::vector<std::vector<std::uint32_t>> components;
    for (std::uint32_t s = 0; s < g.node_count(); ++s) {
        if (comp[s] >= 0) continue;
        std::vector<std::uint32_t> stack{s}, members;
        comp[s] = static_cast<std::int64_t>(components.size());
        while (!stack.empty()) {
            std::uint32_t u = stack.back();
            stack.pop_back();
            members.push_back(u);
            for (auto v : g.neighbors(u)) {
                if (comp[v] < 0) {
                    comp[v] = comp[s];
                    stack.push_back(v);
                }
            }
        }
        components.push_back(std::move(members));
    }
    auto min_id = [&](const std::vector<std::uint32_t>& c) {
        std::string best = g.node(c[0]).id;
        for (auto i : c) best = std::min(best, g.node(i).id);
        return best;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < components.size(); ++i) {
        if (components[i].size() > components[best].size() ||
            (components[i].size() == components[best].size() &&
             min_id(components[i]) < min_id(components[best])))
            best = i;
    }
    return induced_subgraph(g, components[best]);
}

}  // namespace econet
