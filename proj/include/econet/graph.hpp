#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace econet {

enum class NodeKind { Physical, Virtual };

std::string to_string(NodeKind k);
NodeKind parse_node_kind(const std::string& token);

struct Node {
    std::string id;
    NodeKind kind;
    std::string label;
};

struct IngestOptions {
    bool symmetrize_directed_input = true;
    bool drop_self_loops = true;
    bool restrict_to_largest_component = false;
};

/// Undirected simple graph whose nodes carry a physical/virtual kind tag.
/// Immutable after construction; edges are stored once with the smaller
/// node index first. Optional per-edge costs are attached by the
/// efficiency module via with_costs().
class EcosystemGraph {
public:
    EcosystemGraph() = default;
    EcosystemGraph(std::vector<Node> nodes,
                   std::vector<std::pair<std::string, std::string>> edges);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const std::vector<Node>& nodes() const { return nodes_; }
    // Edges as index pairs (u < v) into nodes().
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const {
        return edges_;
    }

    bool has_node(const std::string& id) const;
    std::uint32_t index_of(const std::string& id) const;
    const Node& node(std::uint32_t idx) const { return nodes_[idx]; }

    // Neighbor indices, sorted ascending.
    const std::vector<std::uint32_t>& neighbors(std::uint32_t idx) const {
        return adjacency_[idx];
    }
    std::size_t degree(std::uint32_t idx) const { return adjacency_[idx].size(); }

    bool has_costs() const { return !costs_.empty(); }
    // Parallel to edges(); only valid when has_costs().
    const std::vector<double>& edge_costs() const { return costs_; }
    double cost_between(std::uint32_t u, std::uint32_t v) const;

    EcosystemGraph with_costs(std::vector<double> costs) const;

private:
    std::vector<Node> nodes_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    std::vector<double> costs_;
    std::vector<std::vector<std::uint32_t>> adjacency_;
    std::unordered_map<std::string, std::uint32_t> index_;
    std::unordered_map<std::uint64_t, double> cost_lookup_;

    void build_adjacency();
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

EcosystemGraph load_network(std::istream& nodes_source, std::istream& edges_source,
                            const IngestOptions& options = {});
EcosystemGraph load_network_files(const std::string& nodes_path,
                                  const std::string& edges_path,
                                  const IngestOptions& options = {});

// Nodes sorted by id, edges by (min-id, max-id); byte-stable.
void serialize_network(const EcosystemGraph& g, std::ostream& nodes_out,
                       std::ostream& edges_out);
void serialize_network_files(const EcosystemGraph& g, const std::string& nodes_path,
                             const std::string& edges_path);

// Induced subgraph on physical nodes; kinds and costs are preserved.
EcosystemGraph physical_projection(const EcosystemGraph& g);

std::vector<std::size_t> degree_sequence(const EcosystemGraph& g,
                                         std::optional<NodeKind> kind_filter = {});

// Largest connected component; ties broken by the smallest node id contained.
EcosystemGraph largest_component(const EcosystemGraph& g);

}  // namespace econet
