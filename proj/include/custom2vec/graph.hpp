#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "custom2vec/errors.hpp"

namespace c2v {

using NodeId = std::uint32_t;

/// Unordered node pair stored canonically as (first < second).
struct NodePair {
    NodeId first;
    NodeId second;

    NodePair() = default;
    NodePair(NodeId a, NodeId b) : first(a < b ? a : b), second(a < b ? b : a) {}

    friend bool operator==(const NodePair&, const NodePair&) = default;
    friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

inline std::uint64_t pair_key(NodeId a, NodeId b) {
    NodeId lo = a < b ? a : b;
    NodeId hi = a < b ? b : a;
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

inline std::uint64_t pair_key(const NodePair& p) { return pair_key(p.first, p.second); }

struct NodePairHash {
    std::size_t operator()(const NodePair& p) const {
        std::uint64_t k = pair_key(p);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

enum class NodeKind : std::uint8_t {
    Trial = 0,
    Indication = 1,
    Intervention = 2,
    Phase = 3,
    Sponsor = 4,
    Endpoint = 5,
};

inline constexpr std::size_t kNodeKindCount = 6;

std::string_view to_string(NodeKind kind);
NodeKind node_kind_from_string(std::string_view name);

enum class EdgeOrigin : std::uint8_t { Native = 0, Custom = 1 };

std::string_view to_string(EdgeOrigin origin);
EdgeOrigin edge_origin_from_string(std::string_view name);

struct Node {
    NodeId id;
    NodeKind kind;
    std::string label;
};

struct Edge {
    NodeId u; // u < v
    NodeId v;
    EdgeOrigin origin;
};

class SubgraphView;

/// Undirected heterogeneous graph over typed, labelled nodes. Node ids are
/// dense and assigned in insertion order; (kind, label) pairs are unique.
/// Construction is single-writer; once built the graph is safe to share
/// across concurrent readers.
class TypedGraph {
public:
    /// Inserts a node, or returns the existing id for an already-known
    /// (kind, label) pair.
    NodeId add_node(NodeKind kind, std::string_view label);

    /// Inserts an undirected edge. Returns false (and leaves the existing
    /// origin untouched) when the pair is already linked.
    bool add_edge(NodeId u, NodeId v, EdgeOrigin origin);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    const Node& node(NodeId id) const;
    std::optional<NodeId> find_node(NodeKind kind, std::string_view label) const;

    std::size_t degree(NodeId id) const;
    std::span<const NodeId> neighbors(NodeId id) const;

    bool has_edge(NodeId u, NodeId v) const;
    std::optional<EdgeOrigin> edge_origin(NodeId u, NodeId v) const;

    std::span<const Node> nodes() const { return nodes_; }
    std::span<const Edge> edges() const { return edges_; }

    std::vector<NodeId> nodes_of_kind(NodeKind kind) const;

    /// Restriction to the given vertices and edges; every edge endpoint must
    /// be in the vertex set. The view shares this graph's node ids.
    SubgraphView subgraph_view(std::span<const NodeId> vertices,
                               std::span<const NodePair> edges) const;

    // Walk-surface accessors shared with SubgraphView.
    std::span<const NodeId> vertex_ids() const;

private:
    void check_id(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
    std::array<std::unordered_map<std::string, NodeId>, kNodeKindCount> index_;
    std::unordered_map<std::uint64_t, EdgeOrigin> edge_index_;
    std::vector<NodeId> vertex_ids_; // 0..n-1, kept in step with nodes_
};

/// A restriction of a TypedGraph to a vertex subset and an explicit edge set.
/// Exposes the same adjacency interface as TypedGraph over parent node ids.
class SubgraphView {
public:
    SubgraphView(const TypedGraph& parent, std::span<const NodeId> vertices,
                 std::span<const NodePair> edges);

    std::size_t node_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    bool contains(NodeId id) const { return local_.count(id) != 0; }

    std::size_t degree(NodeId id) const;
    std::span<const NodeId> neighbors(NodeId id) const;
    bool has_edge(NodeId u, NodeId v) const;

    /// Vertex ids in ascending order (parent ids).
    std::span<const NodeId> vertex_ids() const { return vertices_; }

    const TypedGraph& parent() const { return *parent_; }

private:
    const TypedGraph* parent_;
    std::vector<NodeId> vertices_; // sorted parent ids
    std::vector<std::vector<NodeId>> adjacency_;
    std::unordered_map<NodeId, std::size_t> local_;
    std::unordered_map<std::uint64_t, bool> edge_index_;
    std::size_t edge_count_ = 0;
};

} // namespace c2v
