#include "custom2vec/graph.hpp"

#include <algorithm>

namespace c2v {

namespace {

constexpr std::array<std::string_view, kNodeKindCount> kKindNames = {
    "trial", "indication", "intervention", "phase", "sponsor", "endpoint"};

} // namespace

std::string_view to_string(NodeKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)];
}

NodeKind node_kind_from_string(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i)
        if (kKindNames[i] == name) return static_cast<NodeKind>(i);
    throw DataError("unknown node kind: '" + std::string(name) + "'");
}

std::string_view to_string(EdgeOrigin origin) {
    return origin == EdgeOrigin::Native ? "native" : "custom";
}

EdgeOrigin edge_origin_from_string(std::string_view name) {
    if (name == "native") return EdgeOrigin::Native;
    if (name == "custom") return EdgeOrigin::Custom;
    throw DataError("unknown edge origin: '" + std::string(name) + "'");
}

NodeId TypedGraph::add_node(NodeKind kind, std::string_view label) {
    if (label.empty()) throw DataError("node label must be non-empty");
    auto& index = index_[static_cast<std::size_t>(kind)];
    auto it = index.find(std::string(label));
    if (it != index.end()) return it->second;

    auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{id, kind, std::string(label)});
    adjacency_.emplace_back();
    index.emplace(std::string(label), id);
    vertex_ids_.push_back(id);
    return id;
}

bool TypedGraph::add_edge(NodeId u, NodeId v, EdgeOrigin origin) {
    check_id(u);
    check_id(v);
    if (u == v)
        throw DataError("self-loop rejected on node " + std::to_string(u) +
                        " ('" + nodes_[u].label + "')");
    auto [it, inserted] = edge_index_.try_emplace(pair_key(u, v), origin);
    if (!inserted) return false;

    NodePair p(u, v);
    edges_.push_back(Edge{p.first, p.second, origin});
    auto& au = adjacency_[u];
    au.insert(std::lower_bound(au.begin(), au.end(), v), v);
    auto& av = adjacency_[v];
    av.insert(std::lower_bound(av.begin(), av.end(), u), u);
    return true;
}

const Node& TypedGraph::node(NodeId id) const {
    check_id(id);
    return nodes_[id];
}

std::optional<NodeId> TypedGraph::find_node(NodeKind kind, std::string_view label) const {
    const auto& index = index_[static_cast<std::size_t>(kind)];
    auto it = index.find(std::string(label));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::size_t TypedGraph::degree(NodeId id) const {
    check_id(id);
    return adjacency_[id].size();
}

std::span<const NodeId> TypedGraph::neighbors(NodeId id) const {
    check_id(id);
    return adjacency_[id];
}

bool TypedGraph::has_edge(NodeId u, NodeId v) const {
    return edge_index_.count(pair_key(u, v)) != 0;
}

std::optional<EdgeOrigin> TypedGraph::edge_origin(NodeId u, NodeId v) const {
    auto it = edge_index_.find(pair_key(u, v));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<NodeId> TypedGraph::nodes_of_kind(NodeKind kind) const {
    std::vector<NodeId> out;
    for (const Node& n : nodes_)
        if (n.kind == kind) out.push_back(n.id);
    return out;
}

SubgraphView TypedGraph::subgraph_view(std::span<const NodeId> vertices,
                                       std::span<const NodePair> edges) const {
    return SubgraphView(*this, vertices, edges);
}

std::span<const NodeId> TypedGraph::vertex_ids() const { return vertex_ids_; }

void TypedGraph::check_id(NodeId id) const {
    if (id >= nodes_.size())
        throw DataError("unknown node id " + std::to_string(id));
}

SubgraphView::SubgraphView(const TypedGraph& parent, std::span<const NodeId> vertices,
                           std::span<const NodePair> edges)
    : parent_(&parent) {
    vertices_.assign(vertices.begin(), vertices.end());
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    adjacency_.resize(vertices_.size());
    local_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i] >= parent.node_count())
            throw DataError("subgraph vertex " + std::to_string(vertices_[i]) +
                            " not in parent graph");
        local_.emplace(vertices_[i], i);
    }
    for (const NodePair& e : edges) {
        auto iu = local_.find(e.first);
        auto iv = local_.find(e.second);
        if (iu == local_.end() || iv == local_.end())
            throw DataError("subgraph edge (" + std::to_string(e.first) + ", " +
                            std::to_string(e.second) + ") has an endpoint outside the vertex set");
        if (e.first == e.second)
            throw DataError("self-loop rejected on node " + std::to_string(e.first));
        auto [it, inserted] = edge_index_.try_emplace(pair_key(e), true);
        if (!inserted) continue;
        auto& au = adjacency_[iu->second];
        au.insert(std::lower_bound(au.begin(), au.end(), e.second), e.second);
        auto& av = adjacency_[iv->second];
        av.insert(std::lower_bound(av.begin(), av.end(), e.first), e.first);
        ++edge_count_;
    }
}

std::size_t SubgraphView::degree(NodeId id) const {
    auto it = local_.find(id);
    if (it == local_.end())
        throw DataError("node " + std::to_string(id) + " not in subgraph view");
    return adjacency_[it->second].size();
}

std::span<const NodeId> SubgraphView::neighbors(NodeId id) const {
    auto it = local_.find(id);
    if (it == local_.end())
        throw DataError("node " + std::to_string(id) + " not in subgraph view");
    return adjacency_[it->second];
}

bool SubgraphView::has_edge(NodeId u, NodeId v) const {
    return edge_index_.count(pair_key(u, v)) != 0;
}

} // namespace c2v
