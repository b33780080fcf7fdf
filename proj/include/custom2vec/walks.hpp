#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "custom2vec/graph.hpp"
#include "custom2vec/rng.hpp"

namespace c2v {

struct WalkParams {
    double p = 1.0;          // return parameter
    double q = 1.0;          // in-out parameter
    std::uint32_t walk_length = 16; // nodes per walk
    std::uint32_t num_walks = 100;  // walks per start node (0 = generate none)
    std::uint64_t seed = 1;

    void validate() const;
};

enum class WalkSource : std::uint8_t { Full = 0, Sub = 1 };

/// Walk sequences in canonical order (tag, start node, walk index), stored
/// CSR-style. A walk is shorter than walk_length only when it starts on a
/// degree-0 node.
class WalkCorpus {
public:
    std::size_t size() const { return tags_.size(); }
    bool empty() const { return tags_.empty(); }
    std::uint64_t token_count() const { return data_.size(); }

    std::span<const NodeId> walk(std::size_t i) const {
        return {data_.data() + offsets_[i], data_.data() + offsets_[i + 1]};
    }
    WalkSource tag(std::size_t i) const { return tags_[i]; }

    void push_walk(std::span<const NodeId> nodes, WalkSource tag);
    void append(WalkCorpus&& other);

    /// Debug dump: one walk per line, `F`/`S` tag then space-separated ids.
    void dump(std::ostream& out) const;
    static WalkCorpus parse(std::istream& in);

    friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;

    // Bulk construction used by the generators.
    void reset(std::vector<NodeId> data, std::vector<std::uint64_t> offsets,
               std::vector<WalkSource> tags);

private:
    std::vector<NodeId> data_;
    std::vector<std::uint64_t> offsets_ = {0};
    std::vector<WalkSource> tags_;
};

/// Second-order (p, q) transition structure. For p = q = 1 the bias is
/// uniform over neighbors and no per-edge tables are materialized; otherwise
/// one alias table per directed edge gives O(1) biased steps.
class TransitionTables {
public:
    static constexpr NodeId kNoPredecessor = std::numeric_limits<NodeId>::max();

    static TransitionTables build(const TypedGraph& graph, double p, double q);
    static TransitionTables build(const SubgraphView& graph, double p, double q);

    /// Samples the successor of `cur` given predecessor `prev`
    /// (kNoPredecessor = uniform first step). Empty when `cur` has no
    /// neighbors.
    std::optional<NodeId> sample_step(NodeId prev, NodeId cur, SplitMix64& rng) const;

    bool biased() const { return biased_; }
    double p() const { return p_; }
    double q() const { return q_; }

    std::span<const NodeId> start_nodes() const { return verts_; }
    std::size_t neighbor_count(NodeId v) const;

private:
    std::uint32_t local(NodeId v) const;

    double p_ = 1.0;
    double q_ = 1.0;
    bool biased_ = false;
    bool dense_ = false; // verts_ == 0..n-1, local lookup is the identity
    std::vector<NodeId> verts_;
    std::unordered_map<NodeId, std::uint32_t> local_;
    std::vector<std::uint64_t> adj_off_;
    std::vector<NodeId> adj_;
    // Pooled per-directed-edge alias tables (biased mode only).
    std::vector<std::uint64_t> table_off_;
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;

    template <typename G>
    static TransitionTables make(const G& graph, double p, double q);
};

/// r walks of walk_length nodes from every vertex; deterministic for a fixed
/// seed at any worker count.
WalkCorpus generate_walks(const TypedGraph& graph, const WalkParams& params,
                          WalkSource tag, int threads = 1);
WalkCorpus generate_walks(const SubgraphView& graph, const WalkParams& params,
                          WalkSource tag, int threads = 1);
WalkCorpus generate_walks(const TransitionTables& tables, const WalkParams& params,
                          WalkSource tag, int threads = 1);

/// Full-tagged walks over the enriched graph plus Sub-tagged walks confined
/// to the train subgraph.
WalkCorpus generate_joint_corpus(const TypedGraph& enriched, const SubgraphView& train_sub,
                                 const WalkParams& full_params, const WalkParams& sub_params,
                                 int threads = 1);

void dump_corpus_file(const std::string& path, const WalkCorpus& corpus);
WalkCorpus parse_corpus_file(const std::string& path);

} // namespace c2v
