#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "custom2vec/graph.hpp"
#include "custom2vec/trainer.hpp"

namespace c2v {

struct RankedLink {
    NodeId u; // u < v
    NodeId v;
    double score; // cosine similarity
    std::size_t rank; // 1-based

    friend bool operator==(const RankedLink&, const RankedLink&) = default;
};

struct PrecisionSeries {
    std::vector<std::size_t> ks;
    std::vector<double> precisions;
};

using PairSet = std::unordered_set<NodePair, NodePairHash>;

/// Cosine similarity of two embedding rows; rejects zero-norm rows.
double cosine(const EmbeddingTable& table, NodeId u, NodeId v);

/// All unordered Trial-Trial pairs that are not linked in `graph`.
std::vector<NodePair> candidate_pool(const TypedGraph& graph);
/// Unordered pairs within the given trial set (no link filtering).
std::vector<NodePair> candidate_pool(const TypedGraph& graph,
                                     std::span<const NodeId> restrict_to);

/// Top-N candidate pairs by descending cosine, `exclude` removed, ties
/// broken by ascending (u, v). Identical to full sort + prefix.
std::vector<RankedLink> rank_links(const EmbeddingTable& table,
                                   std::span<const NodePair> candidates,
                                   const PairSet& exclude, std::size_t top_n);

/// Streaming variant over all unlinked Trial-Trial pairs of the graph;
/// parallelizable, same contract as rank_links over candidate_pool(graph).
std::vector<RankedLink> rank_all_trial_pairs(const EmbeddingTable& table,
                                             const TypedGraph& graph, const PairSet& exclude,
                                             std::size_t top_n, int threads = 1);

/// precision@k = |top-k ∩ test| / k for each requested k.
PrecisionSeries precision_at_k(std::span<const RankedLink> ranked, const PairSet& test,
                               std::span<const std::size_t> ks);

/// recommendations TSV: rank, trial_u, trial_v, score, in_test.
void save_recommendations(std::ostream& out, const TypedGraph& graph,
                          std::span<const RankedLink> ranked, const PairSet& test);
void save_recommendations_file(const std::string& path, const TypedGraph& graph,
                               std::span<const RankedLink> ranked, const PairSet& test);

/// precision TSV: k, precision.
void save_precision(std::ostream& out, const PrecisionSeries& series);
void save_precision_file(const std::string& path, const PrecisionSeries& series);

} // namespace c2v
