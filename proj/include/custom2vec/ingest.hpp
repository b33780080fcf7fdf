#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "custom2vec/graph.hpp"

namespace c2v {

/// One trial-like record as parsed from the input stream. Attribute lists
/// may be empty; trial_id is raw (pre-normalization) and unique per set.
struct TrialRecord {
    std::string trial_id;
    std::vector<std::string> indications;
    std::vector<std::string> interventions;
    std::string phase;
    std::vector<std::string> sponsors;
    std::vector<std::string> endpoints;
};

/// Exact-match synonym dictionary applied after syntactic normalization.
/// Keys are normalized at load; values are kept canonical and must not chain
/// onto other keys.
class SynonymDict {
public:
    SynonymDict() = default;

    static SynonymDict load(std::istream& in);
    static SynonymDict load_file(const std::string& path);

    void insert(std::string_view raw, std::string_view canonical);
    std::optional<std::string> lookup(const std::string& normalized) const;
    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::string, std::string> map_;
};

/// Case-folds, collapses whitespace, strips surrounding punctuation, then
/// applies the optional synonym dictionary. Throws DataError when the result
/// is empty.
std::string normalize_label(std::string_view raw, NodeKind kind,
                            const SynonymDict* dict = nullptr);

/// Parses line-delimited JSON records (keys: trial_id, indications,
/// interventions, phase, sponsors, endpoints; string or string-array values).
/// Malformed lines and duplicate trial ids are reported with positions.
std::vector<TrialRecord> parse_records(std::istream& in);
std::vector<TrialRecord> parse_records_file(const std::string& path);

void save_records(std::ostream& out, std::span<const TrialRecord> records);
void save_records_file(const std::string& path, std::span<const TrialRecord> records);

/// Builds the typed graph: one trial node per record, one node per distinct
/// (kind, canonical label), and Native trial-attribute edges.
TypedGraph build_graph(std::span<const TrialRecord> records,
                       const SynonymDict* dict = nullptr);

/// A user-preference trial list (one registry id per line in file form).
struct CustomSet {
    std::vector<std::string> trial_ids;

    static CustomSet load(std::istream& in);
    static CustomSet load_file(const std::string& path);
};

void save_custom_set(std::ostream& out, const CustomSet& custom);
void save_custom_set_file(const std::string& path, const CustomSet& custom);

/// Resolves a custom set to Trial node ids. Requires at least two ids, no
/// duplicates, and every id present as a Trial node.
std::vector<NodeId> resolve_custom_set(const TypedGraph& graph, const CustomSet& custom,
                                       const SynonymDict* dict = nullptr);

/// All n(n-1)/2 unordered trial-trial pairs over the resolved custom set.
std::vector<NodePair> build_custom_subgraph(const TypedGraph& graph, const CustomSet& custom,
                                            const SynonymDict* dict = nullptr);
std::vector<NodePair> complete_pairs(std::span<const NodeId> vertices);

/// A train/test partition of a custom edge list.
struct SubgraphSplit {
    std::vector<NodeId> vertex_set; // sorted endpoints of the full edge list
    std::vector<NodePair> train_edges;
    std::vector<NodePair> test_edges;
    double split_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Uniform seeded partition; |train| = floor(ratio * |edges|).
SubgraphSplit split_subgraph(std::span<const NodePair> edges, double ratio,
                             std::uint64_t seed);

/// Returns a copy of `graph` with the train edges added as Custom links.
TypedGraph enrich_graph(const TypedGraph& graph, std::span<const NodePair> train_edges);

/// split.tsv manifest: header comment records seed and ratio; rows are
/// (u_label, v_label, partition).
void save_split(std::ostream& out, const TypedGraph& graph, const SubgraphSplit& split);
void save_split_file(const std::string& path, const TypedGraph& graph,
                     const SubgraphSplit& split);
SubgraphSplit load_split(std::istream& in, const TypedGraph& graph);
SubgraphSplit load_split_file(const std::string& path, const TypedGraph& graph);

} // namespace c2v
