#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "custom2vec/alias.hpp"
#include "custom2vec/graph.hpp"
#include "custom2vec/rng.hpp"
#include "custom2vec/walks.hpp"

namespace c2v {

/// Dense node-indexed embedding matrix, row-major doubles.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t rows, std::size_t dim)
        : rows_(rows), dim_(dim), data_(rows * dim, 0.0) {}

    /// Seeded uniform init in [-0.5/dim, +0.5/dim) per entry.
    static EmbeddingTable random_init(std::size_t rows, std::size_t dim, std::uint64_t seed);

    std::size_t rows() const { return rows_; }
    std::size_t dim() const { return dim_; }

    std::span<double> row(NodeId id) { return {data_.data() + id * dim_, dim_}; }
    std::span<const double> row(NodeId id) const { return {data_.data() + id * dim_, dim_}; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

/// Where Sub-tagged pairs draw their negatives from. Graph (the default)
/// samples the whole node set, which is what lets heavy subgraph walks pull
/// custom trials together; Subgraph confines draws to the custom vertex set,
/// which equalizes rather than raises within-set similarity (the SGNS
/// equilibrium for a complete subgraph puts pair dots near -log k).
enum class SubNegativeDomain : std::uint8_t { Graph, Subgraph };

struct TrainConfig {
    std::size_t dim = 20;
    std::uint32_t window = 5;
    std::uint32_t negatives = 5;
    double lr0 = 0.025;
    std::uint32_t epochs = 1;
    std::uint64_t seed = 1;
    double sub_loss_weight = 1.0;
    double norm_cap = 100.0;
    double neg_exponent = 1.0; // negatives drawn ~ degree^neg_exponent
    SubNegativeDomain sub_negative_domain = SubNegativeDomain::Graph;
    int threads = 1; // 1 = deterministic; >1 = lock-free parallel updates

    /// Test instrumentation: observes every drawn negative.
    std::function<void(WalkSource, NodeId)> negative_observer;

    void validate() const;
};

/// Degree-proportional unigram sampler over a node domain (optionally
/// degree^exponent smoothed). Nodes with degree 0 carry zero probability.
class NegativeSampler {
public:
    static NegativeSampler over_graph(const TypedGraph& graph, double exponent = 1.0);
    static NegativeSampler over_subgraph(const SubgraphView& sub, double exponent = 1.0);

    NodeId sample(SplitMix64& rng) const;

    /// k draws excluding `a` and `b` (duplicates among draws allowed). Falls
    /// back to a deterministic scan when retries exhaust; draws nothing when
    /// the domain minus {a, b} is empty.
    void sample_excluding(SplitMix64& rng, NodeId a, NodeId b, std::uint32_t k,
                          std::vector<NodeId>& out) const;

    std::span<const NodeId> domain() const { return support_; }
    std::span<const double> probabilities() const { return probs_; }

private:
    NegativeSampler(std::vector<NodeId> support, std::vector<double> weights);

    std::vector<NodeId> support_;
    std::vector<double> probs_;
    AliasTable table_;
};

struct SkipGramPair {
    NodeId center;
    NodeId context;
    WalkSource source;

    friend bool operator==(const SkipGramPair&, const SkipGramPair&) = default;
};

/// Windowed skip-gram pairs: for each position i, every j != i with
/// |i - j| <= window, in (i ascending, j ascending) order.
std::vector<SkipGramPair> extract_pairs(const WalkCorpus& corpus, std::uint32_t window);

template <typename Fn>
inline void for_each_pair(std::span<const NodeId> walk, WalkSource source,
                          std::uint32_t window, Fn&& fn) {
    const std::size_t len = walk.size();
    for (std::size_t i = 0; i < len; ++i) {
        std::size_t lo = i > window ? i - window : 0;
        std::size_t hi = std::min(len - 1, i + static_cast<std::size_t>(window));
        for (std::size_t j = lo; j <= hi; ++j) {
            if (j == i) continue;
            fn(SkipGramPair{walk[i], walk[j], source});
        }
    }
}

/// Per-pair negative-sampling objective:
///   -log sigmoid(Zc . Zx) - sum_n log sigmoid(-Zc . Zn)
double sgns_pair_loss(const EmbeddingTable& table, NodeId center, NodeId context,
                      std::span<const NodeId> negatives);

/// Analytic gradients of sgns_pair_loss for every touched row (accumulated
/// over duplicate negatives). Untouched rows are absent.
std::map<NodeId, std::vector<double>> sgns_pair_gradients(const EmbeddingTable& table,
                                                          NodeId center, NodeId context,
                                                          std::span<const NodeId> negatives);

/// One SGD step for a pair at learning rate lr (already scaled): evaluates
/// all gradients at the current point, then applies them.
void sgns_apply_update(EmbeddingTable& table, NodeId center, NodeId context,
                       std::span<const NodeId> negatives, double lr, double norm_cap,
                       std::span<double> scratch);

/// Trains embeddings over the joint corpus. Full-tagged pairs draw negatives
/// over the whole graph, Sub-tagged pairs over the train subgraph (which
/// must be given when Sub walks are present). The learning rate decays
/// linearly from lr0 to lr0/100 across all updates.
EmbeddingTable train(const WalkCorpus& corpus, const TypedGraph& graph,
                     const SubgraphView* train_sub, const TrainConfig& config);

/// A frozen pair + negatives for loss tracking.
struct LossSample {
    SkipGramPair pair;
    std::vector<NodeId> negatives;
};

std::vector<LossSample> make_loss_samples(const WalkCorpus& corpus, std::uint32_t window,
                                          const NegativeSampler& full_sampler,
                                          const NegativeSampler* sub_sampler,
                                          std::uint32_t negatives, std::size_t count,
                                          std::uint64_t seed);

/// Mean sgns_pair_loss over a fixed sample.
double estimate_loss(const EmbeddingTable& table, std::span<const LossSample> samples);

// Embedding text format: first line "<node_count> <dim>", then one line per
// node: "<kind>:<label> v1 ... vd" (values are shortest-round-trip decimals).
void save_embeddings(std::ostream& out, const TypedGraph& graph, const EmbeddingTable& table);
void save_embeddings_file(const std::string& path, const TypedGraph& graph,
                          const EmbeddingTable& table);

struct NamedEmbeddings {
    std::vector<std::pair<NodeKind, std::string>> names;
    EmbeddingTable table;
};

NamedEmbeddings load_embeddings(std::istream& in);
NamedEmbeddings load_embeddings_file(const std::string& path);

/// Reorders named rows to graph node ids; rejects any node-set mismatch.
EmbeddingTable align_embeddings(const NamedEmbeddings& named, const TypedGraph& graph);

} // namespace c2v
