#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "custom2vec/graph.hpp"
#include "custom2vec/recommend.hpp"
#include "custom2vec/trainer.hpp"

namespace c2v {

enum class PopulationKind : std::uint8_t {
    CustomTrain,
    CustomTest,
    NativeHiddenTrialTrial,
    NativeDirectTrialEndpoint,
};

std::string_view to_string(PopulationKind kind);

struct PairPopulation {
    PopulationKind kind;
    std::string name; // population label used in reports
    std::vector<NodePair> pairs;
};

struct SimilarityStats {
    double mean = 0.0;
    double stddev = 0.0; // population standard deviation
    std::size_t count = 0;
    std::vector<std::size_t> histogram; // uniform bins over [-1, 1]
};

/// Sampled Trial-Trial pairs with at least `min_shared` common neighbors and
/// no direct edge; pairs internal to `exclude_vertices` (the custom set) are
/// skipped. Deterministic per seed; may return fewer than `sample_size`.
PairPopulation native_hidden_pairs(const TypedGraph& graph, std::size_t min_shared,
                                   std::size_t sample_size, std::uint64_t seed,
                                   std::span<const NodeId> exclude_vertices = {});

/// All Native edges between a Trial node and a node of `kind`.
PairPopulation native_direct_pairs(const TypedGraph& graph, NodeKind kind);

PairPopulation custom_pairs(PopulationKind kind, std::span<const NodePair> pairs);

/// Mean/std/histogram of pairwise cosine over a population.
SimilarityStats population_stats(const EmbeddingTable& table, const PairPopulation& pop,
                                 std::size_t bins = 50);

struct ModelStats {
    std::string model;
    std::map<std::string, SimilarityStats> by_population;
};

struct ComparisonRow {
    std::string model;
    std::string population;
    double mean;
    double stddev;
    double delta_mean;  // vs baseline model
    double delta_std;
    bool flagged; // |delta_mean| over the threshold on a native population
};

struct ComparisonReport {
    std::string baseline;
    double threshold;
    std::vector<ComparisonRow> rows;
};

/// Per-model deltas vs the named baseline; flags native populations whose
/// |delta mean| exceeds `threshold`.
ComparisonReport compare_models(std::span<const ModelStats> models, const std::string& baseline,
                                double threshold = 0.05);

// stats.tsv: model, population, mean, std, n
void save_stats(std::ostream& out, std::span<const ModelStats> models);
void save_stats_file(const std::string& path, std::span<const ModelStats> models);

// hist_<model>_<population>.tsv: bin_lo, bin_hi, count
void save_histogram(std::ostream& out, const SimilarityStats& stats);
void save_histogram_file(const std::string& path, const SimilarityStats& stats);

// compare.tsv: model, population, mean, delta_mean, std, delta_std, flagged
void save_comparison(std::ostream& out, const ComparisonReport& report);
void save_comparison_file(const std::string& path, const ComparisonReport& report);

} // namespace c2v
