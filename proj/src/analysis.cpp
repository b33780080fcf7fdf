#include "custom2vec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_set>

#include "custom2vec/rng.hpp"

namespace c2v {

std::string_view to_string(PopulationKind kind) {
    switch (kind) {
        case PopulationKind::CustomTrain: return "custom_train";
        case PopulationKind::CustomTest: return "custom_test";
        case PopulationKind::NativeHiddenTrialTrial: return "native_hidden_trial_trial";
        case PopulationKind::NativeDirectTrialEndpoint: return "native_direct_trial_endpoint";
    }
    throw InvariantError("unknown population kind");
}

namespace {

std::size_t common_neighbor_count(const TypedGraph& graph, NodeId u, NodeId v) {
    auto a = graph.neighbors(u);
    auto b = graph.neighbors(v);
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (b[j] < a[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

} // namespace

PairPopulation native_hidden_pairs(const TypedGraph& graph, std::size_t min_shared,
                                   std::size_t sample_size, std::uint64_t seed,
                                   std::span<const NodeId> exclude_vertices) {
    if (min_shared < 1) throw DataError("min_shared must be at least 1");
    PairPopulation pop;
    pop.kind = PopulationKind::NativeHiddenTrialTrial;
    pop.name = std::string(to_string(pop.kind));

    std::vector<NodeId> trials = graph.nodes_of_kind(NodeKind::Trial);
    if (trials.size() < 2) return pop;
    std::unordered_set<NodeId> excluded(exclude_vertices.begin(), exclude_vertices.end());

    auto qualifies = [&](NodeId u, NodeId v) {
        if (u == v) return false;
        if (excluded.count(u) && excluded.count(v)) return false;
        if (graph.has_edge(u, v)) return false;
        return common_neighbor_count(graph, u, v) >= min_shared;
    };

    SplitMix64 rng(derive_seed(seed, 0x68696464656eULL)); // "hidden"
    const std::size_t total_pairs = trials.size() * (trials.size() - 1) / 2;
    std::unordered_set<NodePair, NodePairHash> seen;

    if (total_pairs <= std::max<std::size_t>(4 * sample_size, 100000)) {
        // Small pool: enumerate every qualifying pair, then subsample.
        std::vector<NodePair> all;
        for (std::size_t i = 0; i < trials.size(); ++i)
            for (std::size_t j = i + 1; j < trials.size(); ++j)
                if (qualifies(trials[i], trials[j])) all.emplace_back(trials[i], trials[j]);
        if (all.size() > sample_size) {
            shuffle(rng, all);
            all.resize(sample_size);
            std::sort(all.begin(), all.end());
        }
        pop.pairs = std::move(all);
        return pop;
    }

    // Large pool: random probes with a bounded budget.
    const std::size_t budget = 50 * sample_size;
    for (std::size_t probe = 0; probe < budget && pop.pairs.size() < sample_size; ++probe) {
        NodeId u = trials[uniform_index(rng, trials.size())];
        NodeId v = trials[uniform_index(rng, trials.size())];
        if (!qualifies(u, v)) continue;
        NodePair p(u, v);
        if (!seen.insert(p).second) continue;
        pop.pairs.push_back(p);
    }
    std::sort(pop.pairs.begin(), pop.pairs.end());
    return pop;
}

PairPopulation native_direct_pairs(const TypedGraph& graph, NodeKind kind) {
    if (kind == NodeKind::Trial)
        throw DataError("native direct pairs require a non-trial attribute kind");
    PairPopulation pop;
    pop.kind = PopulationKind::NativeDirectTrialEndpoint;
    pop.name = "native_direct_trial_" + std::string(to_string(kind));
    for (const Edge& e : graph.edges()) {
        if (e.origin != EdgeOrigin::Native) continue;
        NodeKind ku = graph.node(e.u).kind;
        NodeKind kv = graph.node(e.v).kind;
        if ((ku == NodeKind::Trial && kv == kind) || (kv == NodeKind::Trial && ku == kind))
            pop.pairs.emplace_back(e.u, e.v);
    }
    std::sort(pop.pairs.begin(), pop.pairs.end());
    return pop;
}

PairPopulation custom_pairs(PopulationKind kind, std::span<const NodePair> pairs) {
    if (kind != PopulationKind::CustomTrain && kind != PopulationKind::CustomTest)
        throw DataError("custom_pairs expects a custom population kind");
    PairPopulation pop;
    pop.kind = kind;
    pop.name = std::string(to_string(kind));
    pop.pairs.assign(pairs.begin(), pairs.end());
    std::sort(pop.pairs.begin(), pop.pairs.end());
    return pop;
}

SimilarityStats population_stats(const EmbeddingTable& table, const PairPopulation& pop,
                                 std::size_t bins) {
    if (bins < 1) throw DataError("histogram needs at least one bin");
    SimilarityStats stats;
    stats.histogram.assign(bins, 0);
    stats.count = pop.pairs.size();
    if (pop.pairs.empty()) return stats;

    double sum = 0.0, sum_sq = 0.0;
    for (const NodePair& p : pop.pairs) {
        double c = cosine(table, p.first, p.second);
        sum += c;
        sum_sq += c * c;
        auto bin = static_cast<std::size_t>((c + 1.0) / 2.0 * static_cast<double>(bins));
        if (bin >= bins) bin = bins - 1; // c == 1 lands in the last bin
        ++stats.histogram[bin];
    }
    const auto n = static_cast<double>(pop.pairs.size());
    stats.mean = sum / n;
    double var = sum_sq / n - stats.mean * stats.mean;
    stats.stddev = std::sqrt(std::max(var, 0.0));
    return stats;
}

ComparisonReport compare_models(std::span<const ModelStats> models, const std::string& baseline,
                                double threshold) {
    if (models.size() < 2)
        throw DataError("model comparison needs at least two models");
    const ModelStats* base = nullptr;
    for (const ModelStats& m : models)
        if (m.model == baseline) base = &m;
    if (!base) throw DataError("baseline model '" + baseline + "' not in the stats set");

    for (const ModelStats& m : models) {
        if (m.by_population.size() != base->by_population.size())
            throw DataError("model '" + m.model + "' evaluates a different population set");
        for (const auto& [pop, stats] : m.by_population) {
            auto it = base->by_population.find(pop);
            if (it == base->by_population.end())
                throw DataError("population '" + pop + "' of model '" + m.model +
                                "' is missing from the baseline");
            if (it->second.count != stats.count)
                throw DataError("population '" + pop + "' has mismatched pair counts across models");
        }
    }

    ComparisonReport report;
    report.baseline = baseline;
    report.threshold = threshold;
    for (const ModelStats& m : models) {
        for (const auto& [pop, stats] : m.by_population) {
            const SimilarityStats& ref = base->by_population.at(pop);
            ComparisonRow row;
            row.model = m.model;
            row.population = pop;
            row.mean = stats.mean;
            row.stddev = stats.stddev;
            row.delta_mean = stats.mean - ref.mean;
            row.delta_std = stats.stddev - ref.stddev;
            bool native = pop.rfind("native_", 0) == 0;
            row.flagged = native && std::abs(row.delta_mean) > threshold;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

void save_stats(std::ostream& out, std::span<const ModelStats> models) {
    out << "model\tpopulation\tmean\tstd\tn\n";
    for (const ModelStats& m : models)
        for (const auto& [pop, stats] : m.by_population)
            out << m.model << '\t' << pop << '\t' << fmt6(stats.mean) << '\t'
                << fmt6(stats.stddev) << '\t' << stats.count << '\n';
}

void save_stats_file(const std::string& path, std::span<const ModelStats> models) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_stats(out, models);
}

void save_histogram(std::ostream& out, const SimilarityStats& stats) {
    const auto bins = stats.histogram.size();
    for (std::size_t i = 0; i < bins; ++i) {
        double lo = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(bins);
        double hi = -1.0 + 2.0 * static_cast<double>(i + 1) / static_cast<double>(bins);
        out << fmt6(lo) << '\t' << fmt6(hi) << '\t' << stats.histogram[i] << '\n';
    }
}

void save_histogram_file(const std::string& path, const SimilarityStats& stats) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_histogram(out, stats);
}

void save_comparison(std::ostream& out, const ComparisonReport& report) {
    out << "# baseline=" << report.baseline << " threshold=" << fmt6(report.threshold) << '\n';
    out << "model\tpopulation\tmean\tdelta_mean\tstd\tdelta_std\tflagged\n";
    for (const ComparisonRow& r : report.rows)
        out << r.model << '\t' << r.population << '\t' << fmt6(r.mean) << '\t'
            << fmt6(r.delta_mean) << '\t' << fmt6(r.stddev) << '\t' << fmt6(r.delta_std) << '\t'
            << (r.flagged ? 1 : 0) << '\n';
}

void save_comparison_file(const std::string& path, const ComparisonReport& report) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_comparison(out, report);
}

} // namespace c2v
