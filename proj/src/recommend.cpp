#include "custom2vec/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "custom2vec/parallel.hpp"

namespace c2v {

namespace {

double row_norm(const EmbeddingTable& table, NodeId id) {
    double sq = 0.0;
    for (double v : table.row(id)) sq += v * v;
    return std::sqrt(sq);
}

// Order used everywhere: higher score first, then ascending (u, v).
struct ScoredPair {
    double score;
    NodeId u;
    NodeId v;

    bool operator<(const ScoredPair& o) const {
        if (score != o.score) return score > o.score;
        if (u != o.u) return u < o.u;
        return v < o.v;
    }
};

std::vector<double> inverse_norms(const EmbeddingTable& table, std::span<const NodeId> ids) {
    std::vector<double> inv(table.rows(), 0.0);
    for (NodeId id : ids) {
        double n = row_norm(table, id);
        if (!(n > 0.0))
            throw DataError("zero-norm embedding row for node " + std::to_string(id));
        if (!std::isfinite(n))
            throw InvariantError("non-finite embedding entry at node " + std::to_string(id));
        inv[id] = 1.0 / n;
    }
    return inv;
}

std::vector<RankedLink> to_ranked(std::vector<ScoredPair> top) {
    std::sort(top.begin(), top.end());
    std::vector<RankedLink> out;
    out.reserve(top.size());
    for (std::size_t i = 0; i < top.size(); ++i)
        out.push_back(RankedLink{top[i].u, top[i].v, top[i].score, i + 1});
    return out;
}

// Bounded top-N selection: a max-size-N pool pruned with the shared order.
class TopN {
public:
    explicit TopN(std::size_t n) : n_(n) {}

    void offer(const ScoredPair& p) {
        if (n_ == 0) return;
        if (heap_.size() < n_) {
            heap_.push_back(p);
            std::push_heap(heap_.begin(), heap_.end());
            return;
        }
        // heap front = worst kept element under our ordering
        if (p < heap_.front()) {
            std::pop_heap(heap_.begin(), heap_.end());
            heap_.back() = p;
            std::push_heap(heap_.begin(), heap_.end());
        }
    }

    void merge(TopN&& other) {
        for (const ScoredPair& p : other.heap_) offer(p);
    }

    std::vector<ScoredPair> take() { return std::move(heap_); }

private:
    std::size_t n_;
    std::vector<ScoredPair> heap_; // max-heap on operator< (front = last-ranked)
};

} // namespace

double cosine(const EmbeddingTable& table, NodeId u, NodeId v) {
    if (u >= table.rows() || v >= table.rows())
        throw DataError("node id outside embedding table");
    double dot = 0.0;
    auto zu = table.row(u);
    auto zv = table.row(v);
    for (std::size_t i = 0; i < zu.size(); ++i) dot += zu[i] * zv[i];
    double nu = row_norm(table, u);
    double nv = row_norm(table, v);
    if (!std::isfinite(dot) || !std::isfinite(nu) || !std::isfinite(nv))
        throw InvariantError("non-finite embedding entry in cosine of (" + std::to_string(u) +
                             ", " + std::to_string(v) + ")");
    if (!(nu > 0.0)) throw DataError("zero-norm embedding row for node " + std::to_string(u));
    if (!(nv > 0.0)) throw DataError("zero-norm embedding row for node " + std::to_string(v));
    double c = dot / (nu * nv);
    return std::clamp(c, -1.0, 1.0);
}

std::vector<NodePair> candidate_pool(const TypedGraph& graph) {
    std::vector<NodeId> trials = graph.nodes_of_kind(NodeKind::Trial);
    std::vector<NodePair> pool;
    for (std::size_t i = 0; i < trials.size(); ++i)
        for (std::size_t j = i + 1; j < trials.size(); ++j)
            if (!graph.has_edge(trials[i], trials[j]))
                pool.emplace_back(trials[i], trials[j]);
    return pool;
}

std::vector<NodePair> candidate_pool(const TypedGraph& graph,
                                     std::span<const NodeId> restrict_to) {
    std::vector<NodeId> trials;
    for (NodeId id : restrict_to) {
        if (graph.node(id).kind != NodeKind::Trial)
            throw DataError("candidate pool restriction contains non-trial node " +
                            std::to_string(id));
        trials.push_back(id);
    }
    std::sort(trials.begin(), trials.end());
    trials.erase(std::unique(trials.begin(), trials.end()), trials.end());
    std::vector<NodePair> pool;
    pool.reserve(trials.size() * (trials.size() - 1) / 2);
    for (std::size_t i = 0; i < trials.size(); ++i)
        for (std::size_t j = i + 1; j < trials.size(); ++j)
            pool.emplace_back(trials[i], trials[j]);
    return pool;
}

std::vector<RankedLink> rank_links(const EmbeddingTable& table,
                                   std::span<const NodePair> candidates,
                                   const PairSet& exclude, std::size_t top_n) {
    std::vector<NodeId> touched;
    for (const NodePair& p : candidates) {
        touched.push_back(p.first);
        touched.push_back(p.second);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (NodeId id : touched)
        if (id >= table.rows())
            throw DataError("node id " + std::to_string(id) + " outside embedding table");
    std::vector<double> inv = inverse_norms(table, touched);

    TopN top(top_n);
    const std::size_t d = table.dim();
    for (const NodePair& p : candidates) {
        if (exclude.count(p)) continue;
        auto zu = table.row(p.first);
        auto zv = table.row(p.second);
        double dot = 0.0;
        for (std::size_t i = 0; i < d; ++i) dot += zu[i] * zv[i];
        double score = std::clamp(dot * inv[p.first] * inv[p.second], -1.0, 1.0);
        top.offer(ScoredPair{score, p.first, p.second});
    }
    return to_ranked(top.take());
}

std::vector<RankedLink> rank_all_trial_pairs(const EmbeddingTable& table,
                                             const TypedGraph& graph, const PairSet& exclude,
                                             std::size_t top_n, int threads) {
    std::vector<NodeId> trials = graph.nodes_of_kind(NodeKind::Trial);
    if (table.rows() != graph.node_count())
        throw DataError("embedding table does not cover the graph's nodes");
    std::vector<double> inv = inverse_norms(table, trials);

    std::vector<TopN> partial(std::max(threads, 1), TopN(top_n));
    parallel_chunks(trials.size(), threads, [&](int worker, std::size_t begin, std::size_t end) {
        TopN& top = partial[static_cast<std::size_t>(worker)];
        const std::size_t d = table.dim();
        for (std::size_t i = begin; i < end; ++i) {
            NodeId u = trials[i];
            auto zu = table.row(u);
            for (std::size_t j = i + 1; j < trials.size(); ++j) {
                NodeId v = trials[j];
                if (graph.has_edge(u, v)) continue;
                NodePair p(u, v);
                if (exclude.count(p)) continue;
                auto zv = table.row(v);
                double dot = 0.0;
                for (std::size_t k = 0; k < d; ++k) dot += zu[k] * zv[k];
                double score = std::clamp(dot * inv[u] * inv[v], -1.0, 1.0);
                top.offer(ScoredPair{score, p.first, p.second});
            }
        }
    });

    TopN merged(top_n);
    for (TopN& t : partial) merged.merge(std::move(t));
    return to_ranked(merged.take());
}

PrecisionSeries precision_at_k(std::span<const RankedLink> ranked, const PairSet& test,
                               std::span<const std::size_t> ks) {
    if (ranked.empty()) throw DataError("cannot evaluate precision over an empty ranking");
    PrecisionSeries series;
    for (std::size_t k : ks) {
        if (k == 0 || k > ranked.size())
            throw DataError("precision@k: k=" + std::to_string(k) +
                            " exceeds the ranked list size " + std::to_string(ranked.size()));
        std::size_t hits = 0;
        for (std::size_t i = 0; i < k; ++i)
            if (test.count(NodePair(ranked[i].u, ranked[i].v))) ++hits;
        series.ks.push_back(k);
        series.precisions.push_back(static_cast<double>(hits) / static_cast<double>(k));
    }
    return series;
}

void save_recommendations(std::ostream& out, const TypedGraph& graph,
                          std::span<const RankedLink> ranked, const PairSet& test) {
    char buf[32];
    for (const RankedLink& r : ranked) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.score);
        out << r.rank << '\t' << graph.node(r.u).label << '\t' << graph.node(r.v).label << '\t'
            << buf << '\t' << (test.count(NodePair(r.u, r.v)) ? 1 : 0) << '\n';
    }
}

void save_recommendations_file(const std::string& path, const TypedGraph& graph,
                               std::span<const RankedLink> ranked, const PairSet& test) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_recommendations(out, graph, ranked, test);
}

void save_precision(std::ostream& out, const PrecisionSeries& series) {
    char buf[32];
    for (std::size_t i = 0; i < series.ks.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", series.precisions[i]);
        out << series.ks[i] << '\t' << buf << '\n';
    }
}

void save_precision_file(const std::string& path, const PrecisionSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_precision(out, series);
}

} // namespace c2v
