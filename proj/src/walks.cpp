#include "custom2vec/walks.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "custom2vec/alias.hpp"
#include "custom2vec/parallel.hpp"

namespace c2v {

void WalkParams::validate() const {
    if (!(p > 0.0)) throw DataError("walk parameter p must be positive");
    if (!(q > 0.0)) throw DataError("walk parameter q must be positive");
    if (walk_length < 2) throw DataError("walk_length must be at least 2");
}

void WalkCorpus::push_walk(std::span<const NodeId> nodes, WalkSource tag) {
    data_.insert(data_.end(), nodes.begin(), nodes.end());
    offsets_.push_back(data_.size());
    tags_.push_back(tag);
}

void WalkCorpus::append(WalkCorpus&& other) {
    const std::uint64_t base = data_.size();
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    for (std::size_t i = 1; i < other.offsets_.size(); ++i)
        offsets_.push_back(base + other.offsets_[i]);
    tags_.insert(tags_.end(), other.tags_.begin(), other.tags_.end());
}

void WalkCorpus::reset(std::vector<NodeId> data, std::vector<std::uint64_t> offsets,
                       std::vector<WalkSource> tags) {
    if (offsets.empty() || offsets.front() != 0 || offsets.size() != tags.size() + 1 ||
        offsets.back() != data.size())
        throw InvariantError("inconsistent walk corpus buffers");
    data_ = std::move(data);
    offsets_ = std::move(offsets);
    tags_ = std::move(tags);
}

void WalkCorpus::dump(std::ostream& out) const {
    for (std::size_t i = 0; i < size(); ++i) {
        out << (tags_[i] == WalkSource::Full ? 'F' : 'S');
        for (NodeId id : walk(i)) out << ' ' << id;
        out << '\n';
    }
}

WalkCorpus WalkCorpus::parse(std::istream& in) {
    WalkCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    std::vector<NodeId> nodes;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag_str;
        ls >> tag_str;
        WalkSource tag;
        if (tag_str == "F")
            tag = WalkSource::Full;
        else if (tag_str == "S")
            tag = WalkSource::Sub;
        else
            throw DataError("corpus line " + std::to_string(line_no) + ": bad tag '" +
                            tag_str + "'");
        nodes.clear();
        NodeId id;
        while (ls >> id) nodes.push_back(id);
        if (nodes.empty())
            throw DataError("corpus line " + std::to_string(line_no) + ": empty walk");
        corpus.push_walk(nodes, tag);
    }
    return corpus;
}

template <typename G>
TransitionTables TransitionTables::make(const G& graph, double p, double q) {
    if (!(p > 0.0) || !(q > 0.0))
        throw DataError("walk parameters p and q must be positive");

    TransitionTables t;
    t.p_ = p;
    t.q_ = q;
    t.biased_ = !(p == 1.0 && q == 1.0);

    auto verts = graph.vertex_ids();
    t.verts_.assign(verts.begin(), verts.end());
    t.dense_ = true;
    for (std::size_t i = 0; i < t.verts_.size(); ++i)
        if (t.verts_[i] != static_cast<NodeId>(i)) {
            t.dense_ = false;
            break;
        }
    if (!t.dense_) {
        t.local_.reserve(t.verts_.size());
        for (std::size_t i = 0; i < t.verts_.size(); ++i)
            t.local_.emplace(t.verts_[i], static_cast<std::uint32_t>(i));
    }

    t.adj_off_.resize(t.verts_.size() + 1, 0);
    for (std::size_t i = 0; i < t.verts_.size(); ++i)
        t.adj_off_[i + 1] = t.adj_off_[i] + graph.degree(t.verts_[i]);
    t.adj_.resize(t.adj_off_.back());
    for (std::size_t i = 0; i < t.verts_.size(); ++i) {
        auto nb = graph.neighbors(t.verts_[i]);
        std::copy(nb.begin(), nb.end(), t.adj_.begin() + static_cast<std::ptrdiff_t>(t.adj_off_[i]));
    }

    if (!t.biased_) return t;

    // One table per directed edge (u -> v), sized deg(v).
    const std::size_t directed = t.adj_.size();
    t.table_off_.resize(directed + 1, 0);
    for (std::size_t i = 0; i < t.verts_.size(); ++i) {
        for (std::uint64_t e = t.adj_off_[i]; e < t.adj_off_[i + 1]; ++e) {
            NodeId v = t.adj_[e];
            std::size_t lv = t.dense_ ? v : t.local_.at(v);
            t.table_off_[e + 1] = t.adj_off_[lv + 1] - t.adj_off_[lv];
        }
    }
    for (std::size_t e = 0; e < directed; ++e) t.table_off_[e + 1] += t.table_off_[e];
    t.prob_.resize(t.table_off_.back());
    t.alias_.resize(t.table_off_.back());

    std::vector<double> weights;
    for (std::size_t i = 0; i < t.verts_.size(); ++i) {
        NodeId u = t.verts_[i];
        for (std::uint64_t e = t.adj_off_[i]; e < t.adj_off_[i + 1]; ++e) {
            NodeId v = t.adj_[e];
            std::size_t lv = t.dense_ ? v : t.local_.at(v);
            weights.clear();
            for (std::uint64_t f = t.adj_off_[lv]; f < t.adj_off_[lv + 1]; ++f) {
                NodeId x = t.adj_[f];
                double w;
                if (x == u)
                    w = 1.0 / p;
                else if (graph.has_edge(x, u))
                    w = 1.0;
                else
                    w = 1.0 / q;
                weights.push_back(w);
            }
            alias_build(weights,
                        std::span<double>(t.prob_.data() + t.table_off_[e],
                                          weights.size()),
                        std::span<std::uint32_t>(t.alias_.data() + t.table_off_[e],
                                                 weights.size()));
        }
    }
    return t;
}

TransitionTables TransitionTables::build(const TypedGraph& graph, double p, double q) {
    if (graph.node_count() == 0) throw DataError("cannot build transition tables for an empty graph");
    return make(graph, p, q);
}

TransitionTables TransitionTables::build(const SubgraphView& graph, double p, double q) {
    if (graph.node_count() == 0) throw DataError("cannot build transition tables for an empty graph");
    return make(graph, p, q);
}

std::uint32_t TransitionTables::local(NodeId v) const {
    if (dense_) return v;
    auto it = local_.find(v);
    if (it == local_.end())
        throw InvariantError("walk reached node " + std::to_string(v) +
                             " outside the transition tables");
    return it->second;
}

std::size_t TransitionTables::neighbor_count(NodeId v) const {
    std::uint32_t lv = local(v);
    return adj_off_[lv + 1] - adj_off_[lv];
}

std::optional<NodeId> TransitionTables::sample_step(NodeId prev, NodeId cur,
                                                    SplitMix64& rng) const {
    std::uint32_t lc = local(cur);
    const std::uint64_t begin = adj_off_[lc];
    const std::uint64_t deg = adj_off_[lc + 1] - begin;
    if (deg == 0) return std::nullopt;

    if (!biased_ || prev == kNoPredecessor)
        return adj_[begin + uniform_index(rng, deg)];

    // Locate the directed edge (prev -> cur) to pick its alias table.
    std::uint32_t lp = local(prev);
    auto first = adj_.begin() + static_cast<std::ptrdiff_t>(adj_off_[lp]);
    auto last = adj_.begin() + static_cast<std::ptrdiff_t>(adj_off_[lp + 1]);
    auto pos = std::lower_bound(first, last, cur);
    if (pos == last || *pos != cur)
        throw InvariantError("walk state (" + std::to_string(prev) + " -> " +
                             std::to_string(cur) + ") is not an edge");
    std::uint64_t edge = adj_off_[lp] + static_cast<std::uint64_t>(pos - first);

    const std::uint64_t t0 = table_off_[edge];
    const std::uint64_t n = table_off_[edge + 1] - t0;
    auto i = static_cast<std::uint64_t>(uniform_index(rng, n));
    double coin = uniform_real(rng);
    std::uint64_t idx = coin < prob_[t0 + i] ? i : alias_[t0 + i];
    return adj_[begin + idx];
}

namespace {

WalkCorpus run_walks(const TransitionTables& tables, const WalkParams& params,
                     WalkSource tag, int threads) {
    params.validate();
    auto starts = tables.start_nodes();
    const std::size_t n = starts.size();
    const std::uint64_t r = params.num_walks;
    const std::uint32_t l = params.walk_length;

    std::vector<std::uint64_t> offsets(n * r + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        // A walk only falls short of l when it starts on a degree-0 node.
        std::uint64_t len = tables.neighbor_count(starts[i]) == 0 ? 1 : l;
        for (std::uint64_t w = 0; w < r; ++w) offsets[i * r + w + 1] = len;
    }
    for (std::size_t k = 0; k < n * r; ++k) offsets[k + 1] += offsets[k];

    std::vector<NodeId> data(offsets.back());
    parallel_chunks(n, threads, [&](int, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            NodeId start = starts[i];
            for (std::uint64_t w = 0; w < r; ++w) {
                SplitMix64 rng(derive_seed(params.seed,
                                           static_cast<std::uint64_t>(tag) + 1, start, w));
                NodeId* out = data.data() + offsets[i * r + w];
                const std::uint64_t len = offsets[i * r + w + 1] - offsets[i * r + w];
                out[0] = start;
                NodeId prev = TransitionTables::kNoPredecessor;
                NodeId cur = start;
                for (std::uint64_t step = 1; step < len; ++step) {
                    auto next = tables.sample_step(prev, cur, rng);
                    if (!next) throw InvariantError("walk stalled mid-path");
                    out[step] = *next;
                    prev = cur;
                    cur = *next;
                }
            }
        }
    });

    WalkCorpus corpus;
    corpus.reset(std::move(data), std::move(offsets),
                 std::vector<WalkSource>(n * r, tag));
    return corpus;
}

} // namespace

WalkCorpus generate_walks(const TransitionTables& tables, const WalkParams& params,
                          WalkSource tag, int threads) {
    return run_walks(tables, params, tag, threads);
}

WalkCorpus generate_walks(const TypedGraph& graph, const WalkParams& params, WalkSource tag,
                          int threads) {
    return run_walks(TransitionTables::build(graph, params.p, params.q), params, tag, threads);
}

WalkCorpus generate_walks(const SubgraphView& graph, const WalkParams& params, WalkSource tag,
                          int threads) {
    return run_walks(TransitionTables::build(graph, params.p, params.q), params, tag, threads);
}

WalkCorpus generate_joint_corpus(const TypedGraph& enriched, const SubgraphView& train_sub,
                                 const WalkParams& full_params, const WalkParams& sub_params,
                                 int threads) {
    for (NodeId v : train_sub.vertex_ids())
        if (v >= enriched.node_count())
            throw DataError("subgraph vertex " + std::to_string(v) +
                            " is not a node of the enriched graph");

    WalkCorpus corpus = generate_walks(enriched, full_params, WalkSource::Full, threads);
    if (sub_params.num_walks > 0)
        corpus.append(generate_walks(train_sub, sub_params, WalkSource::Sub, threads));
    return corpus;
}

void dump_corpus_file(const std::string& path, const WalkCorpus& corpus) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    corpus.dump(out);
}

WalkCorpus parse_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return WalkCorpus::parse(in);
}

} // namespace c2v
