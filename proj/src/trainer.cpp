#include "custom2vec/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "custom2vec/parallel.hpp"

namespace c2v {

namespace {

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    double e = std::exp(t);
    return e / (1.0 + e);
}

// log(sigmoid(t)), stable on both tails.
double log_sigmoid(double t) {
    if (t >= 0.0) return -std::log1p(std::exp(-t));
    return t - std::log1p(std::exp(t));
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void check_row_finite(const EmbeddingTable& table, NodeId id) {
    for (double v : table.row(id))
        if (!std::isfinite(v))
            throw InvariantError("non-finite embedding entry at node " + std::to_string(id));
}

void check_node(const EmbeddingTable& table, NodeId id) {
    if (id >= table.rows())
        throw DataError("node id " + std::to_string(id) + " outside embedding table");
    check_row_finite(table, id);
}

void cap_norm(std::span<double> row, double cap) {
    double sq = 0.0;
    for (double v : row) sq += v * v;
    if (sq > cap * cap) {
        double scale = cap / std::sqrt(sq);
        for (double& v : row) v *= scale;
    }
}

} // namespace

EmbeddingTable EmbeddingTable::random_init(std::size_t rows, std::size_t dim,
                                           std::uint64_t seed) {
    EmbeddingTable table(rows, dim);
    SplitMix64 rng(derive_seed(seed, 0x696e6974ULL)); // "init" stream
    const double half = 0.5 / static_cast<double>(dim);
    double* out = table.data();
    for (std::size_t i = 0; i < rows * dim; ++i)
        out[i] = (uniform_real(rng) - 0.5) * 2.0 * half;
    return table;
}

void TrainConfig::validate() const {
    if (dim < 1) throw DataError("embedding dimension must be at least 1");
    if (window < 1) throw DataError("window must be at least 1");
    if (negatives < 1) throw DataError("negatives per pair must be at least 1");
    if (!(lr0 > 0.0)) throw DataError("initial learning rate must be positive");
    if (epochs < 1) throw DataError("epochs must be at least 1");
    if (sub_loss_weight < 0.0) throw DataError("sub_loss_weight must be non-negative");
    if (!(norm_cap > 0.0)) throw DataError("norm_cap must be positive");
    if (!(neg_exponent > 0.0)) throw DataError("neg_exponent must be positive");
    if (threads < 1) throw DataError("threads must be at least 1");
}

NegativeSampler::NegativeSampler(std::vector<NodeId> support, std::vector<double> weights)
    : support_(std::move(support)) {
    if (support_.empty())
        throw DataError("negative sampler domain has no node with degree >= 1");
    double total = 0.0;
    for (double w : weights) total += w;
    probs_.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) probs_[i] = weights[i] / total;
    table_ = AliasTable(weights);
}

namespace {

double degree_weight(std::size_t deg, double exponent) {
    if (exponent == 1.0) return static_cast<double>(deg);
    return std::pow(static_cast<double>(deg), exponent);
}

} // namespace

NegativeSampler NegativeSampler::over_graph(const TypedGraph& graph, double exponent) {
    if (!(exponent > 0.0)) throw DataError("negative-sampling exponent must be positive");
    std::vector<NodeId> support;
    std::vector<double> weights;
    for (NodeId id = 0; id < graph.node_count(); ++id) {
        std::size_t deg = graph.degree(id);
        if (deg == 0) continue;
        support.push_back(id);
        weights.push_back(degree_weight(deg, exponent));
    }
    return NegativeSampler(std::move(support), std::move(weights));
}

NegativeSampler NegativeSampler::over_subgraph(const SubgraphView& sub, double exponent) {
    if (!(exponent > 0.0)) throw DataError("negative-sampling exponent must be positive");
    std::vector<NodeId> support;
    std::vector<double> weights;
    for (NodeId id : sub.vertex_ids()) {
        std::size_t deg = sub.degree(id);
        if (deg == 0) continue;
        support.push_back(id);
        weights.push_back(degree_weight(deg, exponent));
    }
    return NegativeSampler(std::move(support), std::move(weights));
}

NodeId NegativeSampler::sample(SplitMix64& rng) const {
    return support_[table_.sample(rng)];
}

void NegativeSampler::sample_excluding(SplitMix64& rng, NodeId a, NodeId b, std::uint32_t k,
                                       std::vector<NodeId>& out) const {
    for (std::uint32_t i = 0; i < k; ++i) {
        NodeId pick = a;
        bool found = false;
        for (int attempt = 0; attempt < 64; ++attempt) {
            pick = sample(rng);
            if (pick != a && pick != b) {
                found = true;
                break;
            }
        }
        if (!found) {
            // Tiny domain: scan for any valid node; give up when {a, b}
            // covers the whole support.
            for (NodeId cand : support_) {
                if (cand != a && cand != b) {
                    pick = cand;
                    found = true;
                    break;
                }
            }
            if (!found) return;
        }
        out.push_back(pick);
    }
}

std::vector<SkipGramPair> extract_pairs(const WalkCorpus& corpus, std::uint32_t window) {
    if (window < 1) throw DataError("window must be at least 1");
    std::vector<SkipGramPair> pairs;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        for_each_pair(corpus.walk(i), corpus.tag(i), window,
                      [&](const SkipGramPair& p) { pairs.push_back(p); });
    return pairs;
}

double sgns_pair_loss(const EmbeddingTable& table, NodeId center, NodeId context,
                      std::span<const NodeId> negatives) {
    check_node(table, center);
    check_node(table, context);
    double loss = -log_sigmoid(dot(table.row(center), table.row(context)));
    for (NodeId n : negatives) {
        check_node(table, n);
        loss -= log_sigmoid(-dot(table.row(center), table.row(n)));
    }
    return loss;
}

std::map<NodeId, std::vector<double>> sgns_pair_gradients(const EmbeddingTable& table,
                                                          NodeId center, NodeId context,
                                                          std::span<const NodeId> negatives) {
    check_node(table, center);
    check_node(table, context);
    const std::size_t d = table.dim();
    std::map<NodeId, std::vector<double>> grads;
    auto at = [&](NodeId id) -> std::vector<double>& {
        auto [it, inserted] = grads.try_emplace(id);
        if (inserted) it->second.assign(d, 0.0);
        return it->second;
    };

    auto zc = table.row(center);
    auto zx = table.row(context);
    double g_pos = sigmoid(dot(zc, zx)) - 1.0;
    auto& gc = at(center);
    auto& gx = at(context);
    for (std::size_t i = 0; i < d; ++i) {
        gc[i] += g_pos * zx[i];
        gx[i] += g_pos * zc[i];
    }
    for (NodeId n : negatives) {
        check_node(table, n);
        auto zn = table.row(n);
        double g_neg = sigmoid(dot(zc, zn));
        auto& gn = at(n);
        auto& gc2 = at(center);
        for (std::size_t i = 0; i < d; ++i) {
            gc2[i] += g_neg * zn[i];
            gn[i] += g_neg * zc[i];
        }
    }
    return grads;
}

void sgns_apply_update(EmbeddingTable& table, NodeId center, NodeId context,
                       std::span<const NodeId> negatives, double lr, double norm_cap,
                       std::span<double> scratch) {
    const std::size_t d = table.dim();
    auto zc = table.row(center);
    auto zx = table.row(context);

    // All coefficients are evaluated at the current point before any row
    // moves, so the applied step equals -lr * sgns_pair_gradients(...).
    double g_pos = sigmoid(dot(zc, zx)) - 1.0;
    for (std::size_t i = 0; i < d; ++i) scratch[i] = g_pos * zx[i];

    // Stack-light two-phase handling of negatives: coefficients first.
    thread_local std::vector<double> g_negs;
    g_negs.clear();
    for (NodeId n : negatives) {
        auto zn = table.row(n);
        double g = sigmoid(dot(zc, zn));
        g_negs.push_back(g);
        for (std::size_t i = 0; i < d; ++i) scratch[i] += g * zn[i];
    }

    for (std::size_t i = 0; i < d; ++i) zx[i] -= lr * g_pos * zc[i];
    cap_norm(zx, norm_cap);
    for (std::size_t k = 0; k < negatives.size(); ++k) {
        auto zn = table.row(negatives[k]);
        double g = g_negs[k];
        for (std::size_t i = 0; i < d; ++i) zn[i] -= lr * g * zc[i];
        cap_norm(zn, norm_cap);
    }
    for (std::size_t i = 0; i < d; ++i) zc[i] -= lr * scratch[i];
    cap_norm(zc, norm_cap);
}

namespace {

std::uint64_t pair_count(std::span<const NodeId> walk, std::uint32_t window) {
    const std::uint64_t len = walk.size();
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < len; ++i) {
        std::uint64_t lo = i > window ? i - window : 0;
        std::uint64_t hi = std::min(len - 1, i + window);
        count += hi - lo; // minus the i == j slot
    }
    return count;
}

} // namespace

EmbeddingTable train(const WalkCorpus& corpus, const TypedGraph& graph,
                     const SubgraphView* train_sub, const TrainConfig& config) {
    config.validate();
    if (corpus.empty()) throw DataError("cannot train on an empty walk corpus");

    bool has_sub_walks = false;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto walk = corpus.walk(i);
        if (corpus.tag(i) == WalkSource::Sub) {
            has_sub_walks = true;
            if (!train_sub)
                throw DataError("corpus has Sub-tagged walks but no train subgraph was given");
            for (NodeId id : walk) {
                if (!train_sub->contains(id))
                    throw DataError("Sub-tagged walk visits node " + std::to_string(id) +
                                    " outside the subgraph vertex set");
                if (id >= graph.node_count())
                    throw DataError("walk references unknown node id " + std::to_string(id));
            }
        } else {
            for (NodeId id : walk)
                if (id >= graph.node_count())
                    throw DataError("walk references unknown node id " + std::to_string(id));
        }
    }

    NegativeSampler full_sampler = NegativeSampler::over_graph(graph, config.neg_exponent);
    std::optional<NegativeSampler> sub_sampler;
    if (train_sub && has_sub_walks &&
        config.sub_negative_domain == SubNegativeDomain::Subgraph)
        sub_sampler = NegativeSampler::over_subgraph(*train_sub, config.neg_exponent);

    EmbeddingTable table = EmbeddingTable::random_init(graph.node_count(), config.dim,
                                                       config.seed);

    std::uint64_t pairs_per_epoch = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        pairs_per_epoch += pair_count(corpus.walk(i), config.window);
    const std::uint64_t total_updates = pairs_per_epoch * config.epochs;
    if (total_updates == 0) return table;

    const double lr0 = config.lr0;
    const double lr_min_frac = 0.01;
    const std::uint64_t lr_denom = std::max<std::uint64_t>(total_updates - 1, 1);
    std::atomic<std::uint64_t> global_step{0};

    std::vector<std::uint32_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);

    for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
        SplitMix64 order_rng(derive_seed(config.seed, 0x6f72646572ULL, epoch)); // "order"
        shuffle(order_rng, order);

        parallel_chunks(order.size(), config.threads,
                        [&](int worker, std::size_t begin, std::size_t end) {
            SplitMix64 neg_rng(derive_seed(config.seed, 0x6e6567ULL, epoch,
                                           static_cast<std::uint64_t>(worker))); // "neg"
            std::vector<double> scratch(config.dim);
            std::vector<NodeId> negatives;
            for (std::size_t w = begin; w < end; ++w) {
                std::size_t walk_idx = order[w];
                WalkSource source = corpus.tag(walk_idx);
                const NegativeSampler& sampler =
                    (source == WalkSource::Sub && sub_sampler) ? *sub_sampler : full_sampler;
                double scale = source == WalkSource::Sub ? config.sub_loss_weight : 1.0;
                for_each_pair(corpus.walk(walk_idx), source, config.window,
                              [&](const SkipGramPair& p) {
                    std::uint64_t step = global_step.fetch_add(1, std::memory_order_relaxed);
                    double progress = static_cast<double>(step) / static_cast<double>(lr_denom);
                    double lr = lr0 * (1.0 - (1.0 - lr_min_frac) * progress);
                    negatives.clear();
                    sampler.sample_excluding(neg_rng, p.center, p.context, config.negatives,
                                             negatives);
                    if (config.negative_observer)
                        for (NodeId n : negatives) config.negative_observer(source, n);
                    if (scale == 0.0) return;
                    sgns_apply_update(table, p.center, p.context, negatives, lr * scale,
                                      config.norm_cap, scratch);
                });
            }
        });
    }
    return table;
}

std::vector<LossSample> make_loss_samples(const WalkCorpus& corpus, std::uint32_t window,
                                          const NegativeSampler& full_sampler,
                                          const NegativeSampler* sub_sampler,
                                          std::uint32_t negatives, std::size_t count,
                                          std::uint64_t seed) {
    std::vector<SkipGramPair> pairs = extract_pairs(corpus, window);
    if (pairs.empty()) throw DataError("corpus yields no skip-gram pairs");
    SplitMix64 rng(derive_seed(seed, 0x73616d706cULL)); // "sampl"
    std::vector<LossSample> samples;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const SkipGramPair& p = pairs[uniform_index(rng, pairs.size())];
        const NegativeSampler* sampler =
            p.source == WalkSource::Sub ? sub_sampler : &full_sampler;
        if (!sampler) throw DataError("Sub-tagged pair sampled without a subgraph sampler");
        LossSample s;
        s.pair = p;
        sampler->sample_excluding(rng, p.center, p.context, negatives, s.negatives);
        samples.push_back(std::move(s));
    }
    return samples;
}

double estimate_loss(const EmbeddingTable& table, std::span<const LossSample> samples) {
    if (samples.empty()) throw DataError("cannot estimate loss over an empty sample");
    double total = 0.0;
    for (const LossSample& s : samples)
        total += sgns_pair_loss(table, s.pair.center, s.pair.context, s.negatives);
    return total / static_cast<double>(samples.size());
}

namespace {

void format_double(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

} // namespace

void save_embeddings(std::ostream& out, const TypedGraph& graph, const EmbeddingTable& table) {
    if (table.rows() != graph.node_count())
        throw DataError("embedding table has " + std::to_string(table.rows()) +
                        " rows but the graph has " + std::to_string(graph.node_count()) +
                        " nodes");
    out << table.rows() << ' ' << table.dim() << '\n';
    std::string line;
    for (NodeId id = 0; id < table.rows(); ++id) {
        const Node& n = graph.node(id);
        line.clear();
        line.append(to_string(n.kind));
        line.push_back(':');
        line.append(n.label);
        for (double v : table.row(id)) {
            line.push_back(' ');
            format_double(line, v);
        }
        line.push_back('\n');
        out << line;
    }
}

void save_embeddings_file(const std::string& path, const TypedGraph& graph,
                          const EmbeddingTable& table) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    save_embeddings(out, graph, table);
}

NamedEmbeddings load_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError("embedding file is empty");
    std::istringstream header(line);
    std::size_t rows = 0, dim = 0;
    if (!(header >> rows >> dim) || dim == 0)
        throw DataError("embedding file line 1: expected '<node_count> <dim>'");

    NamedEmbeddings named;
    named.table = EmbeddingTable(rows, dim);
    named.names.reserve(rows);

    std::size_t line_no = 1;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (row >= rows)
            throw DataError("embedding file line " + std::to_string(line_no) +
                            ": more rows than declared (" + std::to_string(rows) + ")");

        // The last `dim` space-separated tokens are values; the head is
        // "kind:label" (labels may contain single spaces).
        std::vector<std::size_t> breaks; // positions after which a token starts
        std::size_t pos = line.size();
        for (std::size_t k = 0; k < dim; ++k) {
            auto space = line.rfind(' ', pos - 1);
            if (space == std::string::npos || space == 0)
                throw DataError("embedding file line " + std::to_string(line_no) +
                                ": expected " + std::to_string(dim) + " values");
            breaks.push_back(space);
            pos = space;
        }
        std::size_t head_end = breaks.back();
        auto out_row = named.table.row(static_cast<NodeId>(row));
        for (std::size_t k = 0; k < dim; ++k) {
            std::size_t begin = breaks[dim - 1 - k] + 1;
            std::size_t end = (k + 1 < dim) ? breaks[dim - 2 - k] : line.size();
            double v = 0.0;
            auto res = std::from_chars(line.data() + begin, line.data() + end, v);
            if (res.ec != std::errc{} || res.ptr != line.data() + end || !std::isfinite(v))
                throw DataError("embedding file line " + std::to_string(line_no) +
                                ": bad value '" + line.substr(begin, end - begin) + "'");
            out_row[k] = v;
        }

        std::string head = line.substr(0, head_end);
        auto colon = head.find(':');
        if (colon == std::string::npos)
            throw DataError("embedding file line " + std::to_string(line_no) +
                            ": expected '<kind>:<label>' prefix");
        NodeKind kind = node_kind_from_string(head.substr(0, colon));
        named.names.emplace_back(kind, head.substr(colon + 1));
        ++row;
    }
    if (row != rows)
        throw DataError("embedding file declares " + std::to_string(rows) + " rows but has " +
                        std::to_string(row));
    return named;
}

NamedEmbeddings load_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return load_embeddings(in);
}

EmbeddingTable align_embeddings(const NamedEmbeddings& named, const TypedGraph& graph) {
    if (named.names.size() != graph.node_count())
        throw DataError("embedding file has " + std::to_string(named.names.size()) +
                        " nodes but the graph has " + std::to_string(graph.node_count()));
    EmbeddingTable aligned(graph.node_count(), named.table.dim());
    for (std::size_t i = 0; i < named.names.size(); ++i) {
        const auto& [kind, label] = named.names[i];
        auto id = graph.find_node(kind, label);
        if (!id)
            throw DataError("embedding row '" + std::string(to_string(kind)) + ":" + label +
                            "' does not match any graph node");
        auto src = named.table.row(static_cast<NodeId>(i));
        auto dst = aligned.row(*id);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return aligned;
}

} // namespace c2v
