// Python bindings for the main pipeline operations.

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "custom2vec/analysis.hpp"
#include "custom2vec/graph_io.hpp"
#include "custom2vec/ingest.hpp"
#include "custom2vec/recommend.hpp"
#include "custom2vec/synthetic.hpp"
#include "custom2vec/trainer.hpp"
#include "custom2vec/walks.hpp"

namespace py = pybind11;
using namespace c2v;

namespace {

py::array_t<double> table_to_numpy(const EmbeddingTable& table) {
    py::array_t<double> out({table.rows(), table.dim()});
    std::copy(table.data(), table.data() + table.rows() * table.dim(),
              out.mutable_data());
    return out;
}

std::vector<std::pair<NodeId, NodeId>> pairs_to_tuples(std::span<const NodePair> pairs) {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(pairs.size());
    for (const NodePair& p : pairs) out.emplace_back(p.first, p.second);
    return out;
}

std::vector<NodePair> tuples_to_pairs(const std::vector<std::pair<NodeId, NodeId>>& tuples) {
    std::vector<NodePair> out;
    out.reserve(tuples.size());
    for (const auto& [u, v] : tuples) out.emplace_back(u, v);
    return out;
}

PairSet tuples_to_set(const std::vector<std::pair<NodeId, NodeId>>& tuples) {
    PairSet out;
    for (const auto& [u, v] : tuples) out.insert(NodePair(u, v));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "custom2vec: preference-customized knowledge-graph embeddings";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::enum_<NodeKind>(m, "NodeKind")
        .value("Trial", NodeKind::Trial)
        .value("Indication", NodeKind::Indication)
        .value("Intervention", NodeKind::Intervention)
        .value("Phase", NodeKind::Phase)
        .value("Sponsor", NodeKind::Sponsor)
        .value("Endpoint", NodeKind::Endpoint);

    py::enum_<EdgeOrigin>(m, "EdgeOrigin")
        .value("Native", EdgeOrigin::Native)
        .value("Custom", EdgeOrigin::Custom);

    py::enum_<WalkSource>(m, "WalkSource")
        .value("Full", WalkSource::Full)
        .value("Sub", WalkSource::Sub);

    py::enum_<SubNegativeDomain>(m, "SubNegativeDomain")
        .value("Graph", SubNegativeDomain::Graph)
        .value("Subgraph", SubNegativeDomain::Subgraph);

    py::class_<Node>(m, "Node")
        .def_readonly("id", &Node::id)
        .def_readonly("kind", &Node::kind)
        .def_readonly("label", &Node::label);

    py::class_<SubgraphView>(m, "SubgraphView")
        .def_property_readonly("node_count", &SubgraphView::node_count)
        .def_property_readonly("edge_count", &SubgraphView::edge_count)
        .def("contains", &SubgraphView::contains, py::arg("node"))
        .def("degree", &SubgraphView::degree, py::arg("node"))
        .def("has_edge", &SubgraphView::has_edge, py::arg("u"), py::arg("v"))
        .def("vertex_ids", [](const SubgraphView& v) {
            return std::vector<NodeId>(v.vertex_ids().begin(), v.vertex_ids().end());
        });

    py::class_<TypedGraph>(m, "TypedGraph")
        .def(py::init<>())
        .def("add_node", &TypedGraph::add_node, py::arg("kind"), py::arg("label"))
        .def("add_edge", &TypedGraph::add_edge, py::arg("u"), py::arg("v"),
             py::arg("origin") = EdgeOrigin::Native)
        .def_property_readonly("node_count", &TypedGraph::node_count)
        .def_property_readonly("edge_count", &TypedGraph::edge_count)
        .def("node", &TypedGraph::node, py::arg("id"), py::return_value_policy::copy)
        .def("find_node", &TypedGraph::find_node, py::arg("kind"), py::arg("label"))
        .def("degree", &TypedGraph::degree, py::arg("node"))
        .def("neighbors",
             [](const TypedGraph& g, NodeId u) {
                 auto nb = g.neighbors(u);
                 return std::vector<NodeId>(nb.begin(), nb.end());
             },
             py::arg("node"))
        .def("has_edge", &TypedGraph::has_edge, py::arg("u"), py::arg("v"))
        .def("nodes_of_kind", &TypedGraph::nodes_of_kind, py::arg("kind"))
        .def("subgraph_view",
             [](const TypedGraph& g, const std::vector<NodeId>& vertices,
                const std::vector<std::pair<NodeId, NodeId>>& edges) {
                 return g.subgraph_view(vertices, tuples_to_pairs(edges));
             },
             py::arg("vertices"), py::arg("edges"), py::keep_alive<0, 1>());

    py::class_<TrialRecord>(m, "TrialRecord")
        .def(py::init<>())
        .def_readwrite("trial_id", &TrialRecord::trial_id)
        .def_readwrite("indications", &TrialRecord::indications)
        .def_readwrite("interventions", &TrialRecord::interventions)
        .def_readwrite("phase", &TrialRecord::phase)
        .def_readwrite("sponsors", &TrialRecord::sponsors)
        .def_readwrite("endpoints", &TrialRecord::endpoints);

    py::class_<CustomSet>(m, "CustomSet")
        .def(py::init<>())
        .def_readwrite("trial_ids", &CustomSet::trial_ids)
        .def_static("load_file", &CustomSet::load_file, py::arg("path"));

    py::class_<SynonymDict>(m, "SynonymDict")
        .def(py::init<>())
        .def_static("load_file", &SynonymDict::load_file, py::arg("path"))
        .def("insert", &SynonymDict::insert, py::arg("raw"), py::arg("canonical"))
        .def("__len__", &SynonymDict::size);

    m.def("normalize_label", &normalize_label, py::arg("raw"), py::arg("kind"),
          py::arg("dict") = nullptr);
    m.def("parse_records_file", &parse_records_file, py::arg("path"));
    m.def(
        "parse_records",
        [](const std::string& text) {
            std::istringstream in(text);
            return parse_records(in);
        },
        py::arg("text"));
    m.def("save_records_file",
          [](const std::string& path, const std::vector<TrialRecord>& records) {
              save_records_file(path, records);
          },
          py::arg("path"), py::arg("records"));
    m.def("save_custom_set_file", &save_custom_set_file, py::arg("path"), py::arg("custom"));
    m.def(
        "build_graph",
        [](const std::vector<TrialRecord>& records, const SynonymDict* dict) {
            return build_graph(records, dict);
        },
        py::arg("records"), py::arg("dict") = nullptr);
    m.def(
        "build_custom_subgraph",
        [](const TypedGraph& graph, const CustomSet& custom, const SynonymDict* dict) {
            return pairs_to_tuples(build_custom_subgraph(graph, custom, dict));
        },
        py::arg("graph"), py::arg("custom"), py::arg("dict") = nullptr);
    m.def("resolve_custom_set", &resolve_custom_set, py::arg("graph"), py::arg("custom"),
          py::arg("dict") = nullptr);

    py::class_<SubgraphSplit>(m, "SubgraphSplit")
        .def_readonly("vertex_set", &SubgraphSplit::vertex_set)
        .def_property_readonly("train_edges",
                               [](const SubgraphSplit& s) { return pairs_to_tuples(s.train_edges); })
        .def_property_readonly("test_edges",
                               [](const SubgraphSplit& s) { return pairs_to_tuples(s.test_edges); })
        .def_readonly("split_ratio", &SubgraphSplit::split_ratio)
        .def_readonly("seed", &SubgraphSplit::seed);

    m.def(
        "split_subgraph",
        [](const std::vector<std::pair<NodeId, NodeId>>& edges, double ratio,
           std::uint64_t seed) { return split_subgraph(tuples_to_pairs(edges), ratio, seed); },
        py::arg("edges"), py::arg("ratio"), py::arg("seed"));
    m.def(
        "enrich_graph",
        [](const TypedGraph& graph, const std::vector<std::pair<NodeId, NodeId>>& train) {
            return enrich_graph(graph, tuples_to_pairs(train));
        },
        py::arg("graph"), py::arg("train_edges"));
    m.def("save_split_file", &save_split_file, py::arg("path"), py::arg("graph"),
          py::arg("split"));
    m.def("load_split_file", &load_split_file, py::arg("path"), py::arg("graph"));
    m.def("save_graph", &save_graph, py::arg("nodes_path"), py::arg("edges_path"),
          py::arg("graph"));
    m.def("load_graph",
          py::overload_cast<const std::string&, const std::string&>(&load_graph),
          py::arg("nodes_path"), py::arg("edges_path"));

    py::class_<WalkParams>(m, "WalkParams")
        .def(py::init<>())
        .def_readwrite("p", &WalkParams::p)
        .def_readwrite("q", &WalkParams::q)
        .def_readwrite("walk_length", &WalkParams::walk_length)
        .def_readwrite("num_walks", &WalkParams::num_walks)
        .def_readwrite("seed", &WalkParams::seed);

    py::class_<WalkCorpus>(m, "WalkCorpus")
        .def("__len__", &WalkCorpus::size)
        .def_property_readonly("token_count", &WalkCorpus::token_count)
        .def("walk",
             [](const WalkCorpus& c, std::size_t i) {
                 auto w = c.walk(i);
                 return std::vector<NodeId>(w.begin(), w.end());
             },
             py::arg("index"))
        .def("tag", &WalkCorpus::tag, py::arg("index"))
        .def("dump",
             [](const WalkCorpus& c) {
                 std::ostringstream out;
                 c.dump(out);
                 return out.str();
             });

    m.def("generate_walks",
          py::overload_cast<const TypedGraph&, const WalkParams&, WalkSource, int>(
              &generate_walks),
          py::arg("graph"), py::arg("params"), py::arg("tag") = WalkSource::Full,
          py::arg("threads") = 1);
    m.def("generate_joint_corpus", &generate_joint_corpus, py::arg("enriched"),
          py::arg("train_sub"), py::arg("full_params"), py::arg("sub_params"),
          py::arg("threads") = 1);

    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_static("from_numpy",
                    [](py::array_t<double, py::array::c_style | py::array::forcecast> array) {
                        if (array.ndim() != 2)
                            throw DataError("embedding array must be 2-dimensional");
                        EmbeddingTable table(static_cast<std::size_t>(array.shape(0)),
                                             static_cast<std::size_t>(array.shape(1)));
                        std::copy(array.data(), array.data() + array.size(), table.data());
                        return table;
                    },
                    py::arg("array"))
        .def_property_readonly("rows", &EmbeddingTable::rows)
        .def_property_readonly("dim", &EmbeddingTable::dim)
        .def("row",
             [](const EmbeddingTable& t, NodeId id) {
                 if (id >= t.rows()) throw DataError("node id outside embedding table");
                 auto r = t.row(id);
                 return std::vector<double>(r.begin(), r.end());
             },
             py::arg("node"))
        .def("to_numpy", &table_to_numpy);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("dim", &TrainConfig::dim)
        .def_readwrite("window", &TrainConfig::window)
        .def_readwrite("negatives", &TrainConfig::negatives)
        .def_readwrite("lr0", &TrainConfig::lr0)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("sub_loss_weight", &TrainConfig::sub_loss_weight)
        .def_readwrite("norm_cap", &TrainConfig::norm_cap)
        .def_readwrite("neg_exponent", &TrainConfig::neg_exponent)
        .def_readwrite("sub_negative_domain", &TrainConfig::sub_negative_domain)
        .def_readwrite("threads", &TrainConfig::threads);

    m.def(
        "train",
        [](const WalkCorpus& corpus, const TypedGraph& graph, const SubgraphView* sub,
           const TrainConfig& config) { return train(corpus, graph, sub, config); },
        py::arg("corpus"), py::arg("graph"), py::arg("train_sub") = nullptr,
        py::arg("config") = TrainConfig{});

    py::class_<SkipGramPair>(m, "SkipGramPair")
        .def_readonly("center", &SkipGramPair::center)
        .def_readonly("context", &SkipGramPair::context)
        .def_readonly("source", &SkipGramPair::source);

    m.def("extract_pairs", &extract_pairs, py::arg("corpus"), py::arg("window"));
    m.def(
        "sgns_pair_loss",
        [](const EmbeddingTable& table, NodeId center, NodeId context,
           const std::vector<NodeId>& negatives) {
            return sgns_pair_loss(table, center, context, negatives);
        },
        py::arg("table"), py::arg("center"), py::arg("context"), py::arg("negatives"));
    m.def(
        "sgns_pair_gradients",
        [](const EmbeddingTable& table, NodeId center, NodeId context,
           const std::vector<NodeId>& negatives) {
            return sgns_pair_gradients(table, center, context, negatives);
        },
        py::arg("table"), py::arg("center"), py::arg("context"), py::arg("negatives"));

    py::class_<NegativeSampler>(m, "NegativeSampler")
        .def_static("over_graph", &NegativeSampler::over_graph, py::arg("graph"),
                    py::arg("exponent") = 1.0)
        .def_static("over_subgraph", &NegativeSampler::over_subgraph, py::arg("subgraph"),
                    py::arg("exponent") = 1.0)
        .def("domain",
             [](const NegativeSampler& s) {
                 return std::vector<NodeId>(s.domain().begin(), s.domain().end());
             })
        .def("probabilities", [](const NegativeSampler& s) {
            return std::vector<double>(s.probabilities().begin(), s.probabilities().end());
        });

    py::class_<LossSample>(m, "LossSample")
        .def_readonly("pair", &LossSample::pair)
        .def_readonly("negatives", &LossSample::negatives);

    m.def(
        "make_loss_samples",
        [](const WalkCorpus& corpus, std::uint32_t window, const NegativeSampler& full_sampler,
           const NegativeSampler* sub_sampler, std::uint32_t negatives, std::size_t count,
           std::uint64_t seed) {
            return make_loss_samples(corpus, window, full_sampler, sub_sampler, negatives,
                                     count, seed);
        },
        py::arg("corpus"), py::arg("window"), py::arg("full_sampler"),
        py::arg("sub_sampler") = nullptr, py::arg("negatives") = 5, py::arg("count") = 1000,
        py::arg("seed") = 1);
    m.def(
        "estimate_loss",
        [](const EmbeddingTable& table, const std::vector<LossSample>& samples) {
            return estimate_loss(table, samples);
        },
        py::arg("table"), py::arg("samples"));

    m.def("save_embeddings_file", &save_embeddings_file, py::arg("path"), py::arg("graph"),
          py::arg("table"));
    m.def(
        "load_embeddings_file",
        [](const std::string& path, const TypedGraph& graph) {
            return align_embeddings(load_embeddings_file(path), graph);
        },
        py::arg("path"), py::arg("graph"));

    m.def("cosine", &cosine, py::arg("table"), py::arg("u"), py::arg("v"));

    py::class_<RankedLink>(m, "RankedLink")
        .def_readonly("u", &RankedLink::u)
        .def_readonly("v", &RankedLink::v)
        .def_readonly("score", &RankedLink::score)
        .def_readonly("rank", &RankedLink::rank)
        .def("__repr__", [](const RankedLink& r) {
            std::ostringstream out;
            out << "RankedLink(rank=" << r.rank << ", u=" << r.u << ", v=" << r.v
                << ", score=" << r.score << ")";
            return out.str();
        });

    m.def("candidate_pool",
          [](const TypedGraph& graph) { return pairs_to_tuples(candidate_pool(graph)); },
          py::arg("graph"));
    m.def(
        "rank_links",
        [](const EmbeddingTable& table, const std::vector<std::pair<NodeId, NodeId>>& candidates,
           const std::vector<std::pair<NodeId, NodeId>>& exclude, std::size_t top_n) {
            return rank_links(table, tuples_to_pairs(candidates), tuples_to_set(exclude), top_n);
        },
        py::arg("table"), py::arg("candidates"),
        py::arg("exclude") = std::vector<std::pair<NodeId, NodeId>>{}, py::arg("top_n"));
    m.def(
        "rank_all_trial_pairs",
        [](const EmbeddingTable& table, const TypedGraph& graph,
           const std::vector<std::pair<NodeId, NodeId>>& exclude, std::size_t top_n,
           int threads) {
            return rank_all_trial_pairs(table, graph, tuples_to_set(exclude), top_n, threads);
        },
        py::arg("table"), py::arg("graph"),
        py::arg("exclude") = std::vector<std::pair<NodeId, NodeId>>{}, py::arg("top_n"),
        py::arg("threads") = 1);
    m.def(
        "precision_at_k",
        [](const std::vector<RankedLink>& ranked,
           const std::vector<std::pair<NodeId, NodeId>>& test, const std::vector<std::size_t>& ks) {
            PrecisionSeries series = precision_at_k(ranked, tuples_to_set(test), ks);
            std::map<std::size_t, double> out;
            for (std::size_t i = 0; i < series.ks.size(); ++i)
                out[series.ks[i]] = series.precisions[i];
            return out;
        },
        py::arg("ranked"), py::arg("test"), py::arg("ks"));

    py::class_<SimilarityStats>(m, "SimilarityStats")
        .def_readonly("mean", &SimilarityStats::mean)
        .def_readonly("stddev", &SimilarityStats::stddev)
        .def_readonly("count", &SimilarityStats::count)
        .def_readonly("histogram", &SimilarityStats::histogram);

    py::class_<PairPopulation>(m, "PairPopulation")
        .def_readonly("name", &PairPopulation::name)
        .def_property_readonly("pairs",
                               [](const PairPopulation& p) { return pairs_to_tuples(p.pairs); });

    m.def(
        "native_hidden_pairs",
        [](const TypedGraph& graph, std::size_t min_shared, std::size_t sample_size,
           std::uint64_t seed, const std::vector<NodeId>& exclude_vertices) {
            return native_hidden_pairs(graph, min_shared, sample_size, seed, exclude_vertices);
        },
        py::arg("graph"), py::arg("min_shared") = 2, py::arg("sample_size") = 10000,
        py::arg("seed") = 1, py::arg("exclude_vertices") = std::vector<NodeId>{});
    m.def("native_direct_pairs", &native_direct_pairs, py::arg("graph"),
          py::arg("kind") = NodeKind::Endpoint);
    m.def(
        "custom_pairs",
        [](bool test, const std::vector<std::pair<NodeId, NodeId>>& pairs) {
            return custom_pairs(test ? PopulationKind::CustomTest : PopulationKind::CustomTrain,
                                tuples_to_pairs(pairs));
        },
        py::arg("test"), py::arg("pairs"));
    m.def("population_stats", &population_stats, py::arg("table"), py::arg("population"),
          py::arg("bins") = 50);

    py::class_<ModelStats>(m, "ModelStats")
        .def(py::init<>())
        .def_readwrite("model", &ModelStats::model)
        .def_readwrite("by_population", &ModelStats::by_population);

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("model", &ComparisonRow::model)
        .def_readonly("population", &ComparisonRow::population)
        .def_readonly("mean", &ComparisonRow::mean)
        .def_readonly("stddev", &ComparisonRow::stddev)
        .def_readonly("delta_mean", &ComparisonRow::delta_mean)
        .def_readonly("delta_std", &ComparisonRow::delta_std)
        .def_readonly("flagged", &ComparisonRow::flagged);

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("baseline", &ComparisonReport::baseline)
        .def_readonly("threshold", &ComparisonReport::threshold)
        .def_readonly("rows", &ComparisonReport::rows);

    m.def(
        "compare_models",
        [](const std::vector<ModelStats>& models, const std::string& baseline,
           double threshold) { return compare_models(models, baseline, threshold); },
        py::arg("models"), py::arg("baseline"), py::arg("threshold") = 0.05);

    py::class_<AttributeSpec>(m, "AttributeSpec")
        .def(py::init<>())
        .def_readwrite("vocab", &AttributeSpec::vocab)
        .def_readwrite("min_per_trial", &AttributeSpec::min_per_trial)
        .def_readwrite("max_per_trial", &AttributeSpec::max_per_trial);

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_trials", &SynthConfig::n_trials)
        .def_readwrite("indications", &SynthConfig::indications)
        .def_readwrite("interventions", &SynthConfig::interventions)
        .def_readwrite("phases", &SynthConfig::phases)
        .def_readwrite("sponsors", &SynthConfig::sponsors)
        .def_readwrite("endpoints", &SynthConfig::endpoints)
        .def_readwrite("zipf_exponent", &SynthConfig::zipf_exponent)
        .def_readwrite("planted_cluster_size", &SynthConfig::planted_cluster_size)
        .def_readwrite("planted_attribute_strength", &SynthConfig::planted_attribute_strength)
        .def_readwrite("seed", &SynthConfig::seed);

    py::class_<SynthOutput>(m, "SynthOutput")
        .def_readonly("records", &SynthOutput::records)
        .def_readonly("custom", &SynthOutput::custom);

    m.def("generate", &generate, py::arg("config"));
    m.def("scale_config", &scale_config, py::arg("seed"));

    m.attr("__version__") = "0.1.0";
}
