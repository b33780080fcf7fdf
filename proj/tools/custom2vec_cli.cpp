// Pipeline driver: synth -> build -> train -> evaluate -> analyze.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "custom2vec/analysis.hpp"
#include "custom2vec/graph_io.hpp"
#include "custom2vec/ingest.hpp"
#include "custom2vec/recommend.hpp"
#include "custom2vec/synthetic.hpp"
#include "custom2vec/trainer.hpp"
#include "custom2vec/walks.hpp"

namespace fs = std::filesystem;
using namespace c2v;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1;
    int threads = 1;
};

struct ModelSelector {
    enum class Kind { Node2vecRaw, Node2vecEnriched, Custom2vec } kind;
    std::uint32_t sub_num_walks = 0;
    std::string name;
};

ModelSelector parse_model(const std::string& name) {
    ModelSelector m;
    m.name = name;
    if (name == "node2vec-raw") {
        m.kind = ModelSelector::Kind::Node2vecRaw;
        return m;
    }
    if (name == "node2vec-enriched") {
        m.kind = ModelSelector::Kind::Node2vecEnriched;
        return m;
    }
    const std::string prefix = "custom2vec-";
    if (name.rfind(prefix, 0) == 0) {
        const std::string digits = name.substr(prefix.size());
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
            m.kind = ModelSelector::Kind::Custom2vec;
            m.sub_num_walks = static_cast<std::uint32_t>(std::stoul(digits));
            if (m.sub_num_walks == 0)
                throw CLI::ValidationError("--model", "custom2vec needs a positive walk count");
            return m;
        }
    }
    throw CLI::ValidationError(
        "--model", "expected node2vec-raw, node2vec-enriched, or custom2vec-<r>, got '" + name +
                       "'");
}

struct GraphDir {
    fs::path dir;
    fs::path nodes() const { return dir / "nodes.tsv"; }
    fs::path raw_edges() const { return dir / "edges.raw.tsv"; }
    fs::path enriched_edges() const { return dir / "edges.enriched.tsv"; }
    fs::path split() const { return dir / "split.tsv"; }
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

// ---------------------------------------------------------------------------
// synth

struct SynthOpts {
    fs::path out_dir = ".";
    std::string preset = "desk";
    std::size_t n_trials = 0; // 0 = preset default
    std::size_t cluster_size = 0;
    double strength = -1.0;
    double zipf = -1.0;
};

int cmd_synth(const GlobalOpts& global, const SynthOpts& opts) {
    SynthConfig config;
    if (opts.preset == "desk")
        config = SynthConfig{};
    else if (opts.preset == "scale")
        config = scale_config(global.seed);
    else
        throw CLI::ValidationError("--preset", "expected 'desk' or 'scale'");
    config.seed = global.seed;
    if (opts.n_trials > 0) config.n_trials = opts.n_trials;
    if (opts.cluster_size > 0) config.planted_cluster_size = opts.cluster_size;
    if (opts.strength >= 0.0) config.planted_attribute_strength = opts.strength;
    if (opts.zipf >= 0.0) config.zipf_exponent = opts.zipf;

    SynthOutput out = generate(config);
    ensure_dir(opts.out_dir);
    save_records_file((opts.out_dir / "records.jsonl").string(), out.records);
    save_custom_set_file((opts.out_dir / "custom.txt").string(), out.custom);
    std::cout << "wrote " << out.records.size() << " records and a " << out.custom.trial_ids.size()
              << "-trial custom set to " << opts.out_dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// build

struct BuildOpts {
    fs::path records;
    fs::path custom;
    fs::path out_dir = ".";
    double ratio = 0.8;
    fs::path synonyms;
};

int cmd_build(const GlobalOpts& global, const BuildOpts& opts) {
    std::optional<SynonymDict> dict;
    if (!opts.synonyms.empty()) dict = SynonymDict::load_file(opts.synonyms.string());
    const SynonymDict* dict_ptr = dict ? &*dict : nullptr;

    auto records = parse_records_file(opts.records.string());
    TypedGraph graph = build_graph(records, dict_ptr);
    CustomSet custom = CustomSet::load_file(opts.custom.string());
    auto pairs = build_custom_subgraph(graph, custom, dict_ptr);
    SubgraphSplit split = split_subgraph(pairs, opts.ratio, global.seed);
    TypedGraph enriched = enrich_graph(graph, split.train_edges);

    GraphDir out{opts.out_dir};
    ensure_dir(out.dir);
    save_graph(out.nodes().string(), out.raw_edges().string(), graph);
    {
        std::ofstream edges(out.enriched_edges());
        if (!edges) throw DataError("cannot write file: " + out.enriched_edges().string());
        save_edges(edges, enriched);
    }
    save_split_file(out.split().string(), graph, split);

    std::cout << "graph: " << graph.node_count() << " nodes, " << graph.edge_count()
              << " native edges; enriched: " << enriched.edge_count() << " edges; split: "
              << split.train_edges.size() << " train / " << split.test_edges.size()
              << " test\n";
    return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
    fs::path graph_dir;
    std::string model = "node2vec-raw";
    fs::path out;
    fs::path dump_corpus;
    std::size_t dim = 20;
    std::uint32_t walk_length = 16;
    std::uint32_t num_walks = 100;
    double p = 1.0;
    double q = 1.0;
    std::uint32_t window = 5;
    std::uint32_t negatives = 5;
    double neg_exponent = 1.0;
    double lr0 = 0.025;
    std::uint32_t epochs = 1;
    double sub_loss_weight = 1.0;
};

int cmd_train(const GlobalOpts& global, const TrainOpts& opts) {
    ModelSelector model = parse_model(opts.model);
    GraphDir in{opts.graph_dir};

    WalkParams full_params;
    full_params.p = opts.p;
    full_params.q = opts.q;
    full_params.walk_length = opts.walk_length;
    full_params.num_walks = opts.num_walks;
    full_params.seed = global.seed;

    TrainConfig config;
    config.dim = opts.dim;
    config.window = opts.window;
    config.negatives = opts.negatives;
    config.neg_exponent = opts.neg_exponent;
    config.lr0 = opts.lr0;
    config.epochs = opts.epochs;
    config.seed = global.seed;
    config.sub_loss_weight = opts.sub_loss_weight;
    config.threads = global.threads;

    WalkCorpus corpus;
    EmbeddingTable table;
    TypedGraph graph;
    if (model.kind == ModelSelector::Kind::Node2vecRaw) {
        graph = load_graph(in.nodes().string(), in.raw_edges().string());
        corpus = generate_walks(graph, full_params, WalkSource::Full, global.threads);
        table = train(corpus, graph, nullptr, config);
    } else {
        graph = load_graph(in.nodes().string(), in.enriched_edges().string());
        SubgraphSplit split = load_split_file(in.split().string(), graph);
        SubgraphView sub = graph.subgraph_view(split.vertex_set, split.train_edges);
        WalkParams sub_params = full_params;
        sub_params.num_walks =
            model.kind == ModelSelector::Kind::Custom2vec ? model.sub_num_walks : 0;
        corpus = generate_joint_corpus(graph, sub, full_params, sub_params, global.threads);
        table = train(corpus, graph, &sub, config);
    }

    if (!opts.dump_corpus.empty()) dump_corpus_file(opts.dump_corpus.string(), corpus);

    fs::path out = opts.out.empty() ? in.dir / (model.name + ".emb") : opts.out;
    if (!out.parent_path().empty()) ensure_dir(out.parent_path());
    save_embeddings_file(out.string(), graph, table);
    std::cout << "trained " << model.name << " on " << corpus.size() << " walks ("
              << corpus.token_count() << " tokens); embeddings -> " << out.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
    fs::path graph_dir;
    fs::path embeddings;
    fs::path out_dir = ".";
    std::vector<std::size_t> ks = {10, 50, 100, 1000};
};

int cmd_evaluate(const GlobalOpts& global, const EvaluateOpts& opts) {
    if (opts.ks.empty()) throw CLI::ValidationError("--ks", "needs at least one value");
    GraphDir in{opts.graph_dir};
    TypedGraph enriched = load_graph(in.nodes().string(), in.enriched_edges().string());
    SubgraphSplit split = load_split_file(in.split().string(), enriched);
    EmbeddingTable table = align_embeddings(load_embeddings_file(opts.embeddings.string()),
                                            enriched);

    PairSet exclude(split.train_edges.begin(), split.train_edges.end());
    PairSet test(split.test_edges.begin(), split.test_edges.end());
    std::size_t top_n = *std::max_element(opts.ks.begin(), opts.ks.end());

    auto ranked = rank_all_trial_pairs(table, enriched, exclude, top_n, global.threads);
    PrecisionSeries series = precision_at_k(ranked, test, opts.ks);

    ensure_dir(opts.out_dir);
    save_precision_file((opts.out_dir / "precision.tsv").string(), series);
    save_recommendations_file((opts.out_dir / "recommendations.tsv").string(), enriched, ranked,
                              test);
    for (std::size_t i = 0; i < series.ks.size(); ++i)
        std::cout << "P@" << series.ks[i] << " = " << series.precisions[i] << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
    fs::path graph_dir;
    std::vector<std::string> embeddings; // name=path
    fs::path out_dir = ".";
    std::size_t min_shared = 2;
    std::size_t sample_size = 10000;
    std::size_t bins = 50;
    double threshold = 0.05;
};

int cmd_analyze(const GlobalOpts& global, const AnalyzeOpts& opts) {
    if (opts.embeddings.empty())
        throw CLI::ValidationError("--embeddings", "needs at least one name=path entry");
    GraphDir in{opts.graph_dir};
    TypedGraph raw = load_graph(in.nodes().string(), in.raw_edges().string());
    SubgraphSplit split = load_split_file(in.split().string(), raw);

    std::vector<PairPopulation> populations;
    populations.push_back(custom_pairs(PopulationKind::CustomTrain, split.train_edges));
    populations.push_back(custom_pairs(PopulationKind::CustomTest, split.test_edges));
    populations.push_back(native_hidden_pairs(raw, opts.min_shared, opts.sample_size,
                                              global.seed, split.vertex_set));
    populations.push_back(native_direct_pairs(raw, NodeKind::Endpoint));

    std::vector<ModelStats> models;
    for (const std::string& entry : opts.embeddings) {
        auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size())
            throw CLI::ValidationError("--embeddings", "expected name=path, got '" + entry + "'");
        ModelStats stats;
        stats.model = entry.substr(0, eq);
        EmbeddingTable table =
            align_embeddings(load_embeddings_file(entry.substr(eq + 1)), raw);
        for (const PairPopulation& pop : populations)
            stats.by_population[pop.name] = population_stats(table, pop, opts.bins);
        models.push_back(std::move(stats));
    }

    ensure_dir(opts.out_dir);
    save_stats_file((opts.out_dir / "stats.tsv").string(), models);
    for (const ModelStats& m : models)
        for (const auto& [pop, stats] : m.by_population)
            save_histogram_file((opts.out_dir / ("hist_" + m.model + "_" + pop + ".tsv")).string(),
                                stats);

    if (models.size() >= 2) {
        std::string baseline = models.front().model;
        for (const ModelStats& m : models)
            if (m.model == "node2vec-raw") baseline = m.model;
        ComparisonReport report = compare_models(models, baseline, opts.threshold);
        save_comparison_file((opts.out_dir / "compare.tsv").string(), report);
        for (const ComparisonRow& row : report.rows)
            if (row.flagged)
                std::cout << "flagged: " << row.model << " shifts " << row.population << " by "
                          << row.delta_mean << "\n";
    }
    std::cout << "analyzed " << models.size() << " model(s) over " << populations.size()
              << " populations -> " << opts.out_dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    GlobalOpts global;
    CLI::App app{"custom2vec: preference-customized knowledge-graph embeddings"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value config file");
    app.add_option("--seed", global.seed, "Base seed for every random stream")
        ->capture_default_str();
    app.add_option("--threads", global.threads, "1 = deterministic, >1 = parallel")
        ->capture_default_str();

    SynthOpts synth_opts;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic record set");
    synth_cmd->add_option("--out-dir", synth_opts.out_dir, "Output directory")
        ->capture_default_str();
    synth_cmd->add_option("--preset", synth_opts.preset, "desk or scale")->capture_default_str();
    synth_cmd->add_option("--n-trials", synth_opts.n_trials, "Override trial count");
    synth_cmd->add_option("--cluster-size", synth_opts.cluster_size,
                          "Override planted cluster size");
    synth_cmd->add_option("--strength", synth_opts.strength,
                          "Override planted attribute strength");
    synth_cmd->add_option("--zipf", synth_opts.zipf, "Override label popularity exponent");

    BuildOpts build_opts;
    auto* build_cmd = app.add_subcommand("build", "Build graph files and the custom split");
    build_cmd->add_option("--records", build_opts.records, "records.jsonl input")->required();
    build_cmd->add_option("--custom", build_opts.custom, "custom trial id list")->required();
    build_cmd->add_option("--out-dir", build_opts.out_dir, "Output directory")
        ->capture_default_str();
    build_cmd->add_option("--ratio", build_opts.ratio, "Train fraction of the custom subgraph")
        ->capture_default_str();
    build_cmd->add_option("--synonyms", build_opts.synonyms, "Optional raw->canonical TSV");

    TrainOpts train_opts;
    auto* train_cmd = app.add_subcommand("train", "Train a model's embeddings");
    train_cmd->add_option("--graph-dir", train_opts.graph_dir, "Directory written by build")
        ->required();
    train_cmd
        ->add_option("--model", train_opts.model,
                     "node2vec-raw | node2vec-enriched | custom2vec-<r>")
        ->capture_default_str();
    train_cmd->add_option("--out", train_opts.out, "Embedding output path");
    train_cmd->add_option("--dump-corpus", train_opts.dump_corpus,
                          "Optional walk corpus dump path");
    train_cmd->add_option("--dim", train_opts.dim, "Embedding dimension")->capture_default_str();
    train_cmd->add_option("--walk-length", train_opts.walk_length, "Nodes per walk")
        ->capture_default_str();
    train_cmd->add_option("--num-walks", train_opts.num_walks, "Walks per node (full graph)")
        ->capture_default_str();
    train_cmd->add_option("--p", train_opts.p, "Return parameter")->capture_default_str();
    train_cmd->add_option("--q", train_opts.q, "In-out parameter")->capture_default_str();
    train_cmd->add_option("--window", train_opts.window, "Skip-gram context radius")
        ->capture_default_str();
    train_cmd->add_option("--negatives", train_opts.negatives, "Negative samples per pair")
        ->capture_default_str();
    train_cmd->add_option("--neg-exponent", train_opts.neg_exponent,
                          "Negatives drawn proportional to degree^exponent")
        ->capture_default_str();
    train_cmd->add_option("--lr0", train_opts.lr0, "Initial learning rate")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train_opts.epochs, "Passes over the corpus")
        ->capture_default_str();
    train_cmd->add_option("--sub-loss-weight", train_opts.sub_loss_weight,
                          "Multiplier on the subgraph loss term")
        ->capture_default_str();

    EvaluateOpts eval_opts;
    auto* eval_cmd = app.add_subcommand("evaluate", "Rank links and report precision@k");
    eval_cmd->add_option("--graph-dir", eval_opts.graph_dir, "Directory written by build")
        ->required();
    eval_cmd->add_option("--embeddings", eval_opts.embeddings, "Embedding file")->required();
    eval_cmd->add_option("--out-dir", eval_opts.out_dir, "Output directory")
        ->capture_default_str();
    eval_cmd->add_option("--ks", eval_opts.ks, "Precision cutoffs")->capture_default_str();

    AnalyzeOpts analyze_opts;
    auto* analyze_cmd = app.add_subcommand("analyze", "Similarity stats across models");
    analyze_cmd->add_option("--graph-dir", analyze_opts.graph_dir, "Directory written by build")
        ->required();
    analyze_cmd
        ->add_option("--embeddings", analyze_opts.embeddings, "Repeatable name=path entries")
        ->required();
    analyze_cmd->add_option("--out-dir", analyze_opts.out_dir, "Output directory")
        ->capture_default_str();
    analyze_cmd->add_option("--min-shared", analyze_opts.min_shared,
                            "Common-neighbor threshold for hidden pairs")
        ->capture_default_str();
    analyze_cmd->add_option("--sample-size", analyze_opts.sample_size,
                            "Hidden-pair sample size")
        ->capture_default_str();
    analyze_cmd->add_option("--bins", analyze_opts.bins, "Histogram bins over [-1, 1]")
        ->capture_default_str();
    analyze_cmd->add_option("--threshold", analyze_opts.threshold,
                            "Native |delta mean| flag threshold")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(global, synth_opts);
        if (build_cmd->parsed()) return cmd_build(global, build_opts);
        if (train_cmd->parsed()) return cmd_train(global, train_opts);
        if (eval_cmd->parsed()) return cmd_evaluate(global, eval_opts);
        if (analyze_cmd->parsed()) return cmd_analyze(global, analyze_opts);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
