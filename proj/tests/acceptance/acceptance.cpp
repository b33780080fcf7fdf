// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance            runs every criterion
//   acceptance 1 2 ...    runs a subset ("matrix" = criteria 5-8 in one go)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "custom2vec/analysis.hpp"
#include "custom2vec/ingest.hpp"
#include "custom2vec/recommend.hpp"
#include "custom2vec/synthetic.hpp"
#include "custom2vec/trainer.hpp"
#include "custom2vec/walks.hpp"
#include "oracles.hpp"

using namespace c2v;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
    std::printf("%s - criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Criterion 1: the reference dataset arithmetic, exact integers.

void criterion_1() {
    TypedGraph g;
    std::vector<std::string> trial_ids;
    for (int i = 0; i < 200; ++i) {
        trial_ids.push_back("t" + std::to_string(i)); // canonical form
        g.add_node(NodeKind::Trial, trial_ids.back());
    }
    for (int j = 0; j < 400; ++j) g.add_node(NodeKind::Endpoint, "e" + std::to_string(j));
    std::size_t added = 0;
    for (NodeId t = 0; t < 200 && added < 75509; ++t)
        for (NodeId e = 200; e < 600 && added < 75509; ++e)
            if (g.add_edge(t, e, EdgeOrigin::Native)) ++added;
    bool ok = g.edge_count() == 75509;

    auto scenario = [&](std::size_t n, std::size_t want_edges, std::size_t want_train,
                        std::size_t want_test, std::size_t want_enriched) {
        CustomSet custom;
        for (std::size_t i = 0; i < n; ++i) custom.trial_ids.push_back(trial_ids[i]);
        auto pairs = build_custom_subgraph(g, custom);
        SubgraphSplit split = split_subgraph(pairs, 0.8, 20211207);
        TypedGraph enriched = enrich_graph(g, split.train_edges);
        ok = ok && pairs.size() == want_edges;
        ok = ok && split.train_edges.size() == want_train;
        ok = ok && split.test_edges.size() == want_test;
        ok = ok && enriched.edge_count() == want_enriched;
    };
    scenario(57, 1596, 1276, 320, 76785);
    scenario(136, 9180, 7344, 1836, 82853);

    report(1, ok,
           "57 ids -> 1596 = 1276 + 320 edges, enriched 76785; "
           "136 ids -> 9180 = 7344 + 1836, enriched 82853");
}

// ---------------------------------------------------------------------------
// Criterion 2: analytic SGNS gradients vs central finite differences.

void criterion_2() {
    auto start = std::chrono::steady_clock::now();
    SplitMix64 rng(31415926);
    bool ok = true;
    double worst = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
        std::size_t dim = 1 + uniform_index(rng, 5);
        std::size_t rows = 4 + uniform_index(rng, 5);
        EmbeddingTable table(rows, dim);
        for (NodeId r = 0; r < rows; ++r)
            for (double& v : table.row(r)) v = uniform_real(rng) * 2.0 - 1.0;

        std::vector<NodeId> negs;
        std::size_t k = 1 + uniform_index(rng, 4);
        for (std::size_t i = 0; i < k; ++i)
            negs.push_back(2 + static_cast<NodeId>(uniform_index(rng, rows - 2)));

        auto grads = sgns_pair_gradients(table, 0, 1, negs);
        for (const auto& [row, grad] : grads) {
            auto fd = oracles::fd_row_gradient(table, row, 0, 1, negs, 1e-4);
            double err = oracles::relative_row_error(grad, fd);
            worst = std::max(worst, err);
            ok = ok && err < 1e-4;
        }
    }
    double elapsed = seconds_since(start);
    ok = ok && elapsed < 5.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "100 random instances, worst relative error %.2e (< 1e-4), %.2fs (< 5s)",
                  worst, elapsed);
    report(2, ok, buf);
}

// ---------------------------------------------------------------------------
// Criterion 3: walk validity plus 1-vs-8-worker determinism.

void criterion_3() {
    auto start = std::chrono::steady_clock::now();
    SynthConfig config; // the default desk-scale scenario
    config.seed = 1;
    SynthOutput synth = generate(config);
    TypedGraph graph = build_graph(synth.records);

    WalkParams params;
    params.num_walks = 100;
    params.walk_length = 16;
    params.seed = 1;

    WalkCorpus one = generate_walks(graph, params, WalkSource::Full, 1);
    WalkCorpus eight = generate_walks(graph, params, WalkSource::Full, 8);

    bool identical = one == eight;
    bool valid = true;
    for (std::size_t i = 0; i < one.size() && valid; ++i) {
        auto walk = one.walk(i);
        for (std::size_t j = 0; j + 1 < walk.size(); ++j)
            if (!graph.has_edge(walk[j], walk[j + 1])) {
                valid = false;
                break;
            }
    }
    double elapsed = seconds_since(start);
    bool ok = identical && valid && elapsed < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu walks edge-valid, byte-identical at 1 and 8 workers, %.2fs (< 30s)",
                  one.size(), elapsed);
    report(3, ok, buf);
}

// ---------------------------------------------------------------------------
// Criterion 4: custom2vec with r_sub = 0 == node2vec-enriched, bitwise.

void criterion_4() {
    SynthConfig config;
    config.seed = 2;
    SynthOutput synth = generate(config);
    TypedGraph graph = build_graph(synth.records);
    auto pairs = build_custom_subgraph(graph, synth.custom);
    SubgraphSplit split = split_subgraph(pairs, 0.8, 2);
    TypedGraph enriched = enrich_graph(graph, split.train_edges);
    SubgraphView sub = enriched.subgraph_view(split.vertex_set, split.train_edges);

    WalkParams full_params;
    full_params.num_walks = 20; // smaller corpus, same code paths
    full_params.walk_length = 16;
    full_params.seed = 2;
    WalkParams no_sub = full_params;
    no_sub.num_walks = 0;

    TrainConfig cfg;
    cfg.dim = 20;
    cfg.seed = 2;
    cfg.threads = 1;

    WalkCorpus joint = generate_joint_corpus(enriched, sub, full_params, no_sub);
    WalkCorpus plain = generate_walks(enriched, full_params, WalkSource::Full);
    EmbeddingTable custom_path = train(joint, enriched, &sub, cfg);
    EmbeddingTable enriched_path = train(plain, enriched, nullptr, cfg);

    bool ok = joint == plain && custom_path == enriched_path;
    report(4, ok, "r_sub = 0 training output is bitwise identical to node2vec-enriched");
}

// ---------------------------------------------------------------------------
// Criteria 5-8 share one experiment matrix.

struct ModelResult {
    double mean_custom_test = 0.0;
    double mean_hidden = 0.0;
    double mean_direct = 0.0;
    PrecisionSeries precision;
};

double precision_at(const ModelResult& r, std::size_t k) {
    for (std::size_t i = 0; i < r.precision.ks.size(); ++i)
        if (r.precision.ks[i] == k) return r.precision.precisions[i];
    throw InvariantError("missing precision cutoff");
}

const std::vector<std::string> kAllModels = {"node2vec-raw", "node2vec-enriched",
                                             "custom2vec-100", "custom2vec-500",
                                             "custom2vec-1000"};

std::map<std::string, ModelResult> run_scenario(std::uint64_t seed, std::size_t cluster_size,
                                                const std::vector<std::string>& model_names) {
    SynthConfig config; // 500 trials, strength 0.6
    config.planted_cluster_size = cluster_size;
    config.seed = seed;
    SynthOutput synth = generate(config);
    TypedGraph graph = build_graph(synth.records);
    auto pairs = build_custom_subgraph(graph, synth.custom);
    SubgraphSplit split = split_subgraph(pairs, 0.8, seed);
    TypedGraph enriched = enrich_graph(graph, split.train_edges);
    SubgraphView sub = enriched.subgraph_view(split.vertex_set, split.train_edges);

    PairPopulation custom_test = custom_pairs(PopulationKind::CustomTest, split.test_edges);
    PairPopulation hidden =
        native_hidden_pairs(graph, 2, 10000, seed, split.vertex_set);
    PairPopulation direct = native_direct_pairs(graph, NodeKind::Endpoint);

    PairSet exclude(split.train_edges.begin(), split.train_edges.end());
    PairSet test(split.test_edges.begin(), split.test_edges.end());
    const std::vector<std::size_t> ks = {10, 50, 100, 1000};

    WalkParams full_params;
    full_params.num_walks = 100;
    full_params.walk_length = 16;
    full_params.seed = seed;

    TrainConfig cfg;
    cfg.dim = 20;
    cfg.seed = seed;
    cfg.threads = 1;

    std::map<std::string, ModelResult> results;
    for (const std::string& name : model_names) {
        WalkCorpus corpus;
        EmbeddingTable table;
        if (name == "node2vec-raw") {
            corpus = generate_walks(graph, full_params, WalkSource::Full);
            table = train(corpus, graph, nullptr, cfg);
        } else {
            WalkParams sub_params = full_params;
            sub_params.num_walks = 0;
            if (name.rfind("custom2vec-", 0) == 0)
                sub_params.num_walks =
                    static_cast<std::uint32_t>(std::stoul(name.substr(11)));
            corpus = generate_joint_corpus(enriched, sub, full_params, sub_params);
            table = train(corpus, enriched, &sub, cfg);
        }

        ModelResult r;
        r.mean_custom_test = population_stats(table, custom_test).mean;
        r.mean_hidden = population_stats(table, hidden).mean;
        r.mean_direct = population_stats(table, direct).mean;
        auto ranked = rank_all_trial_pairs(table, enriched, exclude, 1000);
        r.precision = precision_at_k(ranked, test, ks);
        results[name] = r;
    }
    return results;
}

void criteria_5_to_8() {
    const std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};

    std::map<std::string, std::vector<ModelResult>> runs; // model -> per-seed results
    for (std::uint64_t seed : seeds) {
        auto scenario = run_scenario(seed, 20, kAllModels);
        for (const auto& [name, result] : scenario) runs[name].push_back(result);
    }

    auto avg = [&](const std::string& model, auto field) {
        double total = 0.0;
        for (const ModelResult& r : runs.at(model)) total += field(r);
        return total / static_cast<double>(runs.at(model).size());
    };
    auto avg_ct = [&](const std::string& m) {
        return avg(m, [](const ModelResult& r) { return r.mean_custom_test; });
    };
    auto avg_p = [&](const std::string& m, std::size_t k) {
        return avg(m, [k](const ModelResult& r) { return precision_at(r, k); });
    };

    // Criterion 5: separation ordering on CustomTest mean cosine.
    {
        double c1000 = avg_ct("custom2vec-1000");
        double c100 = avg_ct("custom2vec-100");
        double enr = avg_ct("node2vec-enriched");
        double raw = avg_ct("node2vec-raw");
        bool ok = c1000 > c100 && c100 > enr && enr > raw && (c1000 - raw) >= 0.2;
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "CustomTest mean cosine c2v-1000 %.3f > c2v-100 %.3f > enriched %.3f > "
                      "raw %.3f, gap %.3f (>= 0.2), 5 seeds",
                      c1000, c100, enr, raw, c1000 - raw);
        report(5, ok, buf);
    }

    // Criterion 6: native populations preserved.
    {
        double d_hidden = std::abs(avg("custom2vec-1000",
                                       [](const ModelResult& r) { return r.mean_hidden; }) -
                                   avg("node2vec-raw",
                                       [](const ModelResult& r) { return r.mean_hidden; }));
        double d_direct = std::abs(avg("custom2vec-1000",
                                       [](const ModelResult& r) { return r.mean_direct; }) -
                                   avg("node2vec-raw",
                                       [](const ModelResult& r) { return r.mean_direct; }));
        bool ok = d_hidden <= 0.05 && d_direct <= 0.05;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "|delta mean| vs raw: hidden trial-trial %.4f, trial-endpoint %.4f "
                      "(both <= 0.05)",
                      d_hidden, d_direct);
        report(6, ok, buf);
    }

    // Criterion 7: link-prediction ordering and cumulative-hit monotonicity.
    {
        double p1000 = avg_p("custom2vec-1000", 100);
        double p500 = avg_p("custom2vec-500", 100);
        double p100 = avg_p("custom2vec-100", 100);
        double penr = avg_p("node2vec-enriched", 100);
        double praw = avg_p("node2vec-raw", 100);
        bool chain = p1000 >= p500 && p500 >= p100 && p100 >= penr && penr >= praw;

        bool strict_every_seed = true;
        for (std::size_t s = 0; s < seeds.size(); ++s)
            strict_every_seed =
                strict_every_seed && precision_at(runs.at("custom2vec-1000")[s], 100) >
                                         precision_at(runs.at("node2vec-raw")[s], 100);

        bool monotone = true;
        for (const auto& [name, results] : runs)
            for (const ModelResult& r : results) {
                double prev = 0.0;
                for (std::size_t i = 0; i < r.precision.ks.size(); ++i) {
                    double hits = r.precision.precisions[i] *
                                  static_cast<double>(r.precision.ks[i]);
                    if (hits + 1e-9 < prev) monotone = false;
                    prev = hits;
                }
            }

        bool ok = chain && strict_every_seed && monotone;
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "P@100 %.3f >= %.3f >= %.3f >= %.3f >= %.3f, c2v-1000 > raw in every "
                      "seed: %s, k*P@k non-decreasing: %s",
                      p1000, p500, p100, penr, praw, strict_every_seed ? "yes" : "no",
                      monotone ? "yes" : "no");
        report(7, ok, buf);
    }

    // Criterion 8: doubling the planted cluster must not hurt P@1000.
    {
        std::vector<std::string> just_c1000 = {"custom2vec-1000"};
        double total40 = 0.0;
        for (std::uint64_t seed : seeds) {
            auto scenario = run_scenario(seed, 40, just_c1000);
            total40 += precision_at(scenario.at("custom2vec-1000"), 1000);
        }
        double p40 = total40 / static_cast<double>(seeds.size());
        double p20 = avg_p("custom2vec-1000", 1000);
        bool ok = p40 >= p20;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "c2v-1000 P@1000: cluster 40 %.3f >= cluster 20 %.3f, 5 seeds", p40, p20);
        report(8, ok, buf);
    }
}

// ---------------------------------------------------------------------------
// Criterion 9: the ~38k-node scale run.

void criterion_9() {
    auto start = std::chrono::steady_clock::now();
    SynthConfig config = scale_config(1);
    SynthOutput synth = generate(config);
    TypedGraph graph = build_graph(synth.records);

    WalkParams params;
    params.num_walks = 100;
    params.walk_length = 16;
    params.seed = 1;
    WalkCorpus corpus = generate_walks(graph, params, WalkSource::Full, 8);
    double walk_secs = seconds_since(start);

    TrainConfig cfg;
    cfg.dim = 20;
    cfg.seed = 1;
    cfg.threads = 8;
    EmbeddingTable table = train(corpus, graph, nullptr, cfg);
    double train_secs = seconds_since(start) - walk_secs;

    auto ranked = rank_all_trial_pairs(table, graph, {}, 1000, 8);
    double elapsed = seconds_since(start);

    bool ok = graph.node_count() >= 35000 && elapsed < 1800.0 && ranked.size() == 1000;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "%zu nodes, %zu edges; %zu walks in %.0fs, trained in %.0fs, "
                  "top-1000 scored; total %.0fs (< 1800s)",
                  graph.node_count(), graph.edge_count(), corpus.size(), walk_secs, train_secs,
                  elapsed);
    report(9, ok, buf);
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> which(argv + 1, argv + argc);
    auto wants = [&](const std::string& name) {
        if (which.empty()) return true;
        for (const std::string& w : which)
            if (w == name) return true;
        return false;
    };

    if (wants("1")) criterion_1();
    if (wants("2")) criterion_2();
    if (wants("3")) criterion_3();
    if (wants("4")) criterion_4();
    if (wants("matrix") || wants("5") || wants("6") || wants("7") || wants("8"))
        criteria_5_to_8();
    if (wants("9")) criterion_9();

    if (g_failures > 0) {
        std::printf("%d criterion check(s) failed\n", g_failures);
        return 1;
    }
    return 0;
}
