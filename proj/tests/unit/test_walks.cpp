#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "custom2vec/ingest.hpp"
#include "custom2vec/synthetic.hpp"
#include "custom2vec/walks.hpp"

using namespace c2v;

namespace {

TypedGraph path_graph_abc() {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    NodeId c = g.add_node(NodeKind::Trial, "c");
    g.add_edge(a, b, EdgeOrigin::Native);
    g.add_edge(b, c, EdgeOrigin::Native);
    return g;
}

bool is_edge_of(const TypedGraph& g, NodeId u, NodeId v) { return g.has_edge(u, v); }

} // namespace

TEST_CASE("walk params are validated") {
    WalkParams params;
    params.p = 0.0;
    CHECK_THROWS_AS(params.validate(), DataError);
    params = WalkParams{};
    params.q = -1.0;
    CHECK_THROWS_AS(params.validate(), DataError);
    params = WalkParams{};
    params.walk_length = 1;
    CHECK_THROWS_AS(params.validate(), DataError);
}

TEST_CASE("second-order bias matches the 1/p, 1, 1/q rule on a path graph") {
    TypedGraph g = path_graph_abc();
    // Walker sits at b having come from a; neighbors of b are {a, c}.
    // With p=1, q=0.5: weight(a) = 1/p = 1, weight(c) = 1/q = 2.
    TransitionTables tables = TransitionTables::build(g, 1.0, 0.5);
    REQUIRE(tables.biased());

    SplitMix64 rng(12345);
    const int trials = 100000;
    int to_a = 0;
    for (int i = 0; i < trials; ++i) {
        auto next = tables.sample_step(0, 1, rng);
        REQUIRE(next.has_value());
        if (*next == 0) ++to_a;
    }
    double freq = static_cast<double>(to_a) / trials;
    double expect = 1.0 / 3.0;
    double sigma = std::sqrt(expect * (1 - expect) / trials);
    CHECK(std::abs(freq - expect) < 3 * sigma);
}

TEST_CASE("p=q=1 gives uniform next-step distributions") {
    TypedGraph g;
    // 4-node star plus a chord so degrees differ
    NodeId hub = g.add_node(NodeKind::Trial, "hub");
    NodeId x = g.add_node(NodeKind::Trial, "x");
    NodeId y = g.add_node(NodeKind::Trial, "y");
    NodeId z = g.add_node(NodeKind::Trial, "z");
    g.add_edge(hub, x, EdgeOrigin::Native);
    g.add_edge(hub, y, EdgeOrigin::Native);
    g.add_edge(hub, z, EdgeOrigin::Native);
    g.add_edge(x, y, EdgeOrigin::Native);

    TransitionTables tables = TransitionTables::build(g, 1.0, 1.0);
    CHECK_FALSE(tables.biased());

    // Empirical first-step frequencies from the hub over 1e5 walks.
    WalkParams params;
    params.walk_length = 2;
    params.num_walks = 100000;
    params.seed = 7;
    WalkCorpus corpus = generate_walks(tables, params, WalkSource::Full);

    int counts[3] = {0, 0, 0};
    int from_hub = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto walk = corpus.walk(i);
        if (walk[0] != hub) continue;
        ++from_hub;
        if (walk[1] == x) ++counts[0];
        if (walk[1] == y) ++counts[1];
        if (walk[1] == z) ++counts[2];
    }
    REQUIRE(from_hub == 100000);
    double expect = 1.0 / 3.0;
    double sigma = std::sqrt(expect * (1 - expect) / from_hub);
    for (int c : counts)
        CHECK(std::abs(static_cast<double>(c) / from_hub - expect) < 3 * sigma);
}

TEST_CASE("triangle graph with p=q stays uniform") {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    NodeId c = g.add_node(NodeKind::Trial, "c");
    g.add_edge(a, b, EdgeOrigin::Native);
    g.add_edge(b, c, EdgeOrigin::Native);
    g.add_edge(a, c, EdgeOrigin::Native);

    // In a triangle every neighbor of cur is either the predecessor (1/p) or
    // adjacent to it (1); with p = q = 2 both weights are 1/2 and 1.
    TransitionTables tables = TransitionTables::build(g, 2.0, 2.0);
    SplitMix64 rng(5);
    const int trials = 100000;
    int back_to_a = 0;
    for (int i = 0; i < trials; ++i) {
        auto next = tables.sample_step(a, b, rng);
        if (*next == a) ++back_to_a;
    }
    // weight(a) = 1/2, weight(c) = 1 -> P(a) = 1/3
    double freq = static_cast<double>(back_to_a) / trials;
    double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / trials);
    CHECK(std::abs(freq - 1.0 / 3) < 3 * sigma);
}

TEST_CASE("forced walk alternates on a two-node graph") {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    g.add_edge(a, b, EdgeOrigin::Native);

    WalkParams params;
    params.walk_length = 4;
    params.num_walks = 3;
    WalkCorpus corpus = generate_walks(g, params, WalkSource::Full);
    REQUIRE(corpus.size() == 6);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto walk = corpus.walk(i);
        REQUIRE(walk.size() == 4);
        if (walk[0] == a) {
            CHECK(walk[1] == b);
            CHECK(walk[2] == a);
            CHECK(walk[3] == b);
        } else {
            CHECK(walk[1] == a);
            CHECK(walk[2] == b);
            CHECK(walk[3] == a);
        }
    }
}

TEST_CASE("walk counts, lengths, and dead-end handling") {
    TypedGraph g;
    for (int i = 0; i < 10; ++i) g.add_node(NodeKind::Trial, "t" + std::to_string(i));
    for (NodeId i = 0; i + 1 < 9; ++i) g.add_edge(i, i + 1, EdgeOrigin::Native);
    // node 9 stays isolated

    WalkParams params;
    params.num_walks = 100;
    params.walk_length = 16;
    WalkCorpus corpus = generate_walks(g, params, WalkSource::Full);
    CHECK(corpus.size() == 1000);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto walk = corpus.walk(i);
        if (walk[0] == 9)
            CHECK(walk.size() == 1); // isolated start terminates immediately
        else
            CHECK(walk.size() == 16);
    }
}

TEST_CASE("every consecutive walk pair is a graph edge") {
    SynthConfig config;
    config.n_trials = 60;
    config.seed = 11;
    SynthOutput synth = generate(config);
    TypedGraph g = build_graph(synth.records);

    WalkParams params;
    params.num_walks = 5;
    params.walk_length = 10;
    params.seed = 3;
    WalkCorpus corpus = generate_walks(g, params, WalkSource::Full);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        auto walk = corpus.walk(i);
        for (std::size_t j = 0; j + 1 < walk.size(); ++j)
            CHECK(is_edge_of(g, walk[j], walk[j + 1]));
    }
}

TEST_CASE("corpora are byte-identical across worker counts") {
    SynthConfig config;
    config.n_trials = 80;
    config.seed = 21;
    SynthOutput synth = generate(config);
    TypedGraph g = build_graph(synth.records);

    WalkParams params;
    params.num_walks = 4;
    params.walk_length = 8;
    params.seed = 5;
    WalkCorpus one = generate_walks(g, params, WalkSource::Full, 1);
    WalkCorpus four = generate_walks(g, params, WalkSource::Full, 4);
    CHECK(one == four);

    std::ostringstream dump_one, dump_four;
    one.dump(dump_one);
    four.dump(dump_four);
    CHECK(dump_one.str() == dump_four.str());

    WalkParams other = params;
    other.seed = 6;
    CHECK_FALSE(generate_walks(g, other, WalkSource::Full) == one);
}

TEST_CASE("joint corpus = full walks plus subgraph-confined walks") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 60; ++i)
        records.push_back(TrialRecord{"T" + std::to_string(i), {}, {}, "3", {}, {}});
    TypedGraph g = build_graph(records);
    CustomSet custom;
    for (int i = 0; i < 57; ++i) custom.trial_ids.push_back("T" + std::to_string(i));
    auto pairs = build_custom_subgraph(g, custom);
    SubgraphSplit split = split_subgraph(pairs, 0.8, 1);
    TypedGraph enriched = enrich_graph(g, split.train_edges);
    SubgraphView sub = enriched.subgraph_view(split.vertex_set, split.train_edges);

    WalkParams full_params;
    full_params.num_walks = 2;
    full_params.walk_length = 8;
    full_params.seed = 9;
    WalkParams sub_params = full_params;
    sub_params.num_walks = 10;

    WalkCorpus corpus = generate_joint_corpus(enriched, sub, full_params, sub_params);
    std::size_t full_walks = 0, sub_walks = 0;
    std::set<NodeId> sub_vertices(split.vertex_set.begin(), split.vertex_set.end());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (corpus.tag(i) == WalkSource::Full) {
            ++full_walks;
            CHECK(sub_walks == 0); // canonical order: Full block first
        } else {
            ++sub_walks;
            for (NodeId id : corpus.walk(i)) CHECK(sub_vertices.count(id) == 1);
            auto walk = corpus.walk(i);
            for (std::size_t j = 0; j + 1 < walk.size(); ++j)
                CHECK(sub.has_edge(walk[j], walk[j + 1]));
        }
    }
    CHECK(full_walks == enriched.node_count() * 2);
    CHECK(sub_walks == 57 * 10);

    SUBCASE("zero sub walks degenerate to the enriched corpus") {
        WalkParams none = sub_params;
        none.num_walks = 0;
        WalkCorpus joint = generate_joint_corpus(enriched, sub, full_params, none);
        WalkCorpus plain = generate_walks(enriched, full_params, WalkSource::Full);
        CHECK(joint == plain);
    }
}

TEST_CASE("corpus dump format round-trips") {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    g.add_edge(a, b, EdgeOrigin::Native);

    WalkParams params;
    params.walk_length = 3;
    params.num_walks = 1;
    params.seed = 2;
    WalkCorpus corpus = generate_walks(g, params, WalkSource::Full);
    corpus.push_walk(std::vector<NodeId>{b, a}, WalkSource::Sub);

    std::ostringstream out;
    corpus.dump(out);
    CHECK(out.str() == "F 0 1 0\nF 1 0 1\nS 1 0\n");

    std::istringstream in(out.str());
    WalkCorpus parsed = WalkCorpus::parse(in);
    CHECK(parsed == corpus);

    std::istringstream bad("X 1 2\n");
    CHECK_THROWS_AS(WalkCorpus::parse(bad), DataError);
}
