#include <doctest.h>

#include <sstream>

#include "custom2vec/graph.hpp"
#include "custom2vec/graph_io.hpp"
#include "custom2vec/rng.hpp"

using namespace c2v;

TEST_CASE("add_node assigns dense ids and is idempotent") {
    TypedGraph g;
    CHECK(g.add_node(NodeKind::Trial, "NCT04716933") == 0);
    CHECK(g.add_node(NodeKind::Phase, "phase 3") == 1);
    CHECK(g.add_node(NodeKind::Phase, "phase 3") == 1);
    CHECK(g.node_count() == 2);
    CHECK(g.node(1).label == "phase 3");
    // same label under a different kind is a distinct node
    CHECK(g.add_node(NodeKind::Endpoint, "phase 3") == 2);
    CHECK_THROWS_AS(g.add_node(NodeKind::Trial, ""), DataError);
}

TEST_CASE("add_edge dedupes the undirected pair and rejects self-loops") {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    CHECK(g.add_edge(a, b, EdgeOrigin::Native));
    CHECK_FALSE(g.add_edge(b, a, EdgeOrigin::Custom)); // duplicate, origin unchanged
    CHECK(g.edge_origin(a, b) == EdgeOrigin::Native);
    CHECK(g.edge_count() == 1);
    CHECK_THROWS_AS(g.add_edge(a, a, EdgeOrigin::Native), DataError);
    CHECK_THROWS_AS(g.add_edge(a, 99, EdgeOrigin::Native), DataError);
}

TEST_CASE("degree basics") {
    TypedGraph g;
    NodeId isolated = g.add_node(NodeKind::Trial, "alone");
    CHECK(g.degree(isolated) == 0);

    SUBCASE("triangle") {
        NodeId x = g.add_node(NodeKind::Trial, "x");
        NodeId y = g.add_node(NodeKind::Trial, "y");
        NodeId z = g.add_node(NodeKind::Trial, "z");
        g.add_edge(x, y, EdgeOrigin::Native);
        g.add_edge(y, z, EdgeOrigin::Native);
        g.add_edge(z, x, EdgeOrigin::Native);
        CHECK(g.degree(x) == 2);
        CHECK(g.degree(y) == 2);
        CHECK(g.degree(z) == 2);
    }
    SUBCASE("star with 5 leaves") {
        NodeId hub = g.add_node(NodeKind::Endpoint, "hub");
        for (int i = 0; i < 5; ++i) {
            NodeId leaf = g.add_node(NodeKind::Trial, "leaf" + std::to_string(i));
            g.add_edge(hub, leaf, EdgeOrigin::Native);
        }
        CHECK(g.degree(hub) == 5);
    }
    CHECK_THROWS_AS(g.degree(1000), DataError);
}

TEST_CASE("adjacency symmetry and degree sum hold over random insertions") {
    SplitMix64 rng(20240517);
    for (int round = 0; round < 30; ++round) {
        TypedGraph g;
        std::size_t n = 2 + uniform_index(rng, 30);
        for (std::size_t i = 0; i < n; ++i)
            g.add_node(NodeKind::Trial, "t" + std::to_string(i));
        std::size_t attempts = uniform_index(rng, 120);
        for (std::size_t k = 0; k < attempts; ++k) {
            auto u = static_cast<NodeId>(uniform_index(rng, n));
            auto v = static_cast<NodeId>(uniform_index(rng, n));
            if (u == v) continue;
            g.add_edge(u, v, EdgeOrigin::Native);
        }
        std::size_t degree_sum = 0;
        for (NodeId u = 0; u < g.node_count(); ++u) {
            degree_sum += g.degree(u);
            auto nb = g.neighbors(u);
            CHECK(std::is_sorted(nb.begin(), nb.end()));
            for (NodeId v : nb) {
                auto back = g.neighbors(v);
                CHECK(std::find(back.begin(), back.end(), u) != back.end());
            }
        }
        CHECK(degree_sum == 2 * g.edge_count());
    }
}

TEST_CASE("subgraph_view restricts vertices and edges") {
    TypedGraph g;
    NodeId a = g.add_node(NodeKind::Trial, "a");
    NodeId b = g.add_node(NodeKind::Trial, "b");
    NodeId c = g.add_node(NodeKind::Trial, "c");
    g.add_edge(a, b, EdgeOrigin::Native);
    g.add_edge(b, c, EdgeOrigin::Native);

    NodeId verts[] = {a, b};
    NodePair edges[] = {NodePair(a, b)};
    SubgraphView view = g.subgraph_view(verts, edges);
    CHECK(view.node_count() == 2);
    CHECK(view.edge_count() == 1);
    CHECK(view.degree(a) == 1);
    CHECK(view.has_edge(a, b));
    CHECK_FALSE(view.contains(c));
    CHECK_THROWS_AS(view.degree(c), DataError);

    SUBCASE("edge endpoint outside the vertex set is rejected") {
        NodePair bad[] = {NodePair(b, c)};
        CHECK_THROWS_AS(g.subgraph_view(verts, bad), DataError);
    }
    SUBCASE("empty edge set leaves all degrees 0") {
        SubgraphView empty = g.subgraph_view(verts, {});
        CHECK(empty.node_count() == 2);
        CHECK(empty.edge_count() == 0);
        CHECK(empty.degree(a) == 0);
        CHECK(empty.degree(b) == 0);
    }
    SUBCASE("view degree never exceeds full degree") {
        for (NodeId u : view.vertex_ids()) CHECK(view.degree(u) <= g.degree(u));
    }
}

TEST_CASE("graph round-trips through nodes.tsv / edges.tsv") {
    TypedGraph g;
    NodeId t = g.add_node(NodeKind::Trial, "NCT1");
    NodeId e = g.add_node(NodeKind::Endpoint, "overall survival");
    NodeId s = g.add_node(NodeKind::Sponsor, "acme");
    g.add_edge(t, e, EdgeOrigin::Native);
    g.add_edge(t, s, EdgeOrigin::Custom);

    std::ostringstream nodes_out, edges_out;
    save_nodes(nodes_out, g);
    save_edges(edges_out, g);

    std::istringstream nodes_in(nodes_out.str()), edges_in(edges_out.str());
    TypedGraph loaded = load_graph(nodes_in, edges_in);
    CHECK(loaded.node_count() == g.node_count());
    CHECK(loaded.edge_count() == g.edge_count());
    CHECK(loaded.node(e).label == "overall survival");
    CHECK(loaded.edge_origin(t, s) == EdgeOrigin::Custom);

    std::ostringstream nodes_again, edges_again;
    save_nodes(nodes_again, loaded);
    save_edges(edges_again, loaded);
    CHECK(nodes_again.str() == nodes_out.str());
    CHECK(edges_again.str() == edges_out.str());
}

TEST_CASE("kind and origin names round-trip") {
    for (std::size_t i = 0; i < kNodeKindCount; ++i) {
        auto kind = static_cast<NodeKind>(i);
        CHECK(node_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(node_kind_from_string("protocol"), DataError);
    CHECK(edge_origin_from_string("native") == EdgeOrigin::Native);
    CHECK(edge_origin_from_string("custom") == EdgeOrigin::Custom);
    CHECK_THROWS_AS(edge_origin_from_string("weird"), DataError);
}
