#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperspin/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

using namespace hyperspin;

namespace {

// Edge lines of a dump, without the header (labels legitimately differ).
std::vector<std::string> edge_lines(const Graph& g) {
    std::istringstream in(dump_edge_list(g));
    std::string line;
    std::vector<std::string> out;
    std::getline(in, line);  // header
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

Graph hand_path_with_boundary(std::vector<VertexId> boundary) {
    Graph g;
    g.adjacency = {{{1, 1}}, {{0, 1}, {2, 1}}, {{1, 1}}};
    g.ring = {0, 1, 2};
    g.boundary = std::move(boundary);
    g.label = "hand_path";
    return g;
}

} // namespace

TEST_CASE("triangulation: small radii") {
    Graph g0 = build_triangulation(7, 0);
    CHECK(g0.vertex_count() == 1);
    CHECK(g0.edge_count() == 0);
    CHECK(g0.boundary == std::vector<VertexId>{0});
    CHECK(g0.label == "triangulation_q7_r0");

    Graph g1 = build_triangulation(7, 1);
    CHECK(g1.vertex_count() == 8);
    CHECK(g1.edge_count() == 14);
    CHECK(g1.degree(0) == 7);
    CHECK(g1.boundary.size() == 7);
    CHECK(g1.max_ring() == 1);

    Graph g2 = build_triangulation(7, 2);
    CHECK(g2.vertex_count() == 29);
    CHECK(g2.edge_count() == 63);
    std::vector<int> spheres = sphere_sizes(g2, 0);
    CHECK(spheres == std::vector<int>{1, 7, 21});
}

TEST_CASE("triangulation: ring recurrence a(k+1) = 3 a(k) - a(k-1) for q=7") {
    Graph g = build_triangulation(7, 6);
    std::vector<int> spheres = sphere_sizes(g, 0);
    REQUIRE(spheres.size() == 7);
    CHECK(spheres[0] == 1);
    CHECK(spheres[1] == 7);
    CHECK(spheres[2] == 21);
    for (std::size_t k = 2; k + 1 < spheres.size(); ++k)
        CHECK(spheres[k + 1] == 3 * spheres[k] - spheres[k - 1]);
    CHECK(spheres == std::vector<int>{1, 7, 21, 56, 147, 385, 1008});
}

TEST_CASE("triangulation: interior degree is exactly q") {
    for (int q : {7, 8, 9}) {
        for (int r : {1, 2, 4, 6}) {
            Graph g = build_triangulation(q, r);
            INFO("q=" << q << " r=" << r);
            for (VertexId v = 0; v < g.vertex_count(); ++v) {
                if (g.ring[v] < r) {
                    CHECK(g.degree(v) == std::uint32_t(q));
                } else {
                    CHECK(g.is_boundary(v));
                }
            }
        }
    }
}

TEST_CASE("triangulation: ring labels equal BFS distances from the root") {
    for (int r : {0, 1, 3, 5}) {
        Graph g = build_triangulation(7, r);
        std::vector<int> dist = bfs_distances(g, 0);
        for (VertexId v = 0; v < g.vertex_count(); ++v)
            CHECK(g.ring[v] == dist[v]);
    }
}

TEST_CASE("triangulation: boundary ring forms a cycle") {
    Graph g = build_triangulation(7, 3);
    // Within the outermost ring every vertex has exactly two same-ring
    // neighbours.
    for (VertexId v : g.boundary) {
        int same = 0;
        for (const Edge& e : g.adjacency[v])
            if (g.ring[e.to] == g.ring[v]) same += int(e.mult);
        CHECK(same == 2);
    }
}

TEST_CASE("exponential sphere growth on the hyperbolic examples") {
    Graph t = build_triangulation(7, 6);
    std::vector<int> st = sphere_sizes(t, 0);
    for (int k = 1; k <= 5; ++k)
        CHECK(double(st[k + 1]) / double(st[k]) >= 1.5);

    Graph r = build_ringed_tree(6);
    std::vector<int> sr = sphere_sizes(r, 0);
    REQUIRE(sr.size() == 7);
    for (int k = 1; k <= 5; ++k)
        CHECK(double(sr[k + 1]) / double(sr[k]) >= 1.5);
}

TEST_CASE("ringed tree: small depths") {
    Graph g0 = build_ringed_tree(0);
    CHECK(g0.vertex_count() == 1);
    CHECK(g0.edge_count() == 0);

    Graph g1 = build_ringed_tree(1);
    CHECK(g1.vertex_count() == 3);
    CHECK(g1.edge_count() == 3);

    Graph g3 = build_ringed_tree(3);
    CHECK(g3.vertex_count() == 15);
    CHECK(g3.edge_count() == 25);
    CHECK(sphere_sizes(g3, 0) == std::vector<int>{1, 2, 4, 8});
    CHECK(g3.label == "ringed_tree_d3");
    CHECK(g3.boundary.size() == 8);
}

TEST_CASE("ringed tree: cycle closure adds one edge per generation of size > 2") {
    Graph p = build_ringed_tree(3, RingClosure::path);
    Graph c = build_ringed_tree(3, RingClosure::cycle);
    CHECK(c.edge_count() == p.edge_count() + 2);  // generations of size 4, 8
    CHECK(c.label == "ringed_tree_d3_cycle");
}

TEST_CASE("reference graphs") {
    Graph p = build_path(3);
    CHECK(p.vertex_count() == 4);
    CHECK(p.edge_count() == 3);
    CHECK(p.label == "path_3");
    CHECK(p.boundary == std::vector<VertexId>{3});

    Graph c = build_cycle(4);
    CHECK(c.vertex_count() == 4);
    CHECK(c.edge_count() == 4);
    CHECK(c.max_ring() == 2);
    CHECK(sphere_sizes(c, 0) == std::vector<int>{1, 2, 1});

    Graph k = build_complete(4);
    CHECK(k.edge_count() == 6);
    for (VertexId v = 0; v < 4; ++v) CHECK(k.degree(v) == 3);

    Graph t = build_tree(2, 3);
    CHECK(t.vertex_count() == 15);
    CHECK(t.edge_count() == 14);
    CHECK(t.label == "tree_b2_d3");

    Graph g = build_grid(3);
    CHECK(g.vertex_count() == 9);
    CHECK(g.edge_count() == 12);
    CHECK(g.max_ring() == 4);
}

TEST_CASE("reference dispatcher") {
    Graph p = build_reference("path", {3});
    CHECK(dump_edge_list(p) == dump_edge_list(build_path(3)));
    Graph t = build_reference("tree", {2, 3});
    CHECK(dump_edge_list(t) == dump_edge_list(build_tree(2, 3)));
    CHECK_THROWS_AS((void)build_reference("voronoi", {}), std::invalid_argument);
    CHECK_THROWS_AS((void)build_reference("tree", {2}), std::invalid_argument);
}

TEST_CASE("constructor argument validation") {
    CHECK_THROWS_AS((void)build_triangulation(6, 2), std::invalid_argument);
    CHECK_THROWS_AS((void)build_triangulation(7, -1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_cycle(2), std::invalid_argument);
    CHECK_THROWS_AS((void)build_complete(1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_grid(0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_tree(0, 2), std::invalid_argument);
}

TEST_CASE("bfs distances") {
    Graph p = build_path(3);
    CHECK(bfs_distances(p, 0) == std::vector<int>{0, 1, 2, 3});
    Graph c = build_cycle(4);
    CHECK(bfs_distances(c, 0) == std::vector<int>{0, 1, 2, 1});
    Graph t = build_triangulation(7, 2);
    std::vector<int> d = bfs_distances(t, 0);
    for (VertexId v = 0; v < t.vertex_count(); ++v) CHECK(d[v] == t.ring[v]);
    CHECK_THROWS_AS((void)bfs_distances(p, 9), std::invalid_argument);

    Graph disc;
    disc.adjacency = {{{1, 1}}, {{0, 1}}, {}};
    disc.ring = {0, 1, 0};
    disc.label = "disc";
    CHECK(bfs_distances(disc, 0) == std::vector<int>{0, 1, -1});
}

TEST_CASE("sphere sizes from an endpoint of a path") {
    Graph p = build_path(3);
    CHECK(sphere_sizes(p, 3) == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("ball: path around its middle") {
    Graph p = build_path(3);
    Graph b = ball(p, 1, 1);
    CHECK(b.vertex_count() == 3);
    CHECK(b.edge_count() == 2);
    // Center becomes vertex 0; the two old neighbours follow in id order.
    CHECK(b.ring == std::vector<int>{0, 1, 1});
    CHECK(b.boundary == std::vector<VertexId>{1, 2});
    CHECK(b.label == "path_3_ball1");
}

TEST_CASE("ball: radius zero") {
    Graph g = build_triangulation(7, 2);
    Graph b = ball(g, 5, 0);
    CHECK(b.vertex_count() == 1);
    CHECK(b.edge_count() == 0);
    CHECK(b.boundary == std::vector<VertexId>{0});
    CHECK_THROWS_AS((void)ball(g, 0, -1), std::invalid_argument);
}

TEST_CASE("ball of the tiling equals the smaller tiling") {
    Graph big = build_triangulation(7, 5);
    Graph b = ball(big, 0, 2);
    Graph small = build_triangulation(7, 2);
    CHECK(edge_lines(b) == edge_lines(small));
    CHECK(b.ring == small.ring);
    CHECK(b.boundary == small.boundary);
}

TEST_CASE("contract: two-vertex boundary of a path") {
    Graph g = hand_path_with_boundary({0, 2});
    Graph w = contract_boundary(g);
    CHECK(w.vertex_count() == 2);
    CHECK(w.edge_count() == 1);
    CHECK(w.total_multiplicity() == 2);  // both edges land on the same pair
    CHECK(contracted_hub(g) == 1);
    CHECK(contracted_id(g, 1) == 0);
    CHECK(contracted_id(g, 0) == 1);
    CHECK(contracted_id(g, 2) == 1);
}

TEST_CASE("contract: singleton boundary leaves the path intact") {
    Graph p = build_path(2);  // boundary = {2}
    Graph w = contract_boundary(p);
    CHECK(w.vertex_count() == 3);
    CHECK(edge_lines(w) == edge_lines(p));
    CHECK(w.label == "path_2_wired");
}

TEST_CASE("contract: tiling boundary becomes a hub") {
    Graph g = build_triangulation(7, 2);
    Graph w = contract_boundary(g);
    CHECK(w.vertex_count() == 9);           // 8 interior + hub
    CHECK(contracted_hub(g) == 8);
    // Interior-interior and interior-boundary multiplicity is conserved;
    // boundary-boundary edges (the outer 21-cycle) are dropped.
    std::uint64_t kept = 0;
    for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (const Edge& e : g.adjacency[u])
            if (u < e.to && !(g.is_boundary(u) && g.is_boundary(e.to)))
                kept += e.mult;
    CHECK(w.total_multiplicity() == kept);
    CHECK(kept == 42);
    CHECK(w.degree(8) == 28);
    // Hub sits one step past ring 1.
    CHECK(w.ring[8] == 2);
    CHECK(w.boundary == std::vector<VertexId>{8});
    // Interior ids shift below the removed range and keep their order.
    for (VertexId v = 0; v < 8; ++v) CHECK(contracted_id(g, v) == v);
}

TEST_CASE("dump edge list") {
    Graph p = build_path(2);
    CHECK(dump_edge_list(p) == "vertices=3 label=path_2\n0 1 1\n1 2 1\n");

    Graph g = hand_path_with_boundary({0, 2});
    Graph w = contract_boundary(g);
    CHECK(dump_edge_list(w) == "vertices=2 label=hand_path_wired\n0 1 2\n");
}

TEST_CASE("adjacency symmetry and no self-loops across the corpus") {
    std::vector<Graph> corpus;
    corpus.push_back(build_triangulation(7, 3));
    corpus.push_back(build_triangulation(8, 2));
    corpus.push_back(build_ringed_tree(4, RingClosure::cycle));
    corpus.push_back(build_grid(4));
    corpus.push_back(contract_boundary(build_triangulation(7, 3)));
    corpus.push_back(ball(build_triangulation(7, 4), 3, 2));
    for (const Graph& g : corpus) {
        INFO(g.label);
        for (VertexId u = 0; u < g.vertex_count(); ++u) {
            for (const Edge& e : g.adjacency[u]) {
                CHECK(e.to != u);
                CHECK(e.to < g.vertex_count());
                std::uint32_t back = 0;
                for (const Edge& f : g.adjacency[e.to])
                    if (f.to == u) back += f.mult;
                CHECK(back == e.mult);
            }
        }
        // Boundary is sorted and deduplicated.
        CHECK(std::is_sorted(g.boundary.begin(), g.boundary.end()));
        CHECK(std::adjacent_find(g.boundary.begin(), g.boundary.end()) ==
              g.boundary.end());
    }
}
