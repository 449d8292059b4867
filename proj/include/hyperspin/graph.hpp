#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperspin {

using VertexId = std::uint32_t;

// Free: the graph as built. Wired: all boundary vertices merged into one
// (see contract_boundary below).
enum class BoundaryCondition { free_bc, wired };

inline const char* bc_name(BoundaryCondition bc) {
    return bc == BoundaryCondition::free_bc ? "free" : "wired";
}

struct Edge {
    VertexId to;
    std::uint32_t mult;
};

// Immutable undirected multigraph with per-vertex ring labels (graph distance
// from vertex 0) and a designated boundary set (the outermost ring). Adjacency
// is symmetric with matching multiplicities; self-loops never occur.
struct Graph {
    std::vector<std::vector<Edge>> adjacency;
    std::vector<int> ring;
    std::vector<VertexId> boundary;  // sorted ascending
    std::string label;

    std::size_t vertex_count() const { return adjacency.size(); }
    int max_ring() const;
    // Number of distinct vertex pairs joined by at least one edge.
    std::size_t edge_count() const;
    // Sum of multiplicities over distinct edges.
    std::uint64_t total_multiplicity() const;
    std::uint32_t degree(VertexId v) const;  // multiplicity-weighted
    bool is_boundary(VertexId v) const;
};

// Ball of radius `radius` of the {3,q} tiling, built layer by layer: a root,
// then rings closed into cycles, every face between consecutive rings a
// triangle, every vertex with ring < radius of degree exactly q. Requires
// q >= 7 (hyperbolic parameters) and radius >= 0.
Graph build_triangulation(int q, int radius);

enum class RingClosure { path, cycle };

// Binary tree of the given depth rooted at vertex 0, with the vertices of
// each generation also joined left-to-right (a path per generation, or a
// cycle when `closure` says so).
Graph build_ringed_tree(int depth, RingClosure closure = RingClosure::path);

Graph build_path(int length);          // `length` edges, length+1 vertices
Graph build_cycle(int n);              // n >= 3
Graph build_tree(int branching, int depth);
Graph build_grid(int side);            // side x side patch, not periodic
Graph build_complete(int n);

// Dispatcher over the reference kinds above; `params` are the size
// parameters in declaration order (tree takes branching then depth).
// Unknown kinds are rejected.
Graph build_reference(const std::string& kind, const std::vector<int>& params);

// Exact BFS distances from `source`; unreachable vertices get -1.
std::vector<int> bfs_distances(const Graph& g, VertexId source);

// Number of vertices at each distance from `source`, index = distance.
std::vector<int> sphere_sizes(const Graph& g, VertexId source);

// Induced subgraph on {v : d(center, v) <= r}, with vertex ids remapped
// densely (ordered by distance, then original id) and ring labels re-derived
// from the center.
Graph ball(const Graph& g, VertexId center, int r);

// Merge all boundary vertices into one. Edges into the boundary keep their
// multiplicities (summed per surviving pair); edges inside the boundary are
// dropped. Surviving vertices keep their relative order; the merged vertex
// gets the highest id. Ring labels are re-derived by BFS from vertex 0.
Graph contract_boundary(const Graph& g);

// Id of `v` after contract_boundary: surviving vertices shift down past the
// removed boundary ids; any boundary vertex maps to the merged hub.
VertexId contracted_id(const Graph& original, VertexId v);

// Id of the merged hub in contract_boundary(g).
VertexId contracted_hub(const Graph& original);

// Plain-text edge list: header `vertices=<N> label=<text>`, then one line
// per distinct edge `u v mult` with u < v, sorted by (u, v).
std::string dump_edge_list(const Graph& g);

}  // namespace hyperspin
