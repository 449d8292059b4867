#include "hyperspin/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hyperspin {

namespace {

// Symmetric edge insertion onto an adjacency-in-progress.
void add_edge(std::vector<std::vector<Edge>>& adj, VertexId u, VertexId v,
              std::uint32_t mult = 1) {
    adj[u].push_back({v, mult});
    adj[v].push_back({u, mult});
}

std::vector<VertexId> max_ring_set(const std::vector<int>& ring) {
    int top = 0;
    for (int r : ring) top = std::max(top, r);
    std::vector<VertexId> out;
    for (VertexId v = 0; v < ring.size(); ++v)
        if (ring[v] == top) out.push_back(v);
    return out;
}

Graph finish(std::vector<std::vector<Edge>> adj, std::string label) {
    Graph g;
    g.adjacency = std::move(adj);
    g.label = std::move(label);
    g.ring = bfs_distances(g, 0);
    g.boundary = max_ring_set(g.ring);
    return g;
}

}  // namespace

int Graph::max_ring() const {
    int top = 0;
    for (int r : ring) top = std::max(top, r);
    return top;
}

std::size_t Graph::edge_count() const {
    std::size_t n = 0;
    for (VertexId u = 0; u < adjacency.size(); ++u)
        for (const Edge& e : adjacency[u])
            if (e.to > u) ++n;
    return n;
}

std::uint64_t Graph::total_multiplicity() const {
    std::uint64_t n = 0;
    for (VertexId u = 0; u < adjacency.size(); ++u)
        for (const Edge& e : adjacency[u])
            if (e.to > u) n += e.mult;
    return n;
}

std::uint32_t Graph::degree(VertexId v) const {
    std::uint32_t d = 0;
    for (const Edge& e : adjacency[v]) d += e.mult;
    return d;
}

bool Graph::is_boundary(VertexId v) const {
    return std::binary_search(boundary.begin(), boundary.end(), v);
}

Graph build_triangulation(int q, int radius) {
    if (q < 7) throw std::invalid_argument("build_triangulation: q must be >= 7");
    if (radius < 0) throw std::invalid_argument("build_triangulation: radius must be >= 0");

    std::string label = "triangulation_q" + std::to_string(q) + "_r" + std::to_string(radius);
    if (radius == 0) {
        Graph g;
        g.adjacency.resize(1);
        g.ring = {0};
        g.boundary = {0};
        g.label = label;
        return g;
    }

    std::vector<std::vector<Edge>> adj(1 + static_cast<std::size_t>(q));
    std::vector<VertexId> prev_ring(q);
    std::vector<int> up(1 + q, 1);  // up-edge count per vertex; root unused
    for (int i = 0; i < q; ++i) {
        prev_ring[i] = static_cast<VertexId>(1 + i);
        add_edge(adj, 0, prev_ring[i]);
    }
    for (int i = 0; i < q; ++i)
        add_edge(adj, prev_ring[i], prev_ring[(i + 1) % q]);

    for (int k = 1; k < radius; ++k) {
        std::vector<VertexId> new_ring;
        std::vector<VertexId> last_new;  // last new child of each prev-ring vertex
        last_new.reserve(prev_ring.size());
        for (VertexId v : prev_ring) {
            int t = q - 3 - up[v];  // new children; >= 2 for q >= 7
            VertexId first = static_cast<VertexId>(adj.size());
            adj.resize(adj.size() + t);
            up.resize(adj.size(), 1);
            for (int j = 0; j < t; ++j) {
                add_edge(adj, v, first + j);
                new_ring.push_back(first + j);
            }
            last_new.push_back(first + t - 1);
        }
        // Consecutive prev-ring vertices share exactly one child: the last
        // new child of the previous vertex.
        const std::size_t m = prev_ring.size();
        for (std::size_t i = 0; i < m; ++i) {
            VertexId shared = last_new[(i + m - 1) % m];
            add_edge(adj, prev_ring[i], shared);
            up[shared] = 2;
        }
        for (std::size_t i = 0; i < new_ring.size(); ++i)
            add_edge(adj, new_ring[i], new_ring[(i + 1) % new_ring.size()]);
        prev_ring = std::move(new_ring);
    }
    return finish(std::move(adj), label);
}

Graph build_ringed_tree(int depth, RingClosure closure) {
    if (depth < 0) throw std::invalid_argument("build_ringed_tree: depth must be >= 0");
    std::size_t n = (1ull << (depth + 1)) - 1;
    std::vector<std::vector<Edge>> adj(n);
    for (int k = 0; k < depth; ++k) {
        VertexId gen_start = static_cast<VertexId>((1u << k) - 1);
        VertexId next_start = static_cast<VertexId>((1u << (k + 1)) - 1);
        for (VertexId j = 0; j < (1u << k); ++j) {
            add_edge(adj, gen_start + j, next_start + 2 * j);
            add_edge(adj, gen_start + j, next_start + 2 * j + 1);
        }
    }
    for (int k = 1; k <= depth; ++k) {
        VertexId gen_start = static_cast<VertexId>((1u << k) - 1);
        std::uint32_t size = 1u << k;
        for (std::uint32_t j = 0; j + 1 < size; ++j)
            add_edge(adj, gen_start + j, gen_start + j + 1);
        if (closure == RingClosure::cycle && size > 2)
            add_edge(adj, gen_start, gen_start + size - 1);
    }
    std::string label = "ringed_tree_d" + std::to_string(depth) +
                        (closure == RingClosure::cycle ? "_cycle" : "");
    return finish(std::move(adj), label);
}

Graph build_path(int length) {
    if (length < 0) throw std::invalid_argument("build_path: length must be >= 0");
    std::vector<std::vector<Edge>> adj(length + 1);
    for (int i = 0; i < length; ++i)
        add_edge(adj, i, i + 1);
    return finish(std::move(adj), "path_" + std::to_string(length));
}

Graph build_cycle(int n) {
    if (n < 3) throw std::invalid_argument("build_cycle: need at least 3 vertices");
    std::vector<std::vector<Edge>> adj(n);
    for (int i = 0; i < n; ++i)
        add_edge(adj, i, (i + 1) % n);
    return finish(std::move(adj), "cycle_" + std::to_string(n));
}

Graph build_tree(int branching, int depth) {
    if (branching < 1 || depth < 0)
        throw std::invalid_argument("build_tree: branching >= 1 and depth >= 0 required");
    std::vector<std::vector<Edge>> adj(1);
    std::vector<VertexId> gen = {0};
    for (int k = 0; k < depth; ++k) {
        std::vector<VertexId> next;
        for (VertexId v : gen) {
            for (int j = 0; j < branching; ++j) {
                VertexId c = static_cast<VertexId>(adj.size());
                adj.emplace_back();
                add_edge(adj, v, c);
                next.push_back(c);
            }
        }
        gen = std::move(next);
    }
    return finish(std::move(adj),
                  "tree_b" + std::to_string(branching) + "_d" + std::to_string(depth));
}

Graph build_grid(int side) {
    if (side < 1) throw std::invalid_argument("build_grid: side must be >= 1");
    std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            VertexId v = static_cast<VertexId>(r * side + c);
            if (c + 1 < side) add_edge(adj, v, v + 1);
            if (r + 1 < side) add_edge(adj, v, v + side);
        }
    }
    return finish(std::move(adj), "grid_" + std::to_string(side));
}

Graph build_complete(int n) {
    if (n < 2) throw std::invalid_argument("build_complete: need at least 2 vertices");
    std::vector<std::vector<Edge>> adj(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            add_edge(adj, u, v);
    return finish(std::move(adj), "complete_" + std::to_string(n));
}

Graph build_reference(const std::string& kind, const std::vector<int>& params) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw std::invalid_argument("build_reference: kind '" + kind + "' takes " +
                                        std::to_string(n) + " size parameter(s)");
    };
    if (kind == "path") { need(1); return build_path(params[0]); }
    if (kind == "cycle") { need(1); return build_cycle(params[0]); }
    if (kind == "tree") { need(2); return build_tree(params[0], params[1]); }
    if (kind == "grid") { need(1); return build_grid(params[0]); }
    if (kind == "complete") { need(1); return build_complete(params[0]); }
    throw std::invalid_argument("build_reference: unknown kind '" + kind + "'");
}

std::vector<int> bfs_distances(const Graph& g, VertexId source) {
    if (source >= g.vertex_count())
        throw std::invalid_argument("bfs_distances: source out of range");
    std::vector<int> dist(g.vertex_count(), -1);
    std::deque<VertexId> queue;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (const Edge& e : g.adjacency[u]) {
            if (dist[e.to] < 0) {
                dist[e.to] = dist[u] + 1;
                queue.push_back(e.to);
            }
        }
    }
    return dist;
}

std::vector<int> sphere_sizes(const Graph& g, VertexId source) {
    std::vector<int> dist = bfs_distances(g, source);
    int top = 0;
    for (int d : dist) top = std::max(top, d);
    std::vector<int> sizes(top + 1, 0);
    for (int d : dist)
        if (d >= 0) ++sizes[d];
    return sizes;
}

Graph ball(const Graph& g, VertexId center, int r) {
    if (r < 0) throw std::invalid_argument("ball: radius must be >= 0");
    std::vector<int> dist = bfs_distances(g, center);
    std::vector<VertexId> keep;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dist[v] >= 0 && dist[v] <= r) keep.push_back(v);
    std::stable_sort(keep.begin(), keep.end(),
                     [&](VertexId a, VertexId b) { return dist[a] < dist[b]; });
    std::vector<VertexId> remap(g.vertex_count(), 0);
    std::vector<bool> kept(g.vertex_count(), false);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        remap[keep[i]] = static_cast<VertexId>(i);
        kept[keep[i]] = true;
    }
    Graph out;
    out.adjacency.resize(keep.size());
    for (VertexId v : keep)
        for (const Edge& e : g.adjacency[v])
            if (kept[e.to])
                out.adjacency[remap[v]].push_back({remap[e.to], e.mult});
    out.ring.resize(keep.size());
    for (VertexId v : keep) out.ring[remap[v]] = dist[v];
    out.boundary = max_ring_set(out.ring);
    out.label = g.label + "_ball" + std::to_string(r);
    return out;
}

VertexId contracted_hub(const Graph& g) {
    return static_cast<VertexId>(g.vertex_count() - g.boundary.size());
}

VertexId contracted_id(const Graph& g, VertexId v) {
    if (g.is_boundary(v)) return contracted_hub(g);
    VertexId below = static_cast<VertexId>(
        std::lower_bound(g.boundary.begin(), g.boundary.end(), v) - g.boundary.begin());
    return v - below;
}

Graph contract_boundary(const Graph& g) {
    if (g.boundary.empty())
        throw std::invalid_argument("contract_boundary: boundary is empty");
    VertexId hub = contracted_hub(g);
    std::size_t n = hub + 1;

    // Collapse parallel edges per surviving pair, dropping intra-boundary ones.
    std::map<std::pair<VertexId, VertexId>, std::uint64_t> merged;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        for (const Edge& e : g.adjacency[u]) {
            if (e.to < u) continue;
            VertexId a = contracted_id(g, u);
            VertexId b = contracted_id(g, e.to);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            merged[{a, b}] += e.mult;
        }
    }
    Graph out;
    out.adjacency.resize(n);
    for (const auto& [pair, mult] : merged) {
        out.adjacency[pair.first].push_back({pair.second, static_cast<std::uint32_t>(mult)});
        out.adjacency[pair.second].push_back({pair.first, static_cast<std::uint32_t>(mult)});
    }
    out.ring = bfs_distances(out, 0);
    out.boundary = max_ring_set(out.ring);
    out.label = g.label + "_wired";
    return out;
}

std::string dump_edge_list(const Graph& g) {
    std::ostringstream os;
    os << "vertices=" << g.vertex_count() << " label=" << g.label << "\n";
    std::vector<std::pair<VertexId, Edge>> edges;
    for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (const Edge& e : g.adjacency[u])
            if (e.to > u) edges.push_back({u, e});
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first < b.first : a.second.to < b.second.to;
    });
    for (const auto& [u, e] : edges)
        os << u << " " << e.to << " " << e.mult << "\n";
    return os.str();
}

}  // namespace hyperspin
