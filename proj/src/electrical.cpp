#include "hyperspin/electrical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hyperspin {

namespace {

// L * x restricted to the non-grounded index set (ground column skipped
// because x[ground] is held at zero).
void apply_laplacian(const Graph& g, const std::vector<double>& x,
                     std::vector<double>& out) {
    const std::size_t n = g.vertex_count();
    for (VertexId u = 0; u < n; ++u) {
        double acc = 0.0;
        for (const Edge& e : g.adjacency[u])
            acc += static_cast<double>(e.mult) * (x[u] - x[e.to]);
        out[u] = acc;
    }
}

double node_law_residual(const Graph& g, const std::vector<double>& phi,
                         VertexId source, VertexId sink) {
    double worst = 0.0;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
        if (u == source || u == sink) continue;
        double net = 0.0;
        for (const Edge& e : g.adjacency[u])
            net += static_cast<double>(e.mult) * (phi[u] - phi[e.to]);
        worst = std::max(worst, std::abs(net));
    }
    return worst;
}

}  // namespace

double PotentialField::dirichlet_energy() const {
    double acc = 0.0;
    for (VertexId u = 0; u < graph->vertex_count(); ++u)
        for (const Edge& e : graph->adjacency[u])
            if (e.to > u) {
                double d = values[u] - values[e.to];
                acc += static_cast<double>(e.mult) * d * d;
            }
    return acc;
}

double PotentialField::max_edge_gradient() const {
    double top = 0.0;
    for (VertexId u = 0; u < graph->vertex_count(); ++u)
        for (const Edge& e : graph->adjacency[u])
            top = std::max(top, std::abs(values[u] - values[e.to]));
    return top;
}

PotentialField solve_potential(const Graph& g, VertexId source, VertexId sink,
                               double tolerance) {
    const std::size_t n = g.vertex_count();
    if (source >= n || sink >= n)
        throw std::invalid_argument("solve_potential: vertex out of range");
    if (source == sink)
        throw std::invalid_argument("solve_potential: source equals sink");
    if (tolerance <= 0)
        throw std::invalid_argument("solve_potential: tolerance must be positive");

    // Jacobi-preconditioned CG on the Laplacian with the source grounded.
    // The ground is enforced by keeping x[source] = 0 and zeroing every
    // source entry of the Krylov vectors after each operator application.
    std::vector<double> x(n, 0.0), r(n, 0.0), z(n, 0.0), p(n, 0.0), ap(n, 0.0);
    std::vector<double> inv_diag(n, 0.0);
    for (VertexId u = 0; u < n; ++u) {
        double deg = g.degree(u);
        if (deg <= 0.0 && u != source)
            throw std::invalid_argument("solve_potential: graph is not connected");
        inv_diag[u] = deg > 0.0 ? 1.0 / deg : 0.0;
    }

    r[sink] = 1.0;  // unit current in at the sink, out at the grounded source
    const long max_iter = 20 * static_cast<long>(n);
    double residual = 1.0;
    long it = 0;
    double rz = 0.0;
    for (VertexId u = 0; u < n; ++u) z[u] = r[u] * inv_diag[u];
    z[source] = 0.0;
    p = z;
    for (VertexId u = 0; u < n; ++u) rz += r[u] * z[u];

    while (it < max_iter) {
        residual = node_law_residual(g, x, source, sink);
        double terminal = 0.0;
        for (const Edge& e : g.adjacency[sink])
            terminal += static_cast<double>(e.mult) * (x[sink] - x[e.to]);
        if (residual <= tolerance && std::abs(terminal - 1.0) <= tolerance) break;

        apply_laplacian(g, p, ap);
        ap[source] = 0.0;
        double pap = 0.0;
        for (VertexId u = 0; u < n; ++u) pap += p[u] * ap[u];
        if (pap <= 0.0) break;
        double alpha = rz / pap;
        for (VertexId u = 0; u < n; ++u) {
            x[u] += alpha * p[u];
            r[u] -= alpha * ap[u];
        }
        x[source] = 0.0;
        r[source] = 0.0;
        double rz_next = 0.0;
        for (VertexId u = 0; u < n; ++u) {
            z[u] = r[u] * inv_diag[u];
            rz_next += r[u] * z[u];
        }
        double beta = rz_next / rz;
        rz = rz_next;
        for (VertexId u = 0; u < n; ++u) p[u] = z[u] + beta * p[u];
        ++it;
    }
    residual = node_law_residual(g, x, source, sink);
    if (residual > tolerance)
        throw std::runtime_error(
            "solve_potential: no convergence within " + std::to_string(max_iter) +
            " iterations, achieved residual " + std::to_string(residual));

    PotentialField f;
    f.graph = &g;
    f.values = std::move(x);
    f.source = source;
    f.sink = sink;
    f.current = 1.0;
    f.residual = residual;
    f.iterations = static_cast<int>(it);
    return f;
}

double effective_resistance(const Graph& g, VertexId x, VertexId y,
                            BoundaryCondition bc, double tolerance) {
    if (bc == BoundaryCondition::free_bc) {
        if (x == y) throw std::invalid_argument("effective_resistance: x equals y");
        return solve_potential(g, x, y, tolerance).potential_gap();
    }
    Graph contracted = contract_boundary(g);
    auto resolve = [&](VertexId v) {
        if (v == wired_hub) return contracted_hub(g);
        if (g.is_boundary(v))
            throw std::invalid_argument(
                "effective_resistance: vertex lies inside the contracted boundary");
        return contracted_id(g, v);
    };
    VertexId cx = resolve(x);
    VertexId cy = resolve(y);
    if (cx == cy) throw std::invalid_argument("effective_resistance: x equals y");
    return solve_potential(contracted, cx, cy, tolerance).potential_gap();
}

std::vector<std::pair<int, double>> resistance_profile(
    const Graph& g, VertexId center, BoundaryCondition bc, double tolerance) {
    std::vector<int> dist = bfs_distances(g, center);
    int top = 0;
    for (int d : dist) top = std::max(top, d);
    std::vector<VertexId> canonical(top + 1, 0);
    std::vector<bool> seen(top + 1, false);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (dist[v] > 0 && !seen[dist[v]]) {  // smallest id: first hit in id order
            canonical[dist[v]] = v;
            seen[dist[v]] = true;
        }
    }
    std::vector<std::pair<int, double>> profile;
    for (int d = 1; d <= top; ++d) {
        if (!seen[d]) continue;
        VertexId target = canonical[d];
        if (bc == BoundaryCondition::wired && g.is_boundary(target))
            target = wired_hub;
        profile.push_back({d, effective_resistance(g, center, target, bc, tolerance)});
    }
    return profile;
}

MSFunction ms_function(const Graph& g, VertexId x, VertexId y) {
    if (x == y) throw std::invalid_argument("ms_function: x equals y");
    PotentialField h = solve_potential(g, x, y);
    double grad = h.max_edge_gradient();
    double lambda = std::min(0.5, 1.0 / (10.0 * grad));

    MSFunction f;
    f.graph = &g;
    f.x = x;
    f.y = y;
    f.lambda = lambda;
    f.a.resize(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) f.a[v] = lambda * h.values[v];
    f.gain = f.a[y] - f.a[x];
    f.energy = lambda * lambda * h.dirichlet_energy();
    f.max_gradient = lambda * grad;
    f.distance = bfs_distances(g, x)[y];
    f.c1 = f.gain / f.distance;
    if (f.c1 <= 0)
        throw std::runtime_error("ms_function: nonpositive c1, graph is not usable");
    return f;
}

ScalingResult optimize_scaling(const PotentialField& h, double beta) {
    if (beta <= 0) throw std::invalid_argument("optimize_scaling: beta must be positive");
    const Graph& g = *h.graph;
    double grad = h.max_edge_gradient();
    double cap = 1.0 / (10.0 * grad);
    double gap = h.potential_gap();

    auto loss_derivative = [&](double lambda) {
        // d/dlambda of beta * sum mult*(cosh(lambda*dh) - 1)
        double acc = 0.0;
        for (VertexId u = 0; u < g.vertex_count(); ++u)
            for (const Edge& e : g.adjacency[u])
                if (e.to > u) {
                    double dh = h.values[u] - h.values[e.to];
                    acc += static_cast<double>(e.mult) * dh * std::sinh(lambda * dh);
                }
        return beta * acc;
    };
    auto exponent_at = [&](double lambda) {
        double acc = 0.0;
        for (VertexId u = 0; u < g.vertex_count(); ++u)
            for (const Edge& e : g.adjacency[u])
                if (e.to > u) {
                    double dh = h.values[u] - h.values[e.to];
                    acc += static_cast<double>(e.mult) * (std::cosh(lambda * dh) - 1.0);
                }
        return -lambda * gap + beta * acc;
    };

    // Convex in lambda with negative derivative at 0; either the cap binds
    // or the stationary point is found by bisection.
    double lambda;
    if (loss_derivative(cap) - gap <= 0.0) {
        lambda = cap;
    } else {
        double lo = 0.0, hi = cap;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (loss_derivative(mid) - gap <= 0.0 ? lo : hi) = mid;
        }
        lambda = 0.5 * (lo + hi);
    }
    return {lambda, exponent_at(lambda)};
}

}  // namespace hyperspin
