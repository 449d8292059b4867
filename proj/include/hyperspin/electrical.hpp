#pragma once

#include <vector>

#include "hyperspin/graph.hpp"

namespace hyperspin {

// Unit-current solution of Kirchhoff's equations: conductance = edge
// multiplicity, values(source) = 0, one ampere from sink to source.
struct PotentialField {
    const Graph* graph = nullptr;
    std::vector<double> values;
    VertexId source = 0;
    VertexId sink = 0;
    double current = 1.0;
    double residual = 0.0;  // achieved max node-law violation
    int iterations = 0;

    double potential_gap() const { return values[sink] - values[source]; }
    double dirichlet_energy() const;
    double max_edge_gradient() const;
};

// Preconditioned conjugate gradient on the graph Laplacian with the source
// grounded. Stops when the node-law residual is <= tolerance in max norm at
// every non-terminal vertex; iteration cap 20 * vertex_count. Throws on
// non-convergence, reporting the achieved residual.
PotentialField solve_potential(const Graph& g, VertexId source, VertexId sink,
                               double tolerance = 1e-10);

// Potential difference of the unit-current solution between x and y. Under
// wired conditions the graph is first boundary-contracted; x and y may name
// the merged vertex via `wired_hub`, and interior ids are given in the
// original graph's labelling. x or y strictly inside the boundary set is
// rejected for wired.
inline constexpr VertexId wired_hub = static_cast<VertexId>(-1);
double effective_resistance(const Graph& g, VertexId x, VertexId y,
                            BoundaryCondition bc, double tolerance = 1e-10);

// Resistance from `center` to one canonical vertex (smallest id) at each
// distance 1..max_ring, under the given boundary condition. Under wired
// conditions the farthest entry is the merged boundary vertex itself.
std::vector<std::pair<int, double>> resistance_profile(
    const Graph& g, VertexId center, BoundaryCondition bc,
    double tolerance = 1e-10);

// Scaled harmonic function certifying linear resistance growth: a = lambda*h
// with h the unit-current potential from x to y and
// lambda = min(1/2, 1/(10*max|grad h|)). Satisfies
//   a(y) - a(x) >= c1 * d(x,y) with c1 > 0,
//   sum_{u~v} |a(u)-a(v)|^2 <= (a(y)-a(x)) / 2,
//   |a(u)-a(v)| <= 1/10 on every edge.
struct MSFunction {
    const Graph* graph = nullptr;
    std::vector<double> a;
    VertexId x = 0;
    VertexId y = 0;
    double lambda = 0.0;
    double c1 = 0.0;            // (a(y)-a(x)) / d(x,y)
    double energy = 0.0;        // multiplicity-weighted sum of squared gradients
    double max_gradient = 0.0;
    double gain = 0.0;          // a(y) - a(x)
    int distance = 0;
};

MSFunction ms_function(const Graph& g, VertexId x, VertexId y);

// Minimises exponent(lambda) = -lambda*(h(y)-h(x))
//                              + beta * sum_{u~v} mult*(cosh(lambda*dh) - 1)
// over lambda in (0, cap], cap = 1/(10*max|dh|). The minimum is <= 0.
struct ScalingResult {
    double lambda_star;
    double exponent;
};

ScalingResult optimize_scaling(const PotentialField& h, double beta);

}  // namespace hyperspin
