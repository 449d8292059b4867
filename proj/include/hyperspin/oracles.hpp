#pragma once

#include <string>

#include "hyperspin/graph.hpp"

namespace hyperspin {

// Result of an exact small-scale computation together with an honest
// absolute error bound (quadratures report their final refinement delta,
// enumerations and dense solves a rounding/residual estimate).
struct ExactResult {
    double value;
    std::string method;
    double error_bound;
};

// Exact Ising pair correlation <s_x s_y> by Gray-code enumeration of all
// 2^V states with incremental energy updates, in shifted exponential form.
// Graphs over 20 vertices are rejected.
ExactResult brute_force_ising(const Graph& g, double beta, VertexId x, VertexId y);

// Single-edge O(2) correlation: int cos(t) e^{beta cos t} dt / int e^{beta cos t} dt
// on [0, pi], by composite Simpson quadrature with panel doubling until
// successive estimates differ by less than 1e-11.
ExactResult bessel_ratio(double beta);

// Free-boundary O(2) path correlation at distance d: bessel_ratio(beta)^d
// with propagated error bound.
ExactResult o2_path_correlation(int d, double beta);

// Effective resistance by direct dense elimination of the grounded
// Laplacian. Graphs over 50 vertices are rejected.
ExactResult dense_resistance(const Graph& g, VertexId x, VertexId y);

}  // namespace hyperspin
