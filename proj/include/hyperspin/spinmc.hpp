#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hyperspin/graph.hpp"
#include "hyperspin/rng.hpp"

namespace hyperspin {

enum class Algorithm { metropolis, wolff, mixed };
enum class Start { hot, cold };

// How wired boundary conditions act on the spins. `contract` merges the
// boundary into one ordinary spin with multiplicity-weighted couplings,
// matching the electrical contraction (the default). `fixed_vector` instead
// pins every boundary spin to a common unit vector; offered for comparison
// only.
enum class WiredSpins { contract, fixed_vector };

struct ModelParams {
    int n = 1;          // spin dimension; 1 = Ising, 2 = XY
    double beta = 1.0;  // inverse temperature
    BoundaryCondition bc = BoundaryCondition::free_bc;
    WiredSpins wired_spins = WiredSpins::contract;
};

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::metropolis: return "metropolis";
        case Algorithm::wolff: return "wolff";
        default: return "mixed";
    }
}

// Per-vertex spin state, stored flat as n doubles per vertex: the sign
// (+-1 in the single slot) for n=1, a unit vector in S^{n-1} for n >= 2.
// Pinned vertices (used by the fixed_vector wired variant) are never
// updated by the samplers.
struct SpinConfig {
    const Graph* graph = nullptr;
    int n = 1;
    std::vector<double> spins;
    std::vector<std::uint8_t> pinned;  // empty unless some spins are held fixed

    double* spin(VertexId v) {
        return spins.data() + static_cast<std::size_t>(v) * n;
    }
    const double* spin(VertexId v) const {
        return spins.data() + static_cast<std::size_t>(v) * n;
    }
    double dot(VertexId u, VertexId v) const;
    bool is_pinned(VertexId v) const { return !pinned.empty() && pinned[v] != 0; }
    void renormalize(VertexId v);  // rescale one spin to unit norm (n >= 2)
};

// Fresh configuration: hot = independent uniform spins, cold = every spin at
// the first coordinate vector.
SpinConfig make_config(const Graph& g, int n, Start start, Rng& rng);

// H = -sum_{u~v} mult(u,v) * <s_u, s_v> over distinct edges.
double energy(const SpinConfig& c);

// One sweep = vertex_count() proposals at uniformly random sites (random
// scan: a fixed scan order admits absorbing zero-field orbits, e.g. the
// checkerboard on a grid). n=1 proposes a flip, n>=2 rotates the spin by an
// angle uniform in [-delta, delta] toward a uniformly random tangent
// direction. Acceptance min(1, exp(-beta dH)). Returns the acceptance rate
// over the sweep.
double metropolis_sweep(SpinConfig& c, const ModelParams& p, Rng& rng,
                        double delta = 1.0);

// One Wolff cluster move. n=1: grow from a uniform seed, adding each aligned
// neighbour across an edge with probability 1 - exp(-2 beta mult), then flip
// the cluster. n>=2: embed via a uniform reflection direction r, activate
// (u,v) with probability 1 - exp(-2 beta mult (r.s_u)(r.s_v)) when that is
// positive, and reflect the cluster about the hyperplane orthogonal to r.
// Returns the cluster size. If the cluster touches a pinned vertex the flip
// is skipped (the restricted move set keeps detailed balance).
std::size_t wolff_step(SpinConfig& c, const ModelParams& p, Rng& rng);

// One Swendsen-Wang sweep (n=1 only): activate each aligned edge with
// probability 1 - exp(-2 beta mult), recolour every bond component
// uniformly. Returns the component label (union-find root) of each vertex
// for the bond configuration that was used, so connectivity can be read off.
std::vector<VertexId> swendsen_wang_sweep(SpinConfig& c, double beta, Rng& rng);

struct McSchedule {
    int burn_in = 500;  // equilibration sweeps
    int sweeps = 4000;  // measurement sweeps
    int stride = 1;     // measure every `stride` sweeps
    int replicas = 4;
    std::uint64_t seed = 1;
    Algorithm algorithm = Algorithm::wolff;
    Start start = Start::hot;
    bool sphere_average = true;  // false: canonical (smallest-id) vertex only
    int threads = 1;             // replica parallelism; never affects results
};

struct CorrelationPoint {
    int distance = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

struct CorrelationSeries {
    std::vector<CorrelationPoint> points;  // distances 0..D in order
    std::string graph_label;
    std::string algorithm_label;
    ModelParams params;
    VertexId center = 0;
    McSchedule schedule;
};

// CSV rows for a series: header
// `graph,n,beta,bc,algorithm,distance,estimate,stderr,samples`,
// floats at 10 significant digits.
std::string correlation_csv(const CorrelationSeries& s, bool header = true);

struct ChainResult {
    CorrelationSeries series;
    double mean_abs_magnetisation = 0.0;
    double mean_energy = 0.0;
};

// Sample the O(n) model and estimate <s_center . s_v> binned by distance
// (averaged over each sphere). Wired boundary conditions contract the graph
// internally (the merged spin participates like any other and is binned at
// its BFS distance); `center` is given in the original graph's labelling and
// must not be a boundary vertex under wired. Replicas run on independent RNG
// streams (base seed split by replica index) and are merged by
// inverse-variance weighting of batch-means errors (20 batches per replica),
// so results are deterministic at any thread count.
ChainResult run_chain(const Graph& g, const ModelParams& p,
                      const McSchedule& sched, VertexId center);

// Swendsen-Wang estimate of P[center <-> v] in the FK representation,
// binned by distance like run_chain. By the Edwards-Sokal coupling this
// equals the Ising pair correlation. Rejects p.n != 1.
CorrelationSeries fk_connectivity(const Graph& g, const ModelParams& p,
                                  const McSchedule& sched, VertexId center);

// Bernoulli bond percolation: every distinct edge is open independently
// with probability 1 - (1-prob)^mult; reports P[center <-> v] by distance
// over `samples` independent configurations.
CorrelationSeries bernoulli_connectivity(const Graph& g, double prob,
                                         int samples, VertexId center,
                                         Rng& rng);

// The ACCN comparison map: Bernoulli parameter p to FK(q=2) parameter
// 2p/(1+p).
inline double percolation_to_ising_bond(double p) { return 2.0 * p / (1.0 + p); }

}  // namespace hyperspin
