#include "hyperspin/spinmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <utility>

#include "hyperspin/text.hpp"

namespace hyperspin {

namespace {

constexpr double pi = 3.14159265358979323846;

// Uniform point on S^{n-1} from normal deviates.
void unit_sphere_point(int n, Rng& rng, double* out) {
    for (;;) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            out[i] = rng.normal();
            norm2 += out[i] * out[i];
        }
        if (norm2 > 1e-24) {
            double inv = 1.0 / std::sqrt(norm2);
            for (int i = 0; i < n; ++i) out[i] *= inv;
            return;
        }
    }
}

struct DisjointSets {
    std::vector<VertexId> parent;

    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), VertexId{0});
    }
    VertexId find(VertexId v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    // Smaller root wins, so labels are deterministic.
    void unite(VertexId a, VertexId b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

double SpinConfig::dot(VertexId u, VertexId v) const {
    const double* a = spin(u);
    const double* b = spin(v);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void SpinConfig::renormalize(VertexId v) {
    if (n == 1) return;
    double* s = spin(v);
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) norm2 += s[i] * s[i];
    double inv = 1.0 / std::sqrt(norm2);
    for (int i = 0; i < n; ++i) s[i] *= inv;
}

SpinConfig make_config(const Graph& g, int n, Start start, Rng& rng) {
    if (n < 1) throw std::invalid_argument("make_config: spin dimension must be >= 1");
    SpinConfig c;
    c.graph = &g;
    c.n = n;
    c.spins.assign(g.vertex_count() * static_cast<std::size_t>(n), 0.0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        if (start == Start::cold)
            c.spin(v)[0] = 1.0;
        else if (n == 1)
            c.spin(v)[0] = rng.coin(0.5) ? 1.0 : -1.0;
        else
            unit_sphere_point(n, rng, c.spin(v));
    }
    return c;
}

double energy(const SpinConfig& c) {
    const Graph& g = *c.graph;
    double h = 0.0;
    for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (const Edge& e : g.adjacency[u])
            if (e.to > u) h -= static_cast<double>(e.mult) * c.dot(u, e.to);
    return h;
}

double metropolis_sweep(SpinConfig& c, const ModelParams& p, Rng& rng,
                        double delta) {
    const Graph& g = *c.graph;
    std::size_t proposals = 0, accepted = 0;
    std::vector<double> tangent(c.n), proposal(c.n);
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        VertexId v = rng.below(static_cast<std::uint32_t>(g.vertex_count()));
        if (c.is_pinned(v)) continue;
        ++proposals;
        if (c.n == 1) {
            double local = 0.0;
            for (const Edge& e : g.adjacency[v])
                local += static_cast<double>(e.mult) * c.spin(e.to)[0];
            double dh = 2.0 * c.spin(v)[0] * local;
            if (dh <= 0.0 || rng.uniform() < std::exp(-p.beta * dh)) {
                c.spin(v)[0] = -c.spin(v)[0];
                ++accepted;
            }
            continue;
        }
        double* s = c.spin(v);
        // Random tangent direction: a uniform vector orthogonalised against s.
        for (;;) {
            unit_sphere_point(c.n, rng, tangent.data());
            double along = 0.0;
            for (int i = 0; i < c.n; ++i) along += tangent[i] * s[i];
            double norm2 = 0.0;
            for (int i = 0; i < c.n; ++i) {
                tangent[i] -= along * s[i];
                norm2 += tangent[i] * tangent[i];
            }
            if (norm2 > 1e-12) {
                double inv = 1.0 / std::sqrt(norm2);
                for (int i = 0; i < c.n; ++i) tangent[i] *= inv;
                break;
            }
        }
        double theta = rng.uniform(-delta, delta);
        double cs = std::cos(theta), sn = std::sin(theta);
        for (int i = 0; i < c.n; ++i) proposal[i] = cs * s[i] + sn * tangent[i];
        double dh = 0.0;
        for (const Edge& e : g.adjacency[v]) {
            const double* u = c.spin(e.to);
            double d = 0.0;
            for (int i = 0; i < c.n; ++i) d += (proposal[i] - s[i]) * u[i];
            dh -= static_cast<double>(e.mult) * d;
        }
        if (dh <= 0.0 || rng.uniform() < std::exp(-p.beta * dh)) {
            for (int i = 0; i < c.n; ++i) s[i] = proposal[i];
            c.renormalize(v);
            ++accepted;
        }
    }
    return proposals == 0 ? 1.0
                          : static_cast<double>(accepted) /
                                static_cast<double>(proposals);
}

std::size_t wolff_step(SpinConfig& c, const ModelParams& p, Rng& rng) {
    const Graph& g = *c.graph;
    const std::size_t nv = g.vertex_count();
    // Projection of every spin onto the reflection direction (the spin itself
    // for n=1). Cached up front: growth only ever looks at unflipped spins.
    std::vector<double> proj(nv);
    std::vector<double> r;
    if (c.n == 1) {
        for (VertexId v = 0; v < nv; ++v) proj[v] = c.spin(v)[0];
    } else {
        r.resize(c.n);
        unit_sphere_point(c.n, rng, r.data());
        for (VertexId v = 0; v < nv; ++v) {
            const double* s = c.spin(v);
            double d = 0.0;
            for (int i = 0; i < c.n; ++i) d += r[i] * s[i];
            proj[v] = d;
        }
    }

    VertexId seed = static_cast<VertexId>(rng.below(static_cast<std::uint32_t>(nv)));
    std::vector<std::uint8_t> in_cluster(nv, 0);
    std::vector<VertexId> stack{seed}, members{seed};
    in_cluster[seed] = 1;
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        for (const Edge& e : g.adjacency[u]) {
            if (in_cluster[e.to]) continue;
            double coupling = proj[u] * proj[e.to];
            if (coupling <= 0.0) continue;
            double activate =
                1.0 - std::exp(-2.0 * p.beta * static_cast<double>(e.mult) * coupling);
            if (rng.uniform() < activate) {
                in_cluster[e.to] = 1;
                stack.push_back(e.to);
                members.push_back(e.to);
            }
        }
    }

    if (!c.pinned.empty())
        for (VertexId v : members)
            if (c.pinned[v]) return members.size();  // flip skipped

    if (c.n == 1) {
        for (VertexId v : members) c.spin(v)[0] = -c.spin(v)[0];
    } else {
        for (VertexId v : members) {
            double* s = c.spin(v);
            double twice = 2.0 * proj[v];
            for (int i = 0; i < c.n; ++i) s[i] -= twice * r[i];
            c.renormalize(v);
        }
    }
    return members.size();
}

std::vector<VertexId> swendsen_wang_sweep(SpinConfig& c, double beta, Rng& rng) {
    if (c.n != 1)
        throw std::invalid_argument("swendsen_wang_sweep: defined for n = 1 only");
    if (!c.pinned.empty())
        throw std::invalid_argument("swendsen_wang_sweep: pinned spins not supported");
    const Graph& g = *c.graph;
    const std::size_t nv = g.vertex_count();
    DisjointSets ds(nv);
    for (VertexId u = 0; u < nv; ++u)
        for (const Edge& e : g.adjacency[u]) {
            if (e.to <= u) continue;
            if (c.spin(u)[0] * c.spin(e.to)[0] <= 0.0) continue;
            double activate =
                1.0 - std::exp(-2.0 * beta * static_cast<double>(e.mult));
            if (rng.uniform() < activate) ds.unite(u, e.to);
        }
    std::vector<VertexId> labels(nv);
    std::vector<std::int8_t> colour(nv, 0);
    for (VertexId v = 0; v < nv; ++v) {
        VertexId root = ds.find(v);
        labels[v] = root;
        if (colour[root] == 0) colour[root] = rng.coin(0.5) ? 1 : -1;
        c.spin(v)[0] = colour[root];
    }
    return labels;
}

namespace {

struct ReplicaStats {
    std::vector<double> estimate;  // per distance
    std::vector<double> variance;  // of the replica mean, floored
    double magnetisation = 0.0;
    double energy_mean = 0.0;
};

// Vertices at each distance from `center`, ids ascending within a sphere.
std::vector<std::vector<VertexId>> sphere_members(const Graph& g,
                                                  VertexId center,
                                                  bool sphere_average) {
    std::vector<int> dist = bfs_distances(g, center);
    int dmax = 0;
    for (int d : dist) dmax = std::max(dmax, d);
    std::vector<std::vector<VertexId>> out(dmax + 1);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dist[v] >= 0) out[dist[v]].push_back(v);
    if (!sphere_average)
        for (auto& sphere : out)
            if (sphere.size() > 1) sphere.resize(1);  // canonical smallest id
    return out;
}

// Batch means: mean of the batch means and the variance of that mean,
// floored so inverse-variance weights stay finite on constant streams.
std::pair<double, double> batch_stats(const std::vector<double>& xs) {
    const std::size_t m = xs.size();
    const std::size_t b = std::min<std::size_t>(20, m);
    std::vector<double> means(b, 0.0);
    std::size_t start = 0;
    for (std::size_t k = 0; k < b; ++k) {
        std::size_t stop = (k + 1) * m / b;
        double sum = 0.0;
        for (std::size_t i = start; i < stop; ++i) sum += xs[i];
        means[k] = sum / static_cast<double>(stop - start);
        start = stop;
    }
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= static_cast<double>(b);
    double var = 0.0;
    if (b >= 2) {
        for (double v : means) var += (v - grand) * (v - grand);
        var /= static_cast<double>(b - 1) * static_cast<double>(b);
    }
    return {grand, std::max(var, 1e-30)};
}

// Runs `replicas` workers (by index) over at most `threads` threads and
// returns the results merged by index, independent of completion order.
template <typename Worker>
std::vector<ReplicaStats> run_replicas(int replicas, int threads, Worker worker) {
    std::vector<ReplicaStats> out(replicas);
    threads = std::clamp(threads, 1, replicas);
    if (threads == 1) {
        for (int k = 0; k < replicas; ++k) out[k] = worker(k);
        return out;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(replicas);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int k = next.fetch_add(1);
                if (k >= replicas) return;
                try {
                    out[k] = worker(k);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        });
    for (std::thread& t : pool) t.join();
    for (std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// Inverse-variance combination of the replica estimates into series points.
void merge_replicas(const std::vector<ReplicaStats>& stats,
                    std::uint64_t samples_per_point, CorrelationSeries& series) {
    const std::size_t nd = stats.front().estimate.size();
    series.points.resize(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        double wsum = 0.0, est = 0.0;
        for (const ReplicaStats& r : stats) {
            double w = 1.0 / r.variance[d];
            wsum += w;
            est += w * r.estimate[d];
        }
        CorrelationPoint& pt = series.points[d];
        pt.distance = static_cast<int>(d);
        pt.estimate = est / wsum;
        pt.std_error = std::sqrt(1.0 / wsum);
        pt.samples = samples_per_point;
    }
}

void validate_schedule(const McSchedule& sched) {
    if (sched.burn_in < 0)
        throw std::invalid_argument("schedule: burn_in must be >= 0");
    if (sched.sweeps <= 0 || sched.stride <= 0 || sched.replicas <= 0)
        throw std::invalid_argument("schedule: counts must be positive");
    if (sched.sweeps / sched.stride <= 0)
        throw std::invalid_argument("schedule: zero measurements (stride exceeds sweeps)");
}

// Resolves the (graph, center) a wired/free run actually simulates. Returns
// the contracted graph through `storage` when contraction applies.
const Graph* resolve_sim_graph(const Graph& g, const ModelParams& p,
                               VertexId center, Graph& storage,
                               VertexId& sim_center) {
    sim_center = center;
    if (center >= g.vertex_count())
        throw std::invalid_argument("center vertex out of range");
    if (p.bc == BoundaryCondition::wired) {
        if (g.is_boundary(center))
            throw std::invalid_argument("center lies in the wired boundary");
        if (p.wired_spins == WiredSpins::contract) {
            storage = contract_boundary(g);
            sim_center = contracted_id(g, center);
            return &storage;
        }
    }
    return &g;
}

}  // namespace

ChainResult run_chain(const Graph& g, const ModelParams& p,
                      const McSchedule& sched, VertexId center) {
    if (p.n < 1) throw std::invalid_argument("run_chain: spin dimension must be >= 1");
    if (p.beta < 0.0) throw std::invalid_argument("run_chain: beta must be >= 0");
    validate_schedule(sched);

    Graph storage;
    VertexId sim_center = center;
    const Graph* sim = resolve_sim_graph(g, p, center, storage, sim_center);
    const bool pin_boundary = p.bc == BoundaryCondition::wired &&
                              p.wired_spins == WiredSpins::fixed_vector;
    const auto spheres = sphere_members(*sim, sim_center, sched.sphere_average);
    const int measurements = sched.sweeps / sched.stride;

    auto worker = [&](int k) {
        Rng rng = Rng::stream(sched.seed, static_cast<std::uint64_t>(k));
        SpinConfig c = make_config(*sim, p.n, sched.start, rng);
        if (pin_boundary) {
            c.pinned.assign(sim->vertex_count(), 0);
            for (VertexId b : sim->boundary) {
                c.pinned[b] = 1;
                double* s = c.spin(b);
                for (int i = 0; i < c.n; ++i) s[i] = i == 0 ? 1.0 : 0.0;
            }
        }
        double delta = 1.0;
        auto sweep = [&](bool adapting) {
            double acc = 1.0;
            switch (sched.algorithm) {
                case Algorithm::metropolis:
                    acc = metropolis_sweep(c, p, rng, delta);
                    break;
                case Algorithm::wolff:
                    wolff_step(c, p, rng);
                    break;
                case Algorithm::mixed:
                    acc = metropolis_sweep(c, p, rng, delta);
                    wolff_step(c, p, rng);
                    break;
            }
            if (adapting && sched.algorithm != Algorithm::wolff)
                delta = std::clamp(delta * std::exp(0.5 * (acc - 0.5)), 1e-3, pi);
        };
        for (int i = 0; i < sched.burn_in; ++i) sweep(true);

        std::vector<std::vector<double>> stream(spheres.size());
        for (auto& s : stream) s.reserve(measurements);
        double mag_sum = 0.0, energy_sum = 0.0;
        std::vector<double> total(c.n);
        for (int m = 0; m < measurements; ++m) {
            for (int s = 0; s < sched.stride; ++s) sweep(false);
            for (std::size_t d = 0; d < spheres.size(); ++d) {
                double sum = 0.0;
                for (VertexId v : spheres[d]) sum += c.dot(sim_center, v);
                stream[d].push_back(sum / static_cast<double>(spheres[d].size()));
            }
            std::fill(total.begin(), total.end(), 0.0);
            for (VertexId v = 0; v < sim->vertex_count(); ++v) {
                const double* s = c.spin(v);
                for (int i = 0; i < c.n; ++i) total[i] += s[i];
            }
            double norm2 = 0.0;
            for (double x : total) norm2 += x * x;
            mag_sum += std::sqrt(norm2) / static_cast<double>(sim->vertex_count());
            energy_sum += energy(c);
        }

        ReplicaStats stats;
        stats.estimate.resize(spheres.size());
        stats.variance.resize(spheres.size());
        for (std::size_t d = 0; d < spheres.size(); ++d) {
            auto [mean, var] = batch_stats(stream[d]);
            stats.estimate[d] = mean;
            stats.variance[d] = var;
        }
        stats.magnetisation = mag_sum / measurements;
        stats.energy_mean = energy_sum / measurements;
        return stats;
    };

    auto stats = run_replicas(sched.replicas, sched.threads, worker);

    ChainResult result;
    result.series.graph_label = g.label;
    result.series.algorithm_label = algorithm_name(sched.algorithm);
    result.series.params = p;
    result.series.center = center;
    result.series.schedule = sched;
    merge_replicas(stats,
                   static_cast<std::uint64_t>(sched.replicas) *
                       static_cast<std::uint64_t>(measurements),
                   result.series);
    for (const ReplicaStats& r : stats) {
        result.mean_abs_magnetisation += r.magnetisation;
        result.mean_energy += r.energy_mean;
    }
    result.mean_abs_magnetisation /= sched.replicas;
    result.mean_energy /= sched.replicas;
    return result;
}

CorrelationSeries fk_connectivity(const Graph& g, const ModelParams& p,
                                  const McSchedule& sched, VertexId center) {
    if (p.n != 1)
        throw std::invalid_argument("fk_connectivity: defined for n = 1 only");
    if (p.beta < 0.0)
        throw std::invalid_argument("fk_connectivity: beta must be >= 0");
    if (p.bc == BoundaryCondition::wired &&
        p.wired_spins == WiredSpins::fixed_vector)
        throw std::invalid_argument(
            "fk_connectivity: fixed-vector wired variant not supported");
    validate_schedule(sched);

    Graph storage;
    VertexId sim_center = center;
    const Graph* sim = resolve_sim_graph(g, p, center, storage, sim_center);
    const auto spheres = sphere_members(*sim, sim_center, sched.sphere_average);
    const int measurements = sched.sweeps / sched.stride;

    auto worker = [&](int k) {
        Rng rng = Rng::stream(sched.seed, static_cast<std::uint64_t>(k));
        SpinConfig c = make_config(*sim, 1, sched.start, rng);
        for (int i = 0; i < sched.burn_in; ++i)
            swendsen_wang_sweep(c, p.beta, rng);

        std::vector<std::vector<double>> stream(spheres.size());
        for (auto& s : stream) s.reserve(measurements);
        for (int m = 0; m < measurements; ++m) {
            std::vector<VertexId> labels;
            for (int s = 0; s < sched.stride; ++s)
                labels = swendsen_wang_sweep(c, p.beta, rng);
            VertexId lc = labels[sim_center];
            for (std::size_t d = 0; d < spheres.size(); ++d) {
                double sum = 0.0;
                for (VertexId v : spheres[d]) sum += labels[v] == lc ? 1.0 : 0.0;
                stream[d].push_back(sum / static_cast<double>(spheres[d].size()));
            }
        }
        ReplicaStats stats;
        stats.estimate.resize(spheres.size());
        stats.variance.resize(spheres.size());
        for (std::size_t d = 0; d < spheres.size(); ++d) {
            auto [mean, var] = batch_stats(stream[d]);
            stats.estimate[d] = mean;
            stats.variance[d] = var;
        }
        return stats;
    };

    auto stats = run_replicas(sched.replicas, sched.threads, worker);

    CorrelationSeries series;
    series.graph_label = g.label;
    series.algorithm_label = "swendsen_wang";
    series.params = p;
    series.center = center;
    series.schedule = sched;
    merge_replicas(stats,
                   static_cast<std::uint64_t>(sched.replicas) *
                       static_cast<std::uint64_t>(measurements),
                   series);
    return series;
}

CorrelationSeries bernoulli_connectivity(const Graph& g, double prob,
                                         int samples, VertexId center,
                                         Rng& rng) {
    if (!(prob >= 0.0 && prob <= 1.0))
        throw std::invalid_argument("bernoulli_connectivity: prob must be in [0,1]");
    if (samples <= 0)
        throw std::invalid_argument("bernoulli_connectivity: samples must be positive");
    if (center >= g.vertex_count())
        throw std::invalid_argument("bernoulli_connectivity: center out of range");

    const auto spheres = sphere_members(g, center, true);
    const std::size_t nv = g.vertex_count();
    std::vector<double> sum(spheres.size(), 0.0), sumsq(spheres.size(), 0.0);
    for (int s = 0; s < samples; ++s) {
        DisjointSets ds(nv);
        for (VertexId u = 0; u < nv; ++u)
            for (const Edge& e : g.adjacency[u]) {
                if (e.to <= u) continue;
                double open = 1.0 - std::pow(1.0 - prob, static_cast<double>(e.mult));
                if (rng.uniform() < open) ds.unite(u, e.to);
            }
        VertexId root = ds.find(center);
        for (std::size_t d = 0; d < spheres.size(); ++d) {
            double frac = 0.0;
            for (VertexId v : spheres[d]) frac += ds.find(v) == root ? 1.0 : 0.0;
            frac /= static_cast<double>(spheres[d].size());
            sum[d] += frac;
            sumsq[d] += frac * frac;
        }
    }

    CorrelationSeries series;
    series.graph_label = g.label;
    series.algorithm_label = "bernoulli";
    series.params.n = 0;  // no spin model; prob is carried in the beta slot
    series.params.beta = prob;
    series.center = center;
    series.points.resize(spheres.size());
    for (std::size_t d = 0; d < spheres.size(); ++d) {
        double mean = sum[d] / samples;
        double var = samples > 1
                         ? std::max(0.0, (sumsq[d] - samples * mean * mean) /
                                             (static_cast<double>(samples) - 1.0))
                         : 0.0;
        CorrelationPoint& pt = series.points[d];
        pt.distance = static_cast<int>(d);
        pt.estimate = mean;
        pt.std_error = std::sqrt(var / samples);
        pt.samples = static_cast<std::uint64_t>(samples);
    }
    return series;
}

std::string correlation_csv(const CorrelationSeries& s, bool header) {
    std::string out;
    if (header) out += "graph,n,beta,bc,algorithm,distance,estimate,stderr,samples\n";
    for (const CorrelationPoint& pt : s.points) {
        out += s.graph_label;
        out += ',';
        out += std::to_string(s.params.n);
        out += ',';
        out += sig_digits(s.params.beta, 10);
        out += ',';
        out += bc_name(s.params.bc);
        out += ',';
        out += s.algorithm_label;
        out += ',';
        out += std::to_string(pt.distance);
        out += ',';
        out += sig_digits(pt.estimate, 10);
        out += ',';
        out += sig_digits(pt.std_error, 10);
        out += ',';
        out += std::to_string(pt.samples);
        out += '\n';
    }
    return out;
}

}  // namespace hyperspin
