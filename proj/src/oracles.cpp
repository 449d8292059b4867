#include "hyperspin/oracles.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hyperspin {

ExactResult brute_force_ising(const Graph& g, double beta, VertexId x, VertexId y) {
    const std::size_t n = g.vertex_count();
    if (n > 20)
        throw std::invalid_argument("brute_force_ising: more than 20 vertices");
    if (x >= n || y >= n)
        throw std::invalid_argument("brute_force_ising: vertex out of range");

    // All-up is a ground state of the ferromagnet, so H - H_min >= 0 and the
    // shifted weights exp(-beta*(H - H_min)) never overflow.
    const double h_min = -static_cast<double>(g.total_multiplicity());
    std::vector<int> spin(n, 1);
    double h = h_min;
    double z = 0.0, num = 0.0;

    const std::uint64_t states = 1ull << n;
    for (std::uint64_t k = 0;; ++k) {
        double w = std::exp(-beta * (h - h_min));
        z += w;
        num += w * spin[x] * spin[y];
        if (k + 1 == states) break;
        // Gray code: state k+1 differs from k in bit ctz(k+1).
        VertexId v = static_cast<VertexId>(std::countr_zero(k + 1));
        double local = 0.0;
        for (const Edge& e : g.adjacency[v])
            local += static_cast<double>(e.mult) * spin[e.to];
        h += 2.0 * spin[v] * local;
        spin[v] = -spin[v];
    }
    double eps = std::numeric_limits<double>::epsilon();
    return {num / z, "gray_code_enumeration",
            4.0 * static_cast<double>(states) * eps};
}

namespace {

// Composite Simpson on [0, pi] for f, doubling panels until two successive
// estimates agree to `delta`; returns (estimate, last refinement delta).
template <typename F>
std::pair<double, double> simpson_doubling(F f, double delta) {
    const double pi = 3.14159265358979323846;
    auto composite = [&](int panels) {
        double hstep = pi / panels;
        double acc = f(0.0) + f(pi);
        for (int i = 1; i < panels; ++i)
            acc += f(i * hstep) * (i % 2 == 1 ? 4.0 : 2.0);
        return acc * hstep / 3.0;
    };
    int panels = 8;
    double prev = composite(panels);
    for (int round = 0; round < 24; ++round) {
        panels *= 2;
        double cur = composite(panels);
        double diff = std::abs(cur - prev);
        if (diff < delta) return {cur, diff};
        prev = cur;
    }
    return {prev, std::numeric_limits<double>::infinity()};
}

}  // namespace

ExactResult bessel_ratio(double beta) {
    if (beta < 0) throw std::invalid_argument("bessel_ratio: beta must be >= 0");
    // Integrands shifted by e^{-beta} so the peak value is 1 at any beta.
    auto weight = [beta](double t) { return std::exp(beta * (std::cos(t) - 1.0)); };
    auto numer = [&](double t) { return std::cos(t) * weight(t); };
    auto [den, dden] = simpson_doubling(weight, 1e-11);
    auto [num, dnum] = simpson_doubling(numer, 1e-11);
    double value = num / den;
    double bound = (dnum + std::abs(value) * dden) / den + 1e-13;
    return {value, "adaptive_simpson", bound};
}

ExactResult o2_path_correlation(int d, double beta) {
    if (d < 0) throw std::invalid_argument("o2_path_correlation: d must be >= 0");
    ExactResult r = bessel_ratio(beta);
    double value = std::pow(r.value, d);
    double bound = d == 0 ? 0.0
                          : d * std::pow(std::abs(r.value), d - 1) * r.error_bound +
                                1e-14;
    return {value, "bessel_ratio_power", bound};
}

ExactResult dense_resistance(const Graph& g, VertexId x, VertexId y) {
    const std::size_t n = g.vertex_count();
    if (n > 50)
        throw std::invalid_argument("dense_resistance: more than 50 vertices");
    if (x >= n || y >= n || x == y)
        throw std::invalid_argument("dense_resistance: bad terminal pair");

    // Grounded Laplacian: strike row/column x, solve L' phi = e_y by
    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> idx;
    for (VertexId v = 0; v < n; ++v)
        if (v != x) idx.push_back(v);
    const std::size_t m = idx.size();
    std::vector<double> a(m * m, 0.0), b(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        VertexId u = static_cast<VertexId>(idx[i]);
        a[i * m + i] = g.degree(u);
        for (const Edge& e : g.adjacency[u]) {
            if (e.to == x) continue;
            std::size_t j =
                std::lower_bound(idx.begin(), idx.end(), e.to) - idx.begin();
            a[i * m + j] -= static_cast<double>(e.mult);
        }
        if (u == y) b[i] = 1.0;
    }
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
        if (std::abs(a[piv * m + col]) < 1e-14)
            throw std::runtime_error("dense_resistance: singular system (disconnected?)");
        if (piv != col) {
            for (std::size_t c = 0; c < m; ++c) std::swap(a[piv * m + c], a[col * m + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r * m + col] / a[col * m + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < m; ++c) a[r * m + c] -= f * a[col * m + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> phi_reduced(m, 0.0);
    for (std::size_t r = m; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < m; ++c) acc -= a[r * m + c] * phi_reduced[c];
        phi_reduced[r] = acc / a[r * m + r];
    }
    std::vector<double> phi(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) phi[idx[i]] = phi_reduced[i];

    // Honest bound from the full-system residual.
    double worst = 0.0;
    for (VertexId u = 0; u < n; ++u) {
        double net = 0.0;
        for (const Edge& e : g.adjacency[u])
            net += static_cast<double>(e.mult) * (phi[u] - phi[e.to]);
        double target = u == y ? 1.0 : (u == x ? -1.0 : 0.0);
        worst = std::max(worst, std::abs(net - target));
    }
    return {phi[y] - phi[x], "dense_elimination",
            10.0 * static_cast<double>(n) * worst +
                1e-14 * std::abs(phi[y] - phi[x])};
}

}  // namespace hyperspin
