#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperspin/analysis.hpp"
#include "hyperspin/electrical.hpp"
#include "hyperspin/graph.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hyperspin;

namespace {

CorrelationSeries make_series(const std::vector<double>& est,
                              const std::vector<double>& err) {
    CorrelationSeries s;
    s.graph_label = "synthetic";
    s.algorithm_label = "none";
    for (std::size_t d = 0; d < est.size(); ++d) {
        CorrelationPoint pt;
        pt.distance = int(d);
        pt.estimate = est[d];
        pt.std_error = err[d];
        pt.samples = 1000;
        s.points.push_back(pt);
    }
    return s;
}

std::vector<double> geometric(double c, double rate, int dmax) {
    std::vector<double> v;
    for (int d = 0; d <= dmax; ++d) v.push_back(c * std::exp(-rate * d));
    return v;
}

} // namespace

TEST_CASE("fit recovers an exact exponential") {
    CorrelationSeries s = make_series(geometric(1.0, 0.5, 6),
                                      std::vector<double>(7, 1e-6));
    DecayFit f = fit_exponential(s);
    REQUIRE(f.status == FitStatus::ok);
    CHECK(std::abs(f.rate - 0.5) <= 1e-12);
    CHECK(std::abs(f.intercept - 0.0) <= 1e-12);
    CHECK(std::abs(f.r_squared - 1.0) <= 1e-12);
    CHECK(!f.r2_degenerate);
    CHECK(f.distances_used == std::vector<int>{1, 2, 3, 4, 5, 6});
}

TEST_CASE("fit flags a flat series as degenerate") {
    CorrelationSeries s = make_series(std::vector<double>(6, 0.8),
                                      std::vector<double>(6, 1e-4));
    DecayFit f = fit_exponential(s);
    REQUIRE(f.status == FitStatus::ok);
    CHECK(f.rate == 0.0);
    CHECK(f.r2_degenerate);
    CHECK(f.r_squared == 0.0);
}

TEST_CASE("fit matches an independent regression on noisy data") {
    // Fixed multiplicative perturbations around exp(-0.3 d).
    std::vector<double> eps = {0.0, 0.011, -0.008, 0.006, -0.012, 0.009, -0.004};
    std::vector<double> est(7), err(7, 0.0);
    for (int d = 0; d <= 6; ++d) {
        est[d] = std::exp(-0.3 * d) * (1.0 + eps[d]);
        err[d] = 0.01 * est[d];
    }
    CorrelationSeries s = make_series(est, err);
    DecayFit f = fit_exponential(s);
    REQUIRE(f.status == FitStatus::ok);
    CHECK(f.rate >= 0.25);
    CHECK(f.rate <= 0.35);
    CHECK(f.r_squared >= 0.99);

    // Plain least squares over d = 1..6 on the logs, written out directly.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int d = 1; d <= 6; ++d) {
        double x = d, y = std::log(est[d]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++m;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(std::abs(f.rate - (-slope)) <= 1e-12);
}

TEST_CASE("fit reports insufficient data honestly") {
    // Two usable points (d = 0 never counts).
    CorrelationSeries two = make_series({1.0, 0.5, 0.25}, {1e-4, 1e-4, 1e-4});
    DecayFit f2 = fit_exponential(two);
    CHECK(f2.status == FitStatus::insufficient_data);
    CHECK(f2.distances_used.empty());

    // Negative estimates are unusable.
    CorrelationSeries neg =
        make_series({1.0, 0.4, -0.02, -0.01, 0.3}, {1e-4, 1e-4, 1e-4, 1e-4, 1e-4});
    DecayFit fn = fit_exponential(neg);
    CHECK(fn.status == FitStatus::insufficient_data);

    // Relative error >= 1/2 disqualifies a point.
    CorrelationSeries loud =
        make_series({1.0, 0.4, 0.2, 0.1, 0.05}, {0.0, 1e-4, 1e-4, 1e-4, 0.04});
    DecayFit fl = fit_exponential(loud);
    REQUIRE(fl.status == FitStatus::ok);
    CHECK(fl.distances_used == std::vector<int>{1, 2, 3});
}

TEST_CASE("classify: clear decay") {
    CorrelationSeries s = make_series(geometric(1.0, 1.0, 6),
                                      std::vector<double>(7, 1e-5));
    Verdict v = classify(s);
    CHECK(v.kind == VerdictKind::decay);
    CHECK(v.fit.rate == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classify: clear plateau") {
    CorrelationSeries s = make_series(std::vector<double>(7, 0.8),
                                      std::vector<double>(7, 1e-3));
    Verdict v = classify(s);
    CHECK(v.kind == VerdictKind::plateau);
    CHECK(v.plateau_level == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("classify: decay takes precedence when both read true") {
    // Geometric with a high floor: min estimate 0.53 but a solid fit.
    CorrelationSeries s = make_series(geometric(1.0, 0.105, 6),
                                      std::vector<double>(7, 1e-5));
    Verdict v = classify(s);
    CHECK(v.plateau_level >= 0.2);
    CHECK(v.kind == VerdictKind::decay);
}

TEST_CASE("classify: noise is inconclusive") {
    CorrelationSeries s = make_series({1.0, 0.03, -0.02, 0.01, -0.04},
                                      {0.0, 0.05, 0.05, 0.05, 0.05});
    Verdict v = classify(s);
    CHECK(v.kind == VerdictKind::inconclusive);
}

TEST_CASE("classify: a plateau with sloppy errors is inconclusive") {
    CorrelationSeries s = make_series(std::vector<double>(6, 0.5),
                                      std::vector<double>(6, 0.2));
    Verdict v = classify(s);
    CHECK(v.kind == VerdictKind::inconclusive);
}

TEST_CASE("classify respects custom thresholds") {
    CorrelationSeries s = make_series(geometric(0.05, 0.04, 8),
                                      std::vector<double>(9, 1e-6));
    Verdict strict = classify(s);
    CHECK(strict.kind == VerdictKind::inconclusive);  // rate 0.04 < 0.05, level 0.03
    Thresholds lax;
    lax.rate_min = 0.03;
    Verdict v = classify(s, lax);
    CHECK(v.kind == VerdictKind::decay);
}

TEST_CASE("ms bound: zero function gives exactly one") {
    Graph g = build_path(3);
    MSFunction m;
    m.graph = &g;
    m.a.assign(4, 0.0);
    m.x = 0;
    m.y = 3;
    m.gain = 0.0;
    m.distance = 3;
    CHECK(ms_bound(m, 1.0) == 1.0);
    CHECK_THROWS_AS((void)ms_bound(m, 0.0), std::invalid_argument);
}

TEST_CASE("ms bound on paths has the closed form") {
    for (int d : {1, 5, 9}) {
        Graph p = build_path(d);
        MSFunction m = ms_function(p, 0, VertexId(d));
        for (double beta : {0.5, 1.0, 3.0}) {
            double expected =
                std::exp(d * (-0.1 + beta * (std::cosh(0.1) - 1.0)));
            CHECK(ms_bound(m, beta) == doctest::Approx(expected).epsilon(1e-12));
        }
        // Per-edge exponent at beta 1 is about -0.0950.
        double per_edge = std::log(ms_bound(m, 1.0)) / d;
        CHECK(std::abs(per_edge - (-0.09499583)) <= 1e-6);
        // The doubled loss factor only weakens the bound.
        CHECK(ms_bound(m, 1.0, 2.0) >= ms_bound(m, 1.0, 1.0));
        CHECK(ms_bound(m, 1.0) > 0.0);
    }
}

TEST_CASE("ms bound shrinks with distance on the tiling") {
    Graph g = build_triangulation(7, 5);
    std::vector<int> dist = bfs_distances(g, 0);
    std::vector<double> bounds;
    for (int d = 1; d <= 5; ++d) {
        VertexId y = 0;
        while (dist[y] != d) ++y;
        MSFunction m = ms_function(g, 0, y);
        double b = ms_bound(m, 1.0);
        CHECK(b > 0.0);
        CHECK(b < 1.0);  // the optimiser guarantee: the exponent is negative
        bounds.push_back(b);
    }
    CHECK(bounds.back() < bounds.front());
}

TEST_CASE("magnetisation proxy: constant series on a path") {
    CorrelationSeries s = make_series(std::vector<double>(6, 1.0),
                                      std::vector<double>(6, 0.0));
    std::vector<int> spheres(6, 1);
    MagnetisationProxy m = magnetisation_proxy(s, spheres);
    CHECK(m.total == doctest::Approx(6.0).epsilon(1e-12));
    REQUIRE(m.products.size() == 6);
    for (double p : m.products) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("magnetisation proxy: growth exactly cancelling decay") {
    std::vector<double> est;
    std::vector<int> spheres;
    for (int d = 0; d <= 5; ++d) {
        est.push_back(std::pow(2.0, -d));
        spheres.push_back(1 << d);
    }
    CorrelationSeries s = make_series(est, std::vector<double>(6, 0.0));
    MagnetisationProxy m = magnetisation_proxy(s, spheres);
    CHECK(m.total == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("magnetisation proxy matches direct summation") {
    std::vector<double> est = {1.0, 0.7, 0.41, 0.22, 0.13};
    std::vector<int> spheres = {1, 7, 21, 56, 147};
    CorrelationSeries s = make_series(est, std::vector<double>(5, 0.01));
    MagnetisationProxy m = magnetisation_proxy(s, spheres);
    double direct = 0.0;
    for (int d = 0; d <= 4; ++d) direct += spheres[d] * est[d];
    CHECK(m.total == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("magnetisation proxy rejects mismatched spheres") {
    CorrelationSeries s = make_series({1.0, 0.5, 0.25}, {0.0, 0.0, 0.0});
    std::vector<int> spheres = {1, 2};  // no entry for distance 2
    CHECK_THROWS_AS((void)magnetisation_proxy(s, spheres), std::invalid_argument);
}
