#include "hyperspin/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperspin {

DecayFit fit_exponential(const CorrelationSeries& series) {
    DecayFit fit;
    std::vector<double> xs, ys;
    for (const CorrelationPoint& pt : series.points) {
        if (pt.distance <= 0) continue;
        if (!(pt.estimate > 0.0)) continue;
        if (!(pt.std_error / pt.estimate < 0.5)) continue;
        xs.push_back(pt.distance);
        ys.push_back(std::log(pt.estimate));
        fit.distances_used.push_back(pt.distance);
    }
    const std::size_t m = xs.size();
    if (m < 3) {
        fit.distances_used.clear();
        return fit;  // insufficient data
    }
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double slope = sxy / sxx;
    fit.status = FitStatus::ok;
    fit.rate = std::max(0.0, -slope);
    fit.intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = ys[i] - (fit.intercept + slope * xs[i]);
        ss_res += r * r;
    }
    if (syy <= 1e-24) {
        fit.r2_degenerate = true;
        fit.r_squared = 0.0;
    } else {
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

Verdict classify(const CorrelationSeries& series, const Thresholds& thresholds) {
    Verdict verdict;
    verdict.fit = fit_exponential(series);

    bool any = false;
    double min_estimate = 0.0, max_error = 0.0;
    for (const CorrelationPoint& pt : series.points) {
        if (pt.distance <= 0) continue;
        if (!any || pt.estimate < min_estimate) min_estimate = pt.estimate;
        if (pt.std_error > max_error) max_error = pt.std_error;
        any = true;
    }
    verdict.plateau_level = any ? min_estimate : 0.0;

    if (verdict.fit.status == FitStatus::ok &&
        verdict.fit.rate > thresholds.rate_min &&
        verdict.fit.r_squared >= thresholds.r2_min) {
        verdict.kind = VerdictKind::decay;
    } else if (any && min_estimate >= thresholds.level_min &&
               max_error < thresholds.level_min / 3.0) {
        verdict.kind = VerdictKind::plateau;
    } else {
        verdict.kind = VerdictKind::inconclusive;
    }
    return verdict;
}

double ms_bound(const MSFunction& msf, double beta, double loss_factor) {
    if (!(beta > 0.0)) throw std::invalid_argument("ms_bound: beta must be > 0");
    const Graph& g = *msf.graph;
    double loss = 0.0;
    for (VertexId u = 0; u < g.vertex_count(); ++u)
        for (const Edge& e : g.adjacency[u]) {
            if (e.to <= u) continue;
            double da = msf.a[u] - msf.a[e.to];
            loss += static_cast<double>(e.mult) * (std::cosh(da) - 1.0);
        }
    return std::exp(-msf.gain + loss_factor * beta * loss);
}

MagnetisationProxy magnetisation_proxy(const CorrelationSeries& series,
                                       const std::vector<int>& spheres) {
    MagnetisationProxy proxy;
    for (const CorrelationPoint& pt : series.points) {
        if (pt.distance < 0 ||
            static_cast<std::size_t>(pt.distance) >= spheres.size())
            throw std::invalid_argument(
                "magnetisation_proxy: series and sphere sizes cover different distances");
        double product = spheres[pt.distance] * pt.estimate;
        proxy.products.push_back(product);
        proxy.total += product;
    }
    return proxy;
}

}  // namespace hyperspin
