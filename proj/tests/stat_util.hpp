#pragma once

// Small statistics helpers shared by the test suites.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace testutil {

// Regularized incomplete gamma functions, series + continued fraction.
inline double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1e300;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::abs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Q(a, x) = upper regularized incomplete gamma.
inline double gamma_q(double a, double x) {
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

// p-value of a chi-squared statistic with `df` degrees of freedom.
inline double chi2_pvalue(double chi2, int df) {
    return gamma_q(0.5 * df, 0.5 * chi2);
}

// Pearson chi-squared with pooling of low-expectation bins (< 5 expected).
// Returns {p_value, effective_df}.
inline std::pair<double, int> chi2_test(const std::vector<double>& observed,
                                        const std::vector<double>& expected) {
    double pool_obs = 0.0;
    double pool_exp = 0.0;
    double stat = 0.0;
    int bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < 5.0) {
            pool_obs += observed[i];
            pool_exp += expected[i];
        } else {
            double d = observed[i] - expected[i];
            stat += d * d / expected[i];
            ++bins;
        }
    }
    if (pool_exp > 0.0) {
        double d = pool_obs - pool_exp;
        stat += d * d / pool_exp;
        ++bins;
    }
    int df = bins > 1 ? bins - 1 : 1;
    return {chi2_pvalue(stat, df), df};
}

} // namespace testutil
