#pragma once

#include <vector>

#include "hyperspin/electrical.hpp"
#include "hyperspin/spinmc.hpp"

namespace hyperspin {

enum class FitStatus { ok, insufficient_data };

struct DecayFit {
    FitStatus status = FitStatus::insufficient_data;
    double rate = 0.0;       // decay per unit distance, >= 0 (clipped)
    double intercept = 0.0;  // of the log-linear fit
    double r_squared = 0.0;
    bool r2_degenerate = false;  // input flat: no variance to explain
    std::vector<int> distances_used;
};

// Least-squares line on (d, log estimate) over the usable points: d > 0,
// estimate > 0, relative error < 1/2. Fewer than three usable points yields
// an explicit insufficient-data result.
DecayFit fit_exponential(const CorrelationSeries& series);

struct Thresholds {
    double rate_min = 0.05;
    double r2_min = 0.9;
    double level_min = 0.2;
};

enum class VerdictKind { decay, plateau, inconclusive };

inline const char* verdict_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::decay: return "decay";
        case VerdictKind::plateau: return "plateau";
        default: return "inconclusive";
    }
}

struct Verdict {
    VerdictKind kind = VerdictKind::inconclusive;
    DecayFit fit;                // supporting numbers for decay
    double plateau_level = 0.0;  // min estimate over d >= 1
};

// Decay: fitted rate > rate_min with r_squared >= r2_min. Plateau: minimum
// estimate over the tested distances >= level_min with every standard error
// below level_min/3. Otherwise inconclusive.
Verdict classify(const CorrelationSeries& series, const Thresholds& thresholds = {});

// exp(-(a(y)-a(x)) + loss_factor * beta * sum_{u~v} mult (cosh(a(u)-a(v)) - 1)).
// With loss_factor 1 this is the sharp complex-translation bound dominating
// the n=2 pair correlation at (x,y); loss_factor 2 is the conservative
// sensitivity switch.
double ms_bound(const MSFunction& msf, double beta, double loss_factor = 1.0);

struct MagnetisationProxy {
    double total = 0.0;            // sum of the products below
    std::vector<double> products;  // sphere(d) * estimate(d), one per point
};

// Finite-ball susceptibility proxy: sum_d |sphere(d)| * estimate(d) over the
// series' distances (d = 0 included), exposing the growth-vs-decay
// competition term by term. `spheres` is indexed by distance.
MagnetisationProxy magnetisation_proxy(const CorrelationSeries& series,
                                       const std::vector<int>& spheres);

}  // namespace hyperspin
