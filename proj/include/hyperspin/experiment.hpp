#pragma once

#include <string>
#include <vector>

#include "hyperspin/config.hpp"

namespace hyperspin {

struct ExperimentPaths {
    std::string directory;
    std::string config_resolved;
    std::string resistance_csv;
    std::string msfn_csv;
    std::string correlations_csv;
    std::string verdicts_csv;
    std::string magnetisation_csv;
};

// Runs the full pipeline the config describes into output.directory: the
// graph, resistance profiles (free and wired), the McBryan-Spencer function
// report, one correlation series per (n, beta) cell, verdicts with the MS
// bound for n >= 2, and the magnetisation proxy. Outputs are byte-identical
// for identical (config, seed) at any thread count. Failures carry the
// experiment stage in the message.
ExperimentPaths run_experiment(const ExperimentConfig& cfg);

// Reads rows in the correlations.csv schema back into series, grouped by
// (graph, n, beta, bc, algorithm) in first-appearance order. Throws
// std::runtime_error on schema violations.
std::vector<CorrelationSeries> parse_correlations_csv(const std::string& text);

}  // namespace hyperspin
