#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperspin/analysis.hpp"
#include "hyperspin/graph.hpp"
#include "hyperspin/spinmc.hpp"

namespace hyperspin {

// Parse or validation failure; `line` is 1-based, 0 when no single line is
// at fault (e.g. a missing required key).
struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int at, const std::string& message)
        : std::runtime_error(at > 0 ? "config line " + std::to_string(at) +
                                          ": " + message
                                    : "config: " + message),
          line(at) {}
};

struct GraphSection {
    std::string type;  // triangulation | ringed_tree | path | cycle | tree | grid | complete
    int q = 7;         // triangulation
    int radius = 5;    // triangulation
    int depth = 6;     // ringed_tree, tree
    int branching = 2; // tree
    int length = 10;   // path (edge count)
    int size = 10;     // cycle, complete
    int side = 41;     // grid
    RingClosure closure = RingClosure::path;  // ringed_tree generations
};

struct ModelSection {
    std::vector<int> n_values;   // model.n, space-separated list
    std::vector<double> betas;   // model.beta, space-separated list
    BoundaryCondition bc = BoundaryCondition::free_bc;
    WiredSpins wired_spins = WiredSpins::contract;
};

struct McSection {
    Algorithm algorithm = Algorithm::wolff;
    int burn_in = 500;
    int sweeps = 4000;
    int stride = 1;
    int replicas = 4;
    std::uint64_t seed = 0;  // required
    Start start = Start::hot;
    bool sphere_average = true;
    int threads = 1;  // affects speed only, never output bytes
    VertexId center = 0;
};

struct AnalysisSection {
    Thresholds thresholds;
    double loss_factor = 1.0;  // ms_bound loss coefficient multiplier
};

struct OutputSection {
    std::string directory = "out";
};

// Declarative experiment description, `section.key = value` per line with
// `#` comments. Required keys: graph.type, model.n, model.beta, mc.seed;
// everything else has the documented default.
struct ExperimentConfig {
    GraphSection graph;
    ModelSection model;
    McSection mc;
    AnalysisSection analysis;
    OutputSection output;
};

// Throws ConfigError (with line number) on unknown key, type mismatch,
// duplicate key, constraint violation, or missing required key.
ExperimentConfig parse_config(const std::string& text);

// Canonical text form with every default explicit; parse(serialize(c))
// reproduces c exactly, and serialize is a fixed point on parsed text.
std::string serialize_config(const ExperimentConfig& cfg);

// Builds the graph a section describes (dispatch over graph.type).
Graph build_graph(const GraphSection& gs);

// The Monte Carlo schedule a section describes.
McSchedule to_schedule(const McSection& mc);

}  // namespace hyperspin
