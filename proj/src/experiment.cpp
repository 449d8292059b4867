#include "hyperspin/experiment.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyperspin/electrical.hpp"
#include "hyperspin/text.hpp"

namespace hyperspin {

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out.good())
        throw std::runtime_error("cannot write " + path);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

ExperimentPaths run_experiment(const ExperimentConfig& cfg) {
    const Graph g = stage("graph", [&] { return build_graph(cfg.graph); });
    const VertexId center = cfg.mc.center;
    if (center >= g.vertex_count())
        throw std::runtime_error("stage graph: mc.center " + std::to_string(center) +
                                 " out of range (graph has " +
                                 std::to_string(g.vertex_count()) + " vertices)");

    ExperimentPaths paths;
    paths.directory = cfg.output.directory;
    paths.config_resolved = paths.directory + "/config.resolved";
    paths.resistance_csv = paths.directory + "/resistance.csv";
    paths.msfn_csv = paths.directory + "/msfn.csv";
    paths.correlations_csv = paths.directory + "/correlations.csv";
    paths.verdicts_csv = paths.directory + "/verdicts.csv";
    paths.magnetisation_csv = paths.directory + "/magnetisation.csv";

    stage("output", [&] {
        std::filesystem::create_directories(paths.directory);
        write_file(paths.config_resolved, serialize_config(cfg));
        return 0;
    });

    // Resistance profiles, free and (when meaningful) wired.
    stage("resistance", [&] {
        std::string csv = "graph,bc,distance,resistance\n";
        auto emit = [&](BoundaryCondition bc) {
            for (const auto& [d, r] : resistance_profile(g, center, bc)) {
                csv += g.label;
                csv += ',';
                csv += bc_name(bc);
                csv += ',';
                csv += std::to_string(d);
                csv += ',';
                csv += sig_digits(r, 12);
                csv += '\n';
            }
        };
        if (g.max_ring() >= 1) {
            emit(BoundaryCondition::free_bc);
            if (!g.is_boundary(center)) emit(BoundaryCondition::wired);
        }
        write_file(paths.resistance_csv, csv);
        return 0;
    });

    // McBryan-Spencer certificates from the center to the canonical vertex
    // at each distance; the farthest one also feeds the verdict bound.
    std::vector<MSFunction> certificates;
    stage("ms_function", [&] {
        std::string csv =
            "graph,distance,lambda,c1,gain,energy,max_gradient,ok_gain,ok_energy,ok_gradient\n";
        std::vector<int> dist = bfs_distances(g, center);
        int dmax = 0;
        for (int d : dist) dmax = std::max(dmax, d);
        for (int d = 1; d <= dmax; ++d) {
            VertexId target = 0;
            for (VertexId v = 0; v < g.vertex_count(); ++v)
                if (dist[v] == d) {
                    target = v;
                    break;
                }
            MSFunction msf = ms_function(g, center, target);
            bool ok_gain = msf.gain >= msf.c1 * msf.distance && msf.c1 > 0.0;
            bool ok_energy = msf.energy <= 0.5 * msf.gain;
            bool ok_gradient = msf.max_gradient <= 0.1;
            csv += g.label;
            csv += ',';
            csv += std::to_string(d);
            csv += ',';
            csv += sig_digits(msf.lambda, 12);
            csv += ',';
            csv += sig_digits(msf.c1, 12);
            csv += ',';
            csv += sig_digits(msf.gain, 12);
            csv += ',';
            csv += sig_digits(msf.energy, 12);
            csv += ',';
            csv += sig_digits(msf.max_gradient, 12);
            csv += ',';
            csv += ok_gain ? "true" : "false";
            csv += ',';
            csv += ok_energy ? "true" : "false";
            csv += ',';
            csv += ok_gradient ? "true" : "false";
            csv += '\n';
            certificates.push_back(std::move(msf));
        }
        write_file(paths.msfn_csv, csv);
        return 0;
    });

    // Sphere sizes of the graph the chains actually simulate (binning match).
    const bool contracts = cfg.model.bc == BoundaryCondition::wired &&
                           cfg.model.wired_spins == WiredSpins::contract;
    std::vector<int> spheres = stage("simulate", [&] {
        if (!contracts) return sphere_sizes(g, center);
        if (g.is_boundary(center))
            throw std::runtime_error("mc.center lies in the wired boundary");
        return sphere_sizes(contract_boundary(g), contracted_id(g, center));
    });

    // One correlation series per (n, beta) cell, deterministic cell seeds.
    std::vector<ChainResult> cells;
    stage("simulate", [&] {
        for (std::size_t i_n = 0; i_n < cfg.model.n_values.size(); ++i_n)
            for (std::size_t i_b = 0; i_b < cfg.model.betas.size(); ++i_b) {
                ModelParams params;
                params.n = cfg.model.n_values[i_n];
                params.beta = cfg.model.betas[i_b];
                params.bc = cfg.model.bc;
                params.wired_spins = cfg.model.wired_spins;
                McSchedule sched = to_schedule(cfg.mc);
                std::uint64_t cell = i_n * cfg.model.betas.size() + i_b;
                sched.seed = Rng::stream_seed(cfg.mc.seed, cell);
                cells.push_back(run_chain(g, params, sched, center));
            }
        std::string csv;
        for (std::size_t i = 0; i < cells.size(); ++i)
            csv += correlation_csv(cells[i].series, i == 0);
        write_file(paths.correlations_csv, csv);
        return 0;
    });

    stage("verdicts", [&] {
        std::string csv =
            "graph,n,beta,bc,verdict,rate,r_squared,plateau_level,ms_bound_at_max_d\n";
        for (const ChainResult& cell : cells) {
            const CorrelationSeries& s = cell.series;
            Verdict verdict = classify(s, cfg.analysis.thresholds);
            csv += s.graph_label;
            csv += ',';
            csv += std::to_string(s.params.n);
            csv += ',';
            csv += sig_digits(s.params.beta, 10);
            csv += ',';
            csv += bc_name(s.params.bc);
            csv += ',';
            csv += verdict_name(verdict.kind);
            csv += ',';
            if (verdict.fit.status == FitStatus::ok) {
                csv += sig_digits(verdict.fit.rate, 10);
                csv += ',';
                csv += sig_digits(verdict.fit.r_squared, 10);
            } else {
                csv += ',';
            }
            csv += ',';
            csv += sig_digits(verdict.plateau_level, 10);
            csv += ',';
            if (s.params.n >= 2 && !certificates.empty()) {
                int max_d = 0;
                for (const CorrelationPoint& pt : s.points)
                    max_d = std::max(max_d, pt.distance);
                std::size_t pick =
                    std::min(certificates.size(), static_cast<std::size_t>(
                                                      std::max(1, max_d))) - 1;
                csv += sig_digits(ms_bound(certificates[pick], s.params.beta,
                                           cfg.analysis.loss_factor),
                                  10);
            }
            csv += '\n';
        }
        write_file(paths.verdicts_csv, csv);
        return 0;
    });

    stage("magnetisation", [&] {
        std::string csv = "graph,n,beta,bc,distance,sphere_size,estimate,product\n";
        for (const ChainResult& cell : cells) {
            const CorrelationSeries& s = cell.series;
            MagnetisationProxy proxy = magnetisation_proxy(s, spheres);
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                const CorrelationPoint& pt = s.points[i];
                csv += s.graph_label;
                csv += ',';
                csv += std::to_string(s.params.n);
                csv += ',';
                csv += sig_digits(s.params.beta, 10);
                csv += ',';
                csv += bc_name(s.params.bc);
                csv += ',';
                csv += std::to_string(pt.distance);
                csv += ',';
                csv += std::to_string(spheres[pt.distance]);
                csv += ',';
                csv += sig_digits(pt.estimate, 10);
                csv += ',';
                csv += sig_digits(proxy.products[i], 10);
                csv += '\n';
            }
        }
        write_file(paths.magnetisation_csv, csv);
        return 0;
    });

    return paths;
}

std::vector<CorrelationSeries> parse_correlations_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("correlations csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "graph,n,beta,bc,algorithm,distance,estimate,stderr,samples")
        throw std::runtime_error("correlations csv: unexpected header `" + line + "`");

    std::vector<CorrelationSeries> series;
    auto as_double = [](const std::string& f, const char* what) {
        double out{};
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
        if (ec != std::errc{} || p != f.data() + f.size())
            throw std::runtime_error(std::string("correlations csv: bad ") + what +
                                     " `" + f + "`");
        return out;
    };
    auto as_ll = [](const std::string& f, const char* what) {
        long long out{};
        auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
        if (ec != std::errc{} || p != f.data() + f.size())
            throw std::runtime_error(std::string("correlations csv: bad ") + what +
                                     " `" + f + "`");
        return out;
    };

    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split_csv(line);
        if (f.size() != 9)
            throw std::runtime_error("correlations csv row " + std::to_string(row) +
                                     ": expected 9 fields, got " +
                                     std::to_string(f.size()));
        int n = static_cast<int>(as_ll(f[1], "n"));
        double beta = as_double(f[2], "beta");
        BoundaryCondition bc;
        if (f[3] == "free")
            bc = BoundaryCondition::free_bc;
        else if (f[3] == "wired")
            bc = BoundaryCondition::wired;
        else
            throw std::runtime_error("correlations csv row " + std::to_string(row) +
                                     ": bad bc `" + f[3] + "`");
        CorrelationPoint pt;
        pt.distance = static_cast<int>(as_ll(f[5], "distance"));
        pt.estimate = as_double(f[6], "estimate");
        pt.std_error = as_double(f[7], "stderr");
        long long samples = as_ll(f[8], "samples");
        if (samples < 0)
            throw std::runtime_error("correlations csv row " + std::to_string(row) +
                                     ": negative sample count");
        pt.samples = static_cast<std::uint64_t>(samples);

        CorrelationSeries* group = nullptr;
        for (CorrelationSeries& s : series)
            if (s.graph_label == f[0] && s.params.n == n &&
                s.params.beta == beta && s.params.bc == bc &&
                s.algorithm_label == f[4]) {
                group = &s;
                break;
            }
        if (group == nullptr) {
            series.emplace_back();
            group = &series.back();
            group->graph_label = f[0];
            group->algorithm_label = f[4];
            group->params.n = n;
            group->params.beta = beta;
            group->params.bc = bc;
        }
        group->points.push_back(pt);
    }
    return series;
}

}  // namespace hyperspin
