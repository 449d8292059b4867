#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperspin/analysis.hpp"
#include "hyperspin/config.hpp"
#include "hyperspin/electrical.hpp"
#include "hyperspin/experiment.hpp"
#include "hyperspin/graph.hpp"
#include "hyperspin/oracles.hpp"
#include "hyperspin/spinmc.hpp"
#include "hyperspin/text.hpp"

namespace {

using namespace hyperspin;

// Graph selection flags shared by the one-shot subcommands.
void add_graph_flags(CLI::App* cmd, GraphSection& gs) {
    cmd->add_option("--type", gs.type, "graph kind")
        ->required()
        ->check(CLI::IsMember({"triangulation", "ringed_tree", "path", "cycle",
                               "tree", "grid", "complete"}));
    cmd->add_option("--q", gs.q, "triangulation vertex degree (>= 7)");
    cmd->add_option("--radius", gs.radius, "triangulation ball radius");
    cmd->add_option("--depth", gs.depth, "tree / ringed_tree depth");
    cmd->add_option("--branching", gs.branching, "tree branching factor");
    cmd->add_option("--length", gs.length, "path edge count");
    cmd->add_option("--size", gs.size, "cycle / complete vertex count");
    cmd->add_option("--side", gs.side, "grid side length");
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << content;
    if (!out.good())
        throw std::runtime_error("cannot write " + out_path);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) throw ConfigError(0, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string print_exact(const ExactResult& r) {
    return "value = " + sig_digits(r.value, 17) + "\nerror_bound = " +
           sig_digits(r.error_bound, 3) + "\nmethod = " + r.method + "\n";
}

BoundaryCondition bc_from(const std::string& name) {
    return name == "wired" ? BoundaryCondition::wired
                           : BoundaryCondition::free_bc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "hyperspin: O(n) spin models, effective resistance, and decay/plateau "
        "verdicts on hyperbolic balls"};
    app.require_subcommand(1);

    std::vector<std::pair<CLI::App*, std::function<void()>>> actions;
    auto act = [&](CLI::App* cmd, std::function<void()> fn) {
        actions.emplace_back(cmd, std::move(fn));
    };

    // graph build
    auto* graph_cmd = app.add_subcommand("graph", "graph construction");
    graph_cmd->require_subcommand(1);
    {
        auto gs = std::make_shared<GraphSection>();
        auto out = std::make_shared<std::string>();
        auto* build = graph_cmd->add_subcommand("build", "build a graph and dump its edge list");
        add_graph_flags(build, *gs);
        build->add_option("--out", *out, "output file (default stdout)");
        act(build, [gs, out] { emit(*out, dump_edge_list(build_graph(*gs))); });
    }

    // resist
    {
        auto gs = std::make_shared<GraphSection>();
        auto bc = std::make_shared<std::string>("free");
        auto center = std::make_shared<unsigned long long>(0);
        auto tolerance = std::make_shared<double>(1e-10);
        auto out = std::make_shared<std::string>();
        auto* resist = app.add_subcommand("resist", "effective-resistance profile from a center vertex");
        add_graph_flags(resist, *gs);
        resist->add_option("--bc", *bc, "boundary condition")
            ->check(CLI::IsMember({"free", "wired"}));
        resist->add_option("--center", *center, "center vertex id");
        resist->add_option("--tolerance", *tolerance, "solver tolerance");
        resist->add_option("--out", *out, "output file (default stdout)");
        act(resist, [=] {
            Graph g = build_graph(*gs);
            std::string csv = "graph,bc,distance,resistance\n";
            for (const auto& [d, r] : resistance_profile(
                     g, static_cast<VertexId>(*center), bc_from(*bc), *tolerance)) {
                csv += g.label + "," + *bc + "," + std::to_string(d) + "," +
                       sig_digits(r, 12) + "\n";
            }
            emit(*out, csv);
        });
    }

    // msfn
    {
        auto gs = std::make_shared<GraphSection>();
        auto x = std::make_shared<unsigned long long>(0);
        auto y = std::make_shared<long long>(-1);
        auto distance = std::make_shared<int>(-1);
        auto out = std::make_shared<std::string>();
        auto* msfn = app.add_subcommand(
            "msfn", "McBryan-Spencer function certificate for a vertex pair");
        add_graph_flags(msfn, *gs);
        msfn->add_option("--x", *x, "source vertex id");
        msfn->add_option("--y", *y, "target vertex id");
        msfn->add_option("--distance", *distance,
                         "target the canonical (smallest-id) vertex at this distance from --x");
        msfn->add_option("--out", *out, "output file (default stdout)");
        act(msfn, [=] {
            Graph g = build_graph(*gs);
            VertexId target;
            if (*y >= 0) {
                target = static_cast<VertexId>(*y);
            } else if (*distance >= 1) {
                std::vector<int> dist = bfs_distances(g, static_cast<VertexId>(*x));
                VertexId found = static_cast<VertexId>(g.vertex_count());
                for (VertexId v = 0; v < g.vertex_count(); ++v)
                    if (dist[v] == *distance) {
                        found = v;
                        break;
                    }
                if (found == g.vertex_count())
                    throw ConfigError(0, "msfn: no vertex at distance " +
                                             std::to_string(*distance));
                target = found;
            } else {
                throw ConfigError(0, "msfn: give --y or --distance");
            }
            MSFunction msf = ms_function(g, static_cast<VertexId>(*x), target);
            std::string text;
            text += "graph = " + g.label + "\n";
            text += "pair = " + std::to_string(msf.x) + " -> " + std::to_string(msf.y) +
                    " (distance " + std::to_string(msf.distance) + ")\n";
            text += "lambda = " + sig_digits(msf.lambda, 12) + "\n";
            text += "c1 = " + sig_digits(msf.c1, 12) + "\n";
            text += "gain = " + sig_digits(msf.gain, 12) + "\n";
            text += "energy = " + sig_digits(msf.energy, 12) + "\n";
            text += "max_gradient = " + sig_digits(msf.max_gradient, 12) + "\n";
            bool ok1 = msf.c1 > 0.0 && msf.gain >= msf.c1 * msf.distance;
            bool ok2 = msf.energy <= 0.5 * msf.gain;
            bool ok3 = msf.max_gradient <= 0.1;
            text += std::string("gain_linear_in_distance = ") + (ok1 ? "true" : "false") + "\n";
            text += std::string("energy_at_most_half_gain = ") + (ok2 ? "true" : "false") + "\n";
            text += std::string("gradient_at_most_tenth = ") + (ok3 ? "true" : "false") + "\n";
            emit(*out, text);
        });
    }

    // simulate
    {
        auto gs = std::make_shared<GraphSection>();
        struct SimFlags {
            int n = 1;
            double beta = 1.0;
            std::string bc = "free";
            std::string model = "spin";
            std::string algorithm = "wolff";
            std::string start = "hot";
            int burn_in = 500, sweeps = 4000, stride = 1, replicas = 4, threads = 1;
            unsigned long long seed = 1, center = 0;
            bool canonical = false;
            double prob = 0.5;
            int samples = 1000;
            std::string out;
        };
        auto f = std::make_shared<SimFlags>();
        auto* sim = app.add_subcommand("simulate", "Monte Carlo correlation estimates");
        add_graph_flags(sim, *gs);
        sim->add_option("--n", f->n, "spin dimension");
        sim->add_option("--beta", f->beta, "inverse temperature");
        sim->add_option("--bc", f->bc)->check(CLI::IsMember({"free", "wired"}));
        sim->add_option("--model", f->model, "spin correlations, FK connectivity, or Bernoulli percolation")
            ->check(CLI::IsMember({"spin", "fk", "bernoulli"}));
        sim->add_option("--algorithm", f->algorithm)
            ->check(CLI::IsMember({"metropolis", "wolff", "mixed"}));
        sim->add_option("--start", f->start)->check(CLI::IsMember({"hot", "cold"}));
        sim->add_option("--burn-in", f->burn_in);
        sim->add_option("--sweeps", f->sweeps);
        sim->add_option("--stride", f->stride);
        sim->add_option("--replicas", f->replicas);
        sim->add_option("--threads", f->threads);
        sim->add_option("--seed", f->seed);
        sim->add_option("--center", f->center);
        sim->add_flag("--canonical", f->canonical,
                      "bin against the canonical vertex per distance instead of the sphere average");
        sim->add_option("--prob", f->prob, "bernoulli edge probability");
        sim->add_option("--samples", f->samples, "bernoulli sample count");
        sim->add_option("--out", f->out, "output file (default stdout)");
        act(sim, [gs, f] {
            Graph g = build_graph(*gs);
            McSchedule sched;
            sched.burn_in = f->burn_in;
            sched.sweeps = f->sweeps;
            sched.stride = f->stride;
            sched.replicas = f->replicas;
            sched.seed = f->seed;
            sched.algorithm = f->algorithm == "metropolis" ? Algorithm::metropolis
                              : f->algorithm == "mixed"    ? Algorithm::mixed
                                                           : Algorithm::wolff;
            sched.start = f->start == "cold" ? Start::cold : Start::hot;
            sched.sphere_average = !f->canonical;
            sched.threads = f->threads;
            ModelParams params;
            params.n = f->n;
            params.beta = f->beta;
            params.bc = bc_from(f->bc);
            VertexId center = static_cast<VertexId>(f->center);
            CorrelationSeries series;
            if (f->model == "spin") {
                series = run_chain(g, params, sched, center).series;
            } else if (f->model == "fk") {
                series = fk_connectivity(g, params, sched, center);
            } else {
                Rng rng(sched.seed);
                series = bernoulli_connectivity(g, f->prob, f->samples, center, rng);
            }
            emit(f->out, correlation_csv(series));
        });
    }

    // oracle
    auto* oracle_cmd =
        app.add_subcommand("oracle", "exact small-instance reference computations");
    oracle_cmd->require_subcommand(1);
    {
        auto gs = std::make_shared<GraphSection>();
        auto beta = std::make_shared<double>(1.0);
        auto x = std::make_shared<unsigned long long>(0);
        auto y = std::make_shared<unsigned long long>(1);
        auto* ising = oracle_cmd->add_subcommand(
            "ising", "brute-force Ising pair correlation (<= 20 vertices)");
        add_graph_flags(ising, *gs);
        ising->add_option("--beta", *beta);
        ising->add_option("--x", *x);
        ising->add_option("--y", *y);
        act(ising, [=] {
            Graph g = build_graph(*gs);
            emit("", print_exact(brute_force_ising(g, *beta,
                                                   static_cast<VertexId>(*x),
                                                   static_cast<VertexId>(*y))));
        });
    }
    {
        auto beta = std::make_shared<double>(1.0);
        auto* bessel = oracle_cmd->add_subcommand(
            "bessel", "single-edge O(2) correlation by quadrature");
        bessel->add_option("--beta", *beta);
        act(bessel, [=] { emit("", print_exact(bessel_ratio(*beta))); });
    }
    {
        auto beta = std::make_shared<double>(1.0);
        auto d = std::make_shared<int>(1);
        auto* o2 = oracle_cmd->add_subcommand(
            "o2path", "free-boundary O(2) path correlation at a distance");
        o2->add_option("--beta", *beta);
        o2->add_option("--distance", *d);
        act(o2, [=] { emit("", print_exact(o2_path_correlation(*d, *beta))); });
    }
    {
        auto gs = std::make_shared<GraphSection>();
        auto x = std::make_shared<unsigned long long>(0);
        auto y = std::make_shared<unsigned long long>(1);
        auto* res = oracle_cmd->add_subcommand(
            "resistance", "dense-elimination effective resistance (<= 50 vertices)");
        add_graph_flags(res, *gs);
        res->add_option("--x", *x);
        res->add_option("--y", *y);
        act(res, [=] {
            Graph g = build_graph(*gs);
            emit("", print_exact(dense_resistance(g, static_cast<VertexId>(*x),
                                                  static_cast<VertexId>(*y))));
        });
    }

    // fit
    {
        auto in = std::make_shared<std::string>();
        auto thresholds = std::make_shared<Thresholds>();
        auto out = std::make_shared<std::string>();
        auto* fit = app.add_subcommand(
            "fit", "decay/plateau verdicts for a correlations.csv file");
        fit->add_option("--in", *in, "correlations csv path")->required();
        fit->add_option("--rate-min", thresholds->rate_min);
        fit->add_option("--r2-min", thresholds->r2_min);
        fit->add_option("--level-min", thresholds->level_min);
        fit->add_option("--out", *out, "output file (default stdout)");
        act(fit, [=] {
            std::string text = slurp(*in);
            std::string csv =
                "graph,n,beta,bc,algorithm,verdict,rate,r_squared,plateau_level\n";
            for (const CorrelationSeries& s : parse_correlations_csv(text)) {
                Verdict v = classify(s, *thresholds);
                csv += s.graph_label + "," + std::to_string(s.params.n) + "," +
                       sig_digits(s.params.beta, 10) + "," + bc_name(s.params.bc) +
                       "," + s.algorithm_label + "," + verdict_name(v.kind) + ",";
                if (v.fit.status == FitStatus::ok)
                    csv += sig_digits(v.fit.rate, 10) + "," +
                           sig_digits(v.fit.r_squared, 10);
                else
                    csv += ",";
                csv += "," + sig_digits(v.plateau_level, 10) + "\n";
            }
            emit(*out, csv);
        });
    }

    // run / report
    auto add_experiment_cmd = [&](const char* name, const char* help, bool print_verdicts) {
        auto config_path = std::make_shared<std::string>();
        auto seed = std::make_shared<unsigned long long>(0);
        auto out_dir = std::make_shared<std::string>();
        auto threads = std::make_shared<int>(0);
        auto* cmd = app.add_subcommand(name, help);
        cmd->add_option("--config", *config_path, "experiment config path")->required();
        auto* seed_opt = cmd->add_option("--seed", *seed, "override mc.seed");
        cmd->add_option("--out", *out_dir, "override output.directory");
        cmd->add_option("--threads", *threads, "override mc.threads (speed only)");
        act(cmd, [=] {
            ExperimentConfig cfg = parse_config(slurp(*config_path));
            if (seed_opt->count() > 0) cfg.mc.seed = *seed;
            if (!out_dir->empty()) cfg.output.directory = *out_dir;
            if (*threads > 0) cfg.mc.threads = *threads;
            ExperimentPaths paths = run_experiment(cfg);
            if (print_verdicts) {
                std::cout << slurp(paths.verdicts_csv);
            } else {
                std::cout << "wrote " << paths.directory << "\n";
                for (const std::string& p :
                     {paths.config_resolved, paths.resistance_csv, paths.msfn_csv,
                      paths.correlations_csv, paths.verdicts_csv,
                      paths.magnetisation_csv})
                    std::cout << "  " << p << "\n";
            }
        });
    };
    add_experiment_cmd("run", "run an experiment config and write its artifacts", false);
    add_experiment_cmd("report", "run an experiment config and print the verdict table", true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (auto& [cmd, fn] : actions)
            if (cmd->parsed()) fn();
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
