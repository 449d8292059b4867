#include "hyperspin/config.hpp"

#include <charconv>
#include <limits>
#include <map>
#include <sstream>

#include "hyperspin/text.hpp"

namespace hyperspin {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError(line, msg);
}

long long parse_ll(const std::string& key, const std::string& v, int line) {
    long long out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(line, "key `" + key + "`: expected an integer, got `" + v + "`");
    return out;
}

int parse_int(const std::string& key, const std::string& v, int line) {
    long long out = parse_ll(key, v, line);
    if (out < std::numeric_limits<int>::min() || out > std::numeric_limits<int>::max())
        fail(line, "key `" + key + "`: integer out of range: `" + v + "`");
    return static_cast<int>(out);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v, int line) {
    std::uint64_t out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(line, "key `" + key + "`: expected an unsigned integer, got `" + v + "`");
    return out;
}

double parse_double(const std::string& key, const std::string& v, int line) {
    double out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        fail(line, "key `" + key + "`: expected a number, got `" + v + "`");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    fail(line, "key `" + key + "`: expected true|false, got `" + v + "`");
}

template <typename Enum>
Enum parse_enum(const std::string& key, const std::string& v, int line,
                const std::vector<std::pair<std::string, Enum>>& table) {
    for (const auto& [name, value] : table)
        if (v == name) return value;
    std::string options;
    for (const auto& [name, value] : table) {
        if (!options.empty()) options += '|';
        options += name;
    }
    fail(line, "key `" + key + "`: expected " + options + ", got `" + v + "`");
}

const std::vector<std::pair<std::string, BoundaryCondition>> bc_table = {
    {"free", BoundaryCondition::free_bc}, {"wired", BoundaryCondition::wired}};
const std::vector<std::pair<std::string, Algorithm>> algorithm_table = {
    {"metropolis", Algorithm::metropolis},
    {"wolff", Algorithm::wolff},
    {"mixed", Algorithm::mixed}};
const std::vector<std::pair<std::string, Start>> start_table = {
    {"hot", Start::hot}, {"cold", Start::cold}};
const std::vector<std::pair<std::string, RingClosure>> closure_table = {
    {"path", RingClosure::path}, {"cycle", RingClosure::cycle}};
const std::vector<std::pair<std::string, WiredSpins>> wired_spins_table = {
    {"contract", WiredSpins::contract},
    {"fixed_vector", WiredSpins::fixed_vector}};

template <typename Enum>
std::string enum_name(Enum value,
                      const std::vector<std::pair<std::string, Enum>>& table) {
    for (const auto& [name, v] : table)
        if (v == value) return name;
    return "?";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen;  // key -> line

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::string entry = trim(raw);
        if (entry.empty()) continue;

        std::size_t eq = entry.find('=');
        if (eq == std::string::npos)
            fail(line, "expected `section.key = value`, got `" + entry + "`");
        std::string key = trim(entry.substr(0, eq));
        std::string value = trim(entry.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            fail(line, "expected a `section.key` name, got `" + key + "`");
        if (value.empty()) fail(line, "key `" + key + "`: empty value");
        if (seen.count(key))
            fail(line, "duplicate key `" + key + "` (first on line " +
                           std::to_string(seen[key]) + ")");
        seen[key] = line;

        if (key == "graph.type") {
            cfg.graph.type = value;
        } else if (key == "graph.q") {
            cfg.graph.q = parse_int(key, value, line);
        } else if (key == "graph.radius") {
            cfg.graph.radius = parse_int(key, value, line);
        } else if (key == "graph.depth") {
            cfg.graph.depth = parse_int(key, value, line);
        } else if (key == "graph.branching") {
            cfg.graph.branching = parse_int(key, value, line);
        } else if (key == "graph.length") {
            cfg.graph.length = parse_int(key, value, line);
        } else if (key == "graph.size") {
            cfg.graph.size = parse_int(key, value, line);
        } else if (key == "graph.side") {
            cfg.graph.side = parse_int(key, value, line);
        } else if (key == "graph.closure") {
            cfg.graph.closure = parse_enum(key, value, line, closure_table);
        } else if (key == "model.n") {
            cfg.model.n_values.clear();
            for (const std::string& tok : split_ws(value))
                cfg.model.n_values.push_back(parse_int(key, tok, line));
        } else if (key == "model.beta") {
            cfg.model.betas.clear();
            for (const std::string& tok : split_ws(value))
                cfg.model.betas.push_back(parse_double(key, tok, line));
        } else if (key == "model.bc") {
            cfg.model.bc = parse_enum(key, value, line, bc_table);
        } else if (key == "model.wired_spins") {
            cfg.model.wired_spins = parse_enum(key, value, line, wired_spins_table);
        } else if (key == "mc.algorithm") {
            cfg.mc.algorithm = parse_enum(key, value, line, algorithm_table);
        } else if (key == "mc.burn_in") {
            cfg.mc.burn_in = parse_int(key, value, line);
        } else if (key == "mc.sweeps") {
            cfg.mc.sweeps = parse_int(key, value, line);
        } else if (key == "mc.stride") {
            cfg.mc.stride = parse_int(key, value, line);
        } else if (key == "mc.replicas") {
            cfg.mc.replicas = parse_int(key, value, line);
        } else if (key == "mc.seed") {
            cfg.mc.seed = parse_u64(key, value, line);
        } else if (key == "mc.start") {
            cfg.mc.start = parse_enum(key, value, line, start_table);
        } else if (key == "mc.sphere_average") {
            cfg.mc.sphere_average = parse_bool(key, value, line);
        } else if (key == "mc.threads") {
            cfg.mc.threads = parse_int(key, value, line);
        } else if (key == "mc.center") {
            long long c = parse_ll(key, value, line);
            if (c < 0) fail(line, "key `mc.center`: must be >= 0");
            cfg.mc.center = static_cast<VertexId>(c);
        } else if (key == "analysis.rate_min") {
            cfg.analysis.thresholds.rate_min = parse_double(key, value, line);
        } else if (key == "analysis.r2_min") {
            cfg.analysis.thresholds.r2_min = parse_double(key, value, line);
        } else if (key == "analysis.level_min") {
            cfg.analysis.thresholds.level_min = parse_double(key, value, line);
        } else if (key == "analysis.loss_factor") {
            cfg.analysis.loss_factor = parse_double(key, value, line);
        } else if (key == "output.directory") {
            cfg.output.directory = value;
        } else {
            fail(line, "unknown key `" + key + "`");
        }
    }

    auto where = [&](const char* key) {
        auto it = seen.find(key);
        return it == seen.end() ? 0 : it->second;
    };
    for (const char* key : {"graph.type", "model.n", "model.beta", "mc.seed"})
        if (!seen.count(key)) fail(0, "missing required key `" + std::string(key) + "`");

    const std::string& t = cfg.graph.type;
    if (t != "triangulation" && t != "ringed_tree" && t != "path" &&
        t != "cycle" && t != "tree" && t != "grid" && t != "complete")
        fail(where("graph.type"), "key `graph.type`: unknown graph type `" + t + "`");
    if (t == "triangulation") {
        if (cfg.graph.q < 7)
            fail(where("graph.q"), "key `graph.q`: q >= 7 required (hyperbolic parameters)");
        if (cfg.graph.radius < 0)
            fail(where("graph.radius"), "key `graph.radius`: must be >= 0");
    }
    if ((t == "ringed_tree" || t == "tree") && cfg.graph.depth < 0)
        fail(where("graph.depth"), "key `graph.depth`: must be >= 0");
    if (t == "tree" && cfg.graph.branching < 1)
        fail(where("graph.branching"), "key `graph.branching`: must be >= 1");
    if (t == "path" && cfg.graph.length < 1)
        fail(where("graph.length"), "key `graph.length`: must be >= 1");
    if (t == "cycle" && cfg.graph.size < 3)
        fail(where("graph.size"), "key `graph.size`: cycle needs size >= 3");
    if (t == "complete" && cfg.graph.size < 2)
        fail(where("graph.size"), "key `graph.size`: complete needs size >= 2");
    if (t == "grid" && cfg.graph.side < 1)
        fail(where("graph.side"), "key `graph.side`: must be >= 1");

    if (cfg.model.n_values.empty())
        fail(where("model.n"), "key `model.n`: at least one value required");
    for (int n : cfg.model.n_values)
        if (n < 1)
            fail(where("model.n"), "key `model.n`: spin dimension must be >= 1");
    if (cfg.model.betas.empty())
        fail(where("model.beta"), "key `model.beta`: at least one value required");
    for (double b : cfg.model.betas)
        if (!(b > 0.0))
            fail(where("model.beta"), "key `model.beta`: beta must be > 0");

    if (cfg.mc.burn_in < 0)
        fail(where("mc.burn_in"), "key `mc.burn_in`: must be >= 0");
    if (cfg.mc.sweeps < 1)
        fail(where("mc.sweeps"), "key `mc.sweeps`: must be >= 1");
    if (cfg.mc.stride < 1)
        fail(where("mc.stride"), "key `mc.stride`: must be >= 1");
    if (cfg.mc.sweeps / cfg.mc.stride < 1)
        fail(where("mc.stride"), "key `mc.stride`: stride exceeds sweeps (zero measurements)");
    if (cfg.mc.replicas < 1)
        fail(where("mc.replicas"), "key `mc.replicas`: must be >= 1");
    if (cfg.mc.threads < 1)
        fail(where("mc.threads"), "key `mc.threads`: must be >= 1");

    if (!(cfg.analysis.thresholds.rate_min > 0.0))
        fail(where("analysis.rate_min"), "key `analysis.rate_min`: must be > 0");
    if (!(cfg.analysis.thresholds.r2_min > 0.0 && cfg.analysis.thresholds.r2_min <= 1.0))
        fail(where("analysis.r2_min"), "key `analysis.r2_min`: must be in (0, 1]");
    if (!(cfg.analysis.thresholds.level_min > 0.0))
        fail(where("analysis.level_min"), "key `analysis.level_min`: must be > 0");
    if (!(cfg.analysis.loss_factor > 0.0))
        fail(where("analysis.loss_factor"), "key `analysis.loss_factor`: must be > 0");
    if (cfg.output.directory.empty())
        fail(where("output.directory"), "key `output.directory`: must not be empty");

    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    auto put = [&](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    put("graph.type", cfg.graph.type);
    put("graph.q", std::to_string(cfg.graph.q));
    put("graph.radius", std::to_string(cfg.graph.radius));
    put("graph.depth", std::to_string(cfg.graph.depth));
    put("graph.branching", std::to_string(cfg.graph.branching));
    put("graph.length", std::to_string(cfg.graph.length));
    put("graph.size", std::to_string(cfg.graph.size));
    put("graph.side", std::to_string(cfg.graph.side));
    put("graph.closure", enum_name(cfg.graph.closure, closure_table));
    std::string ns;
    for (int n : cfg.model.n_values) {
        if (!ns.empty()) ns += ' ';
        ns += std::to_string(n);
    }
    put("model.n", ns);
    std::string bs;
    for (double b : cfg.model.betas) {
        if (!bs.empty()) bs += ' ';
        bs += round_trip(b);
    }
    put("model.beta", bs);
    put("model.bc", enum_name(cfg.model.bc, bc_table));
    put("model.wired_spins", enum_name(cfg.model.wired_spins, wired_spins_table));
    put("mc.algorithm", enum_name(cfg.mc.algorithm, algorithm_table));
    put("mc.burn_in", std::to_string(cfg.mc.burn_in));
    put("mc.sweeps", std::to_string(cfg.mc.sweeps));
    put("mc.stride", std::to_string(cfg.mc.stride));
    put("mc.replicas", std::to_string(cfg.mc.replicas));
    put("mc.seed", std::to_string(cfg.mc.seed));
    put("mc.start", enum_name(cfg.mc.start, start_table));
    put("mc.sphere_average", cfg.mc.sphere_average ? "true" : "false");
    put("mc.threads", std::to_string(cfg.mc.threads));
    put("mc.center", std::to_string(cfg.mc.center));
    put("analysis.rate_min", round_trip(cfg.analysis.thresholds.rate_min));
    put("analysis.r2_min", round_trip(cfg.analysis.thresholds.r2_min));
    put("analysis.level_min", round_trip(cfg.analysis.thresholds.level_min));
    put("analysis.loss_factor", round_trip(cfg.analysis.loss_factor));
    put("output.directory", cfg.output.directory);
    return out;
}

Graph build_graph(const GraphSection& gs) {
    if (gs.type == "triangulation") return build_triangulation(gs.q, gs.radius);
    if (gs.type == "ringed_tree") return build_ringed_tree(gs.depth, gs.closure);
    if (gs.type == "path") return build_path(gs.length);
    if (gs.type == "cycle") return build_cycle(gs.size);
    if (gs.type == "tree") return build_tree(gs.branching, gs.depth);
    if (gs.type == "grid") return build_grid(gs.side);
    if (gs.type == "complete") return build_complete(gs.size);
    throw std::invalid_argument("build_graph: unknown graph type `" + gs.type + "`");
}

McSchedule to_schedule(const McSection& mc) {
    McSchedule sched;
    sched.burn_in = mc.burn_in;
    sched.sweeps = mc.sweeps;
    sched.stride = mc.stride;
    sched.replicas = mc.replicas;
    sched.seed = mc.seed;
    sched.algorithm = mc.algorithm;
    sched.start = mc.start;
    sched.sphere_average = mc.sphere_average;
    sched.threads = mc.threads;
    return sched;
}

}  // namespace hyperspin
