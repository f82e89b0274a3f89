// Copyright 2026 The Purify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PURIFY_CLI_HPP
#define PURIFY_CLI_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "purify/circuit.hpp"
#include "purify/circuit_io.hpp"
#include "purify/clifford.hpp"
#include "purify/evaluator.hpp"
#include "purify/montecarlo.hpp"
#include "purify/optimizer.hpp"

namespace purify {
namespace cli {

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

inline void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("can not write '" + path.string() + "'");
    }
    f << text;
}

struct ErrorModelArgs {
    double f0 = 0.9;
    double p2 = 1;
    double eta = 1;

    void add_to(CLI::App *cmd) {
        cmd->add_option("--f0", f0, "fidelity of the raw Werner pairs")->capture_default_str();
        cmd->add_option("--p2", p2, "success probability of two-qubit gates")->capture_default_str();
        cmd->add_option("--eta", eta, "success probability of single-qubit measurements")->capture_default_str();
    }

    ErrorModel model() const {
        ErrorModel em = ErrorModel::werner(f0, p2, eta);
        em.validate();
        return em;
    }

    nlohmann::json to_json() const {
        return {{"f0", f0}, {"p2", p2}, {"eta", eta}};
    }
};

struct CircuitArgs {
    std::string file;
    std::string builtin_name;

    void add_to(CLI::App *cmd) {
        auto *f = cmd->add_option("--circuit", file, "circuit JSON file");
        auto *b = cmd->add_option("--builtin", builtin_name, "builtin circuit name")
                      ->check(CLI::IsMember(builtin_names()));
        f->excludes(b);
    }

    Circuit load() const {
        if (!file.empty()) {
            return load_circuit_file(file);
        }
        if (!builtin_name.empty()) {
            return builtin(builtin_name);
        }
        throw std::invalid_argument("one of --circuit or --builtin is required");
    }

    std::string id() const {
        return file.empty() ? "builtin:" + builtin_name : file;
    }
};

inline void log_config(std::ostream &err, const std::string &command, const nlohmann::json &cfg) {
    err << "[purify " << command << "] config " << cfg.dump() << "\n";
}

inline nlohmann::json counts_to_json(const EnumerationCounts &c) {
    return {{"c2", c.c2},
            {"bilateral", c.bilateral},
            {"unique", c.unique},
            {"a_preserving", c.a_preserving},
            {"fidelity_trivial", c.fidelity_trivial},
            {"useful", c.useful},
            {"cnot_generated", c.cnot_generated},
            {"requires_swap", c.requires_swap}};
}

inline std::string pair_label(uint8_t code) {
    return std::string{bell_char(static_cast<Bell>(code >> 2)), bell_char(static_cast<Bell>(code & 3))};
}

inline int cmd_enumerate(bool counts_only, const std::string &out_path, std::ostream &out, std::ostream &err) {
    log_config(err, "enumerate", {{"counts_only", counts_only}, {"out", out_path}});
    BellPermutationSet set = enumerate_bell_permutations();
    auto cls = classify(set.perms);
    EnumerationCounts counts = count_classes(set, cls);
    std::string text;
    if (counts_only) {
        std::ostringstream s;
        s << "c2 " << counts.c2 << "\n"
          << "bilateral " << counts.bilateral << "\n"
          << "unique " << counts.unique << "\n"
          << "a_preserving " << counts.a_preserving << "\n"
          << "fidelity_trivial " << counts.fidelity_trivial << "\n"
          << "useful " << counts.useful << "\n"
          << "requires_swap " << counts.requires_swap << "\n";
        text = s.str();
    } else {
        nlohmann::json useful = nlohmann::json::array();
        for (size_t k = 0; k < set.perms.size(); k++) {
            if (!cls[k].is_useful()) {
                continue;
            }
            nlohmann::json mapping = nlohmann::json::object();
            for (uint8_t code = 0; code < 16; code++) {
                mapping[pair_label(code)] = pair_label(set.perms[k].mapping[code]);
            }
            useful.push_back({{"mapping", mapping},
                              {"generated_by_cnot_bcd", cls[k].generated_by_cnot_bcd},
                              {"requires_swap", cls[k].requires_swap},
                              {"realizers", set.perms[k].realizers.size()}});
        }
        text = nlohmann::json{{"counts", counts_to_json(counts)}, {"useful", useful}}.dump(2) + "\n";
    }
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
    return 0;
}

inline int cmd_evaluate(const CircuitArgs &ca, const ErrorModelArgs &ea, bool symbolic, std::ostream &out,
                        std::ostream &err) {
    log_config(err, "evaluate", {{"circuit", ca.id()}, {"error_model", ea.to_json()}, {"symbolic", symbolic}});
    Circuit c = ca.load();
    EvalReport r = evaluate(c, ea.model());
    nlohmann::json j;
    j["circuit"] = ca.id();
    j["error_model"] = ea.to_json();
    j["report"] = report_to_json(r);
    if (ea.p2 == 1 && ea.eta == 1) {
        j["hashing_yield"] = hashing_yield(r);
    }
    if (symbolic) {
        j["symbolic"] = symbolic_to_json(evaluate_symbolic(c));
    }
    out << j.dump(2) << "\n";
    return 0;
}

struct OptimizeArgs {
    std::string config_file;
    std::string out_dir;
    std::optional<size_t> width, max_length, population, survivors, children, generations, threads;
    std::optional<uint64_t> seed;
    std::optional<std::string> mode;
    std::vector<double> weights;
    std::optional<double> success_floor;
    bool quiet = false;

    GaConfig resolve() const {
        GaConfig cfg;
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            if (!f) {
                throw std::runtime_error("can not open config file '" + config_file + "'");
            }
            cfg = ga_config_from_json(nlohmann::json::parse(f));
        }
        if (width) cfg.width = *width;
        if (max_length) cfg.max_length = *max_length;
        if (population) cfg.population_size = *population;
        if (survivors) cfg.survivors_per_generation = *survivors;
        if (children) cfg.children_per_survivor = *children;
        if (generations) cfg.generations = *generations;
        if (threads) cfg.threads = *threads;
        if (seed) cfg.seed = *seed;
        if (mode) cfg.mode = mode_from_name(*mode);
        if (!weights.empty()) {
            cfg.weights = {weights.at(0), weights.at(1), weights.at(2)};
        }
        if (success_floor) cfg.success_floor = *success_floor;
        cfg.validate();
        return cfg;
    }
};

inline int cmd_optimize(const OptimizeArgs &oa, const ErrorModelArgs &ea, std::ostream &out, std::ostream &err) {
    GaConfig cfg = oa.resolve();
    ErrorModel em = ea.model();
    log_config(err, "optimize", {{"ga", ga_config_to_json(cfg)}, {"error_model", ea.to_json()}, {"out_dir", oa.out_dir}});
    std::ostringstream trace;
    trace << "generation,best_fitness,best_success,best_infidelity,best_length\n";
    GaRun run = run_ga(cfg, em, [&](const GenerationRecord &g) {
        trace << g.generation << "," << format_number(g.best_fitness) << "," << format_number(g.best_report.success_prob)
              << "," << format_number(g.best_report.infidelity()) << "," << g.best_circuit.ops.size() << "\n";
        if (!oa.quiet && g.generation % 10 == 0) {
            err << "[purify optimize] generation " << g.generation << " fitness " << format_number(g.best_fitness)
                << " success " << format_number(g.best_report.success_prob) << "\n";
        }
    });
    Circuit best = run.best().circuit;
    best.metadata["fitness"] = run.best().fitness;
    best.metadata["error_model"] = ea.to_json();
    best.metadata["ga"] = ga_config_to_json(cfg);
    if (!oa.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::path dir(oa.out_dir);
        fs::create_directories(dir / "population");
        write_file(dir / "best.json", write_circuit(best));
        write_file(dir / "trace.csv", trace.str());
        for (size_t k = 0; k < run.population.size(); k++) {
            char name[32];
            std::snprintf(name, sizeof(name), "%04zu.json", k);
            Circuit c = run.population[k].circuit;
            c.metadata["fitness"] = run.population[k].fitness;
            c.metadata["rank"] = k;
            write_file(dir / "population" / name, write_circuit(c));
        }
    }
    nlohmann::json j;
    j["best"] = circuit_to_json(best);
    j["report"] = report_to_json(run.best().report);
    j["evaluated"] = run.evaluated;
    out << j.dump(2) << "\n";
    return 0;
}

struct MonteCarloArgs {
    McConfig cfg;
    std::string policy = "subcircuit";
    std::string out_dir;

    void add_to(CLI::App *cmd) {
        cmd->add_option("--trials", cfg.trials, "number of simulated protocol runs")->capture_default_str();
        cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        cmd->add_option("--max-restarts", cfg.max_restarts_per_trial, "restarts after which a trial is aborted")
            ->capture_default_str();
        cmd->add_option("--policy", policy, "restart policy")
            ->check(CLI::IsMember({"subcircuit", "full"}))
            ->capture_default_str();
    }

    McConfig resolve() const {
        McConfig c = cfg;
        c.policy = restart_policy_from_name(policy);
        c.validate();
        return c;
    }

    nlohmann::json to_json() const {
        return {{"trials", cfg.trials}, {"seed", cfg.seed}, {"max_restarts", cfg.max_restarts_per_trial},
                {"policy", policy}};
    }
};

inline std::string histogram_csv(const McReport &r) {
    std::ostringstream s;
    s << "pairs,count\n";
    for (const auto &[n, count] : r.pairs_histogram) {
        s << n << "," << count << "\n";
    }
    return s.str();
}

inline std::string cumulative_csv(const McReport &r) {
    std::ostringstream s;
    s << "pairs,cumulative_probability\n";
    for (const auto &[n, p] : r.cumulative()) {
        s << n << "," << format_number(p) << "\n";
    }
    return s.str();
}

inline int cmd_montecarlo(const CircuitArgs &ca, const ErrorModelArgs &ea, const MonteCarloArgs &ma, std::ostream &out,
                          std::ostream &err) {
    McConfig cfg = ma.resolve();
    log_config(err, "montecarlo", {{"circuit", ca.id()}, {"error_model", ea.to_json()}, {"mc", ma.to_json()},
                                   {"out_dir", ma.out_dir}});
    Circuit c = ca.load();
    McReport r = simulate_runs(c, ea.model(), cfg);
    nlohmann::json j = mc_report_to_json(r);
    j["circuit"] = ca.id();
    j["error_model"] = ea.to_json();
    j["seed"] = cfg.seed;
    if (!ma.out_dir.empty()) {
        std::filesystem::create_directories(ma.out_dir);
        std::filesystem::path dir(ma.out_dir);
        write_file(dir / "report.json", j.dump(2) + "\n");
        write_file(dir / "histogram.csv", histogram_csv(r));
        write_file(dir / "cumulative.csv", cumulative_csv(r));
    }
    out << j.dump(2) << "\n";
    return 0;
}

inline int cmd_canonicalize(const CircuitArgs &ca, const std::string &out_path, std::ostream &out, std::ostream &err) {
    log_config(err, "canonicalize", {{"circuit", ca.id()}, {"out", out_path}});
    Circuit c = ca.load();
    CanonicalResult r = canonicalize(c);
    if (!r.accepted()) {
        err << "rejected: " << r.rejected_rule << "\n";
        return 3;
    }
    std::string text = write_circuit(*r.circuit);
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
    return 0;
}

inline constexpr const char *COMPARE_HEADER = "id,width,length,infidelity,success_prob,N,N_avg,b_rel,c_rel,d_rel";

inline std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char ch : s) {
        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return q + "\"";
}

inline std::string compare_row(const std::string &id, const Circuit &c, const EvalReport &r,
                               std::optional<double> n_avg) {
    std::ostringstream s;
    s << csv_field(id) << "," << c.width << "," << c.ops.size() << "," << format_number(r.infidelity()) << ","
      << format_number(r.success_prob) << "," << r.raw_pairs_best_case << ","
      << (n_avg ? format_number(*n_avg) : std::string()) << "," << format_number(r.infidelity_components[0]) << ","
      << format_number(r.infidelity_components[1]) << "," << format_number(r.infidelity_components[2]) << "\n";
    return s.str();
}

inline int cmd_compare(const std::vector<std::string> &files, const std::vector<std::string> &builtins,
                       const ErrorModelArgs &ea, bool with_mc, const MonteCarloArgs &ma, const std::string &out_path,
                       std::ostream &out, std::ostream &err) {
    log_config(err, "compare", {{"files", files}, {"builtins", builtins}, {"error_model", ea.to_json()},
                                {"with_mc", with_mc}, {"mc", ma.to_json()}, {"out", out_path}});
    ErrorModel em = ea.model();
    McConfig mc = ma.resolve();
    std::ostringstream csv;
    csv << COMPARE_HEADER << "\n";
    int status = 0;
    auto add = [&](const std::string &id, const std::function<Circuit()> &load) {
        try {
            Circuit c = load();
            auto canon = canonicalize(c);
            if (!canon.accepted()) {
                throw std::invalid_argument("not canonical: " + canon.rejected_rule);
            }
            EvalReport r = evaluate(c, em);
            std::optional<double> n_avg;
            if (with_mc) {
                McReport m = simulate_runs(c, em, mc);
                if (m.completed > 0) {
                    n_avg = mean_pairs(m);
                }
            }
            csv << compare_row(id, c, r, n_avg);
        } catch (const std::exception &e) {
            err << id << ": " << e.what() << "\n";
            status = 2;
        }
    };
    for (const auto &f : files) {
        add(f, [&] { return load_circuit_file(f); });
    }
    for (const auto &b : builtins) {
        add("builtin:" + b, [&] { return builtin(b); });
    }
    if (out_path.empty()) {
        out << csv.str();
    } else {
        write_file(out_path, csv.str());
    }
    return status;
}

/// Parses the command line and runs one subcommand. Returns the exit status.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Design and analysis of entanglement purification circuits", "purify"};
    app.require_subcommand(1);

    ErrorModelArgs ea;
    CircuitArgs ca;

    auto *enumerate_cmd = app.add_subcommand("enumerate", "enumerate bilateral Clifford Bell permutations");
    bool counts_only = false;
    std::string out_path;
    enumerate_cmd->add_flag("--counts-only", counts_only, "print only the class counts");
    enumerate_cmd->add_option("--out", out_path, "output file (default stdout)");

    auto *evaluate_cmd = app.add_subcommand("evaluate", "evaluate a circuit under an error model");
    bool symbolic = false;
    ca.add_to(evaluate_cmd);
    ea.add_to(evaluate_cmd);
    evaluate_cmd->add_flag("--symbolic", symbolic, "also emit exact polynomials in F0, p2, eta");

    auto *optimize_cmd = app.add_subcommand("optimize", "search for circuits with a genetic algorithm");
    OptimizeArgs oa;
    ea.add_to(optimize_cmd);
    optimize_cmd->add_option("--config", oa.config_file, "GA config JSON; flags override its entries");
    optimize_cmd->add_option("--out-dir", oa.out_dir, "directory for best.json, trace.csv and population/");
    optimize_cmd->add_option("--width", oa.width, "number of pair slots");
    optimize_cmd->add_option("--max-length", oa.max_length, "maximum number of operations");
    optimize_cmd->add_option("--population", oa.population, "population size");
    optimize_cmd->add_option("--survivors", oa.survivors, "survivors per generation");
    optimize_cmd->add_option("--children", oa.children, "children per survivor");
    optimize_cmd->add_option("--generations", oa.generations, "number of generations");
    optimize_cmd->add_option("--seed", oa.seed, "random seed");
    optimize_cmd->add_option("--mode", oa.mode, "register mode")->check(CLI::IsMember({"standard", "hot_cold"}));
    optimize_cmd->add_option("--weights", oa.weights, "fitness weights of the B, C, D infidelity components")
        ->expected(3);
    optimize_cmd->add_option("--success-floor", oa.success_floor, "minimum success probability");
    optimize_cmd->add_option("--threads", oa.threads, "worker threads for fitness evaluation");
    optimize_cmd->add_flag("--quiet", oa.quiet, "no progress lines");

    auto *mc_cmd = app.add_subcommand("montecarlo", "simulate restarts and count consumed raw pairs");
    MonteCarloArgs ma;
    CircuitArgs mc_ca;
    mc_ca.add_to(mc_cmd);
    ErrorModelArgs mc_ea;
    mc_ea.add_to(mc_cmd);
    ma.add_to(mc_cmd);
    mc_cmd->add_option("--out-dir", ma.out_dir, "directory for report.json, histogram.csv and cumulative.csv");

    auto *canon_cmd = app.add_subcommand("canonicalize", "print the canonical form of a circuit");
    CircuitArgs canon_ca;
    canon_ca.add_to(canon_cmd);
    std::string canon_out;
    canon_cmd->add_option("--out", canon_out, "output file (default stdout)");

    auto *compare_cmd = app.add_subcommand("compare", "tabulate several circuits as CSV");
    std::vector<std::string> files;
    std::vector<std::string> builtins;
    bool with_mc = false;
    ErrorModelArgs cmp_ea;
    MonteCarloArgs cmp_ma;
    std::string cmp_out;
    compare_cmd->add_option("files", files, "circuit JSON files");
    compare_cmd->add_option("--builtin", builtins, "builtin circuit names")->check(CLI::IsMember(builtin_names()));
    cmp_ea.add_to(compare_cmd);
    compare_cmd->add_flag("--mc", with_mc, "add Monte Carlo N_avg");
    cmp_ma.add_to(compare_cmd);
    compare_cmd->add_option("--out", cmp_out, "output file (default stdout)");

    if (args.empty()) {
        err << app.help();
        return 1;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n" << app.help();
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    try {
        if (enumerate_cmd->parsed()) {
            return cmd_enumerate(counts_only, out_path, out, err);
        }
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(ca, ea, symbolic, out, err);
        }
        if (optimize_cmd->parsed()) {
            return cmd_optimize(oa, ea, out, err);
        }
        if (mc_cmd->parsed()) {
            return cmd_montecarlo(mc_ca, mc_ea, ma, out, err);
        }
        if (canon_cmd->parsed()) {
            return cmd_canonicalize(canon_ca, canon_out, out, err);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(files, builtins, cmp_ea, with_mc, cmp_ma, cmp_out, out, err);
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace cli
}  // namespace purify

#endif
