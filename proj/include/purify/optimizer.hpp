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

#ifndef PURIFY_OPTIMIZER_HPP
#define PURIFY_OPTIMIZER_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "purify/circuit.hpp"
#include "purify/circuit_io.hpp"
#include "purify/evaluator.hpp"
#include "purify/rng.hpp"

namespace purify {

struct MutationWeights {
    double insert = 3;
    double remove = 2;
    double replace = 2;
    double tweak = 3;
    double swap_adjacent = 1;
};

struct GaConfig {
    size_t width = 3;
    size_t max_length = 17;
    size_t population_size = 200;
    size_t survivors_per_generation = 40;
    size_t children_per_survivor = 5;
    size_t generations = 200;
    MutationWeights mutation;
    uint64_t seed = 1;
    Mode mode = Mode::standard;
    /// Weights of the B, C and D components of the final infidelity.
    std::array<double, 3> weights{1, 1, 1};
    std::optional<double> success_floor;
    /// Attempts before a rejected mutation falls back to the parent.
    size_t mutation_retries = 50;
    /// Worker threads for fitness evaluation; results do not depend on it.
    size_t threads = 1;

    void validate() const {
        if (width < 2 || width > 8) {
            throw std::invalid_argument("width must lie in [2, 8]");
        }
        if (max_length < 2) {
            throw std::invalid_argument("max_length must be at least 2");
        }
        if (survivors_per_generation < 1 || population_size < survivors_per_generation) {
            throw std::invalid_argument("need population_size >= survivors_per_generation >= 1");
        }
        const double w[] = {mutation.insert, mutation.remove, mutation.replace, mutation.tweak, mutation.swap_adjacent};
        for (double x : w) {
            if (!(x >= 0)) {
                throw std::invalid_argument("mutation weights must be nonnegative");
            }
        }
        if (mutation.insert + mutation.remove + mutation.replace + mutation.tweak + mutation.swap_adjacent <= 0) {
            throw std::invalid_argument("at least one mutation weight must be positive");
        }
        for (double x : weights) {
            if (!(x >= 0)) {
                throw std::invalid_argument("fitness weights must be nonnegative");
            }
        }
        if (success_floor && !(*success_floor >= 0 && *success_floor <= 1)) {
            throw std::invalid_argument("success floor must lie in [0, 1]");
        }
        if (threads < 1) {
            throw std::invalid_argument("threads must be at least 1");
        }
    }

    bool uses_final_bcd() const {
        return !(weights[0] == weights[1] && weights[1] == weights[2]);
    }
};

inline nlohmann::json ga_config_to_json(const GaConfig &cfg) {
    nlohmann::json j;
    j["width"] = cfg.width;
    j["max_length"] = cfg.max_length;
    j["population_size"] = cfg.population_size;
    j["survivors_per_generation"] = cfg.survivors_per_generation;
    j["children_per_survivor"] = cfg.children_per_survivor;
    j["generations"] = cfg.generations;
    j["mutation"] = {{"insert", cfg.mutation.insert},
                     {"remove", cfg.mutation.remove},
                     {"replace", cfg.mutation.replace},
                     {"tweak", cfg.mutation.tweak},
                     {"swap_adjacent", cfg.mutation.swap_adjacent}};
    j["seed"] = cfg.seed;
    j["mode"] = mode_name(cfg.mode);
    j["weights"] = cfg.weights;
    j["success_floor"] = cfg.success_floor ? nlohmann::json(*cfg.success_floor) : nlohmann::json(nullptr);
    j["mutation_retries"] = cfg.mutation_retries;
    j["threads"] = cfg.threads;
    return j;
}

/// Reads the keys present in j over the values already in cfg.
inline GaConfig ga_config_from_json(const nlohmann::json &j, GaConfig cfg = {}) {
    auto get = [&](const char *key, auto &out) {
        if (auto it = j.find(key); it != j.end() && !it->is_null()) {
            out = it->get<std::decay_t<decltype(out)>>();
        }
    };
    get("width", cfg.width);
    get("max_length", cfg.max_length);
    get("population_size", cfg.population_size);
    get("survivors_per_generation", cfg.survivors_per_generation);
    get("children_per_survivor", cfg.children_per_survivor);
    get("generations", cfg.generations);
    get("seed", cfg.seed);
    get("weights", cfg.weights);
    get("mutation_retries", cfg.mutation_retries);
    get("threads", cfg.threads);
    if (auto it = j.find("mode"); it != j.end()) {
        cfg.mode = mode_from_name(it->get<std::string>());
    }
    if (auto it = j.find("success_floor"); it != j.end()) {
        cfg.success_floor = it->is_null() ? std::nullopt : std::optional<double>(it->get<double>());
    }
    if (auto it = j.find("mutation"); it != j.end()) {
        const auto &m = *it;
        auto mget = [&](const char *key, double &out) {
            if (auto mt = m.find(key); mt != m.end()) {
                out = mt->get<double>();
            }
        };
        mget("insert", cfg.mutation.insert);
        mget("remove", cfg.mutation.remove);
        mget("replace", cfg.mutation.replace);
        mget("tweak", cfg.mutation.tweak);
        mget("swap_adjacent", cfg.mutation.swap_adjacent);
    }
    cfg.validate();
    return cfg;
}

namespace detail {

inline size_t pick(Rng &rng, size_t n) {
    return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

inline BcdPerm random_bcd(Rng &rng) {
    return BcdPerm::all()[pick(rng, 6)];
}

/// One random gene. Resets are filled in later by normalize_resets.
inline CircuitOp random_op(const GaConfig &cfg, Rng &rng) {
    size_t w = cfg.width;
    if (cfg.mode == Mode::hot_cold) {
        size_t roll = pick(rng, 10);
        size_t a = pick(rng, w - 1);
        if (roll < 4) {
            bool flip = pick(rng, 2);
            return GateOp{flip ? a + 1 : a, flip ? a : a + 1, random_bcd(rng), random_bcd(rng)};
        }
        if (roll < 7) {
            return SwapOp{a, a + 1};
        }
        return MeasureOp{1 + pick(rng, w - 1), ALL_BASES[pick(rng, 3)], false};
    }
    if (pick(rng, 2) == 0) {
        size_t src = pick(rng, w);
        size_t dst = pick(rng, w - 1);
        dst += dst >= src;
        return GateOp{src, dst, random_bcd(rng), random_bcd(rng)};
    }
    return MeasureOp{1 + pick(rng, w - 1), ALL_BASES[pick(rng, 3)], false};
}

}  // namespace detail

/// Sets reset on exactly the measurements whose slot is used again later.
/// In hot_cold mode only the communication pair may be reloaded.
inline void normalize_resets(Circuit &c) {
    for (size_t i = 0; i < c.ops.size(); i++) {
        auto m = std::get_if<MeasureOp>(&c.ops[i]);
        if (!m) {
            continue;
        }
        bool used_later = false;
        for (size_t j = i + 1; j < c.ops.size() && !used_later; j++) {
            if (std::holds_alternative<FinalBcdOp>(c.ops[j])) {
                continue;
            }
            for (size_t p : op_pairs(c.ops[j])) {
                used_later = used_later || p == m->pair;
            }
        }
        m->reset = used_later && (c.mode == Mode::standard || m->pair == c.communication_pair());
    }
}

namespace detail {

/// Normalizes resets and canonicalizes; nullopt when the result is not an
/// admissible member of the search space.
inline std::optional<Circuit> admit(Circuit c, const GaConfig &cfg) {
    if (c.ops.size() < 2 || c.ops.size() > cfg.max_length) {
        return std::nullopt;
    }
    normalize_resets(c);
    try {
        validate(c);
    } catch (const CircuitError &) {
        return std::nullopt;
    }
    auto r = canonicalize(c);
    if (!r.accepted()) {
        return std::nullopt;
    }
    return std::move(*r.circuit);
}

}  // namespace detail

/// Random canonical circuit of length between 2 and max_length.
inline Circuit random_circuit(const GaConfig &cfg, Rng &rng) {
    for (;;) {
        Circuit c;
        c.width = cfg.width;
        c.mode = cfg.mode;
        size_t len = 2 + detail::pick(rng, cfg.max_length - 1);
        for (size_t k = 0; k < len; k++) {
            c.ops.push_back(detail::random_op(cfg, rng));
        }
        if (cfg.uses_final_bcd() && c.ops.size() < cfg.max_length && detail::pick(rng, 2) == 0) {
            c.ops.push_back(FinalBcdOp{detail::random_bcd(rng)});
        }
        if (auto a = detail::admit(std::move(c), cfg)) {
            return std::move(*a);
        }
    }
}

enum class Mutation { insert, remove, replace, tweak, swap_adjacent };

namespace detail {

inline Mutation pick_mutation(const MutationWeights &w, Rng &rng) {
    std::discrete_distribution<int> d({w.insert, w.remove, w.replace, w.tweak, w.swap_adjacent});
    return static_cast<Mutation>(d(rng));
}

/// Changes one parameter of one operation. False when the operation has none.
inline bool tweak_op(CircuitOp &op, const GaConfig &cfg, Rng &rng) {
    if (auto g = std::get_if<GateOp>(&op)) {
        BcdPerm &target = pick(rng, 2) ? g->bcd_src : g->bcd_dst;
        BcdPerm old = target;
        while (target == old) {
            target = random_bcd(rng);
        }
        return true;
    }
    if (auto m = std::get_if<MeasureOp>(&op)) {
        Basis old = m->basis;
        while (m->basis == old) {
            m->basis = ALL_BASES[pick(rng, 3)];
        }
        return true;
    }
    if (auto f = std::get_if<FinalBcdOp>(&op)) {
        BcdPerm old = f->perm;
        while (f->perm == old) {
            f->perm = random_bcd(rng);
        }
        return true;
    }
    (void)cfg;
    return false;
}

inline bool apply_mutation(Circuit &c, Mutation kind, const GaConfig &cfg, Rng &rng) {
    auto &ops = c.ops;
    bool has_final = !ops.empty() && std::holds_alternative<FinalBcdOp>(ops.back());
    size_t body = ops.size() - has_final;
    switch (kind) {
        case Mutation::insert: {
            if (ops.size() >= cfg.max_length) {
                return false;
            }
            if (cfg.uses_final_bcd() && !has_final && pick(rng, 8) == 0) {
                ops.push_back(FinalBcdOp{random_bcd(rng)});
                return true;
            }
            ops.insert(ops.begin() + static_cast<std::ptrdiff_t>(pick(rng, body + 1)), random_op(cfg, rng));
            return true;
        }
        case Mutation::remove: {
            if (ops.size() <= 2) {
                return false;
            }
            ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(pick(rng, ops.size())));
            return true;
        }
        case Mutation::replace: {
            if (body == 0) {
                return false;
            }
            ops[pick(rng, body)] = random_op(cfg, rng);
            return true;
        }
        case Mutation::tweak:
            return !ops.empty() && tweak_op(ops[pick(rng, ops.size())], cfg, rng);
        case Mutation::swap_adjacent: {
            if (body < 2) {
                return false;
            }
            size_t i = pick(rng, body - 1);
            std::swap(ops[i], ops[i + 1]);
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// One weighted mutation followed by canonicalization. Returns the parent
/// when no admissible distinct mutant is found within the retry bound.
inline Circuit mutate(const Circuit &c, const GaConfig &cfg, Rng &rng) {
    std::string parent_key = circuit_key(c);
    for (size_t attempt = 0; attempt < cfg.mutation_retries; attempt++) {
        Circuit m = c;
        m.metadata = nlohmann::json::object();
        if (!detail::apply_mutation(m, detail::pick_mutation(cfg.mutation, rng), cfg, rng)) {
            continue;
        }
        if (auto a = detail::admit(std::move(m), cfg); a && circuit_key(*a) != parent_key) {
            return std::move(*a);
        }
    }
    return c;
}

/// 1 - (w_B b + w_C c + w_D d) over the absolute final infidelity
/// components; -inf when the output is undefined or below the success floor.
inline double fitness(const EvalReport &r, const GaConfig &cfg) {
    if (!r.final_defined || (cfg.success_floor && r.success_prob < *cfg.success_floor)) {
        return -std::numeric_limits<double>::infinity();
    }
    return 1 - (cfg.weights[0] * r.final[Bell::B] + cfg.weights[1] * r.final[Bell::C] +
                cfg.weights[2] * r.final[Bell::D]);
}

struct Individual {
    Circuit circuit;
    EvalReport report;
    double fitness = 0;
    std::string key;
};

struct GenerationRecord {
    size_t generation = 0;
    double best_fitness = 0;
    EvalReport best_report;
    Circuit best_circuit;
};

struct GaRun {
    std::vector<GenerationRecord> trace;
    /// Final population, best first.
    std::vector<Individual> population;
    /// Number of distinct circuits evaluated over the run.
    size_t evaluated = 0;

    const Individual &best() const {
        return population.front();
    }
};

namespace detail {

/// Fittest first; ties go to higher success, then shorter circuits, then key.
inline bool fitter(const Individual &a, const Individual &b) {
    if (a.fitness != b.fitness) {
        return a.fitness > b.fitness;
    }
    if (a.report.success_prob != b.report.success_prob) {
        return a.report.success_prob > b.report.success_prob;
    }
    if (a.circuit.ops.size() != b.circuit.ops.size()) {
        return a.circuit.ops.size() < b.circuit.ops.size();
    }
    return a.key < b.key;
}

inline void parallel_for(size_t n, size_t threads, const std::function<void(size_t)> &f) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (size_t i = 0; i < n; i++) {
            f(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; t++) {
        pool.emplace_back([&, t] {
            for (size_t i = t; i < n; i += threads) {
                f(i);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

inline void score(std::vector<Individual> &pop, size_t from, const GaConfig &cfg, const ErrorModel &em) {
    parallel_for(pop.size() - from, cfg.threads, [&](size_t k) {
        auto &ind = pop[from + k];
        ind.report = make_report(ind.circuit, fold_circuit(ind.circuit, em.raw, em.p2, em.eta));
        ind.fitness = fitness(ind.report, cfg);
    });
}

}  // namespace detail

/// Elitist (mu + lambda) search: survivors are kept, each spawns mutated
/// children, duplicates are dropped and random immigrants fill the rest.
inline GaRun run_ga(const GaConfig &cfg,
                    const ErrorModel &em,
                    const std::function<void(const GenerationRecord &)> &on_generation = {}) {
    cfg.validate();
    em.validate();
    GaRun run;
    std::set<std::string> seen;
    std::vector<Individual> pop;

    auto try_add = [&](std::vector<Individual> &into, Circuit c) {
        std::string key = circuit_key(c);
        if (!seen.insert(key).second) {
            return false;
        }
        into.push_back(Individual{std::move(c), {}, 0, std::move(key)});
        return true;
    };
    // Immigrants draw from their own streams so that a short supply of
    // distinct mutants can not shift the other individuals' randomness.
    auto fill_immigrants = [&](std::vector<Individual> &into, size_t target, uint64_t generation) {
        for (uint64_t slot = 0; into.size() < target && slot < 100 * cfg.population_size; slot++) {
            Rng rng = make_rng(cfg.seed, generation, (uint64_t{1} << 40) + slot);
            try_add(into, random_circuit(cfg, rng));
        }
    };

    fill_immigrants(pop, cfg.population_size, 0);
    detail::score(pop, 0, cfg, em);
    run.evaluated = pop.size();
    std::sort(pop.begin(), pop.end(), detail::fitter);

    auto record = [&](size_t g) {
        GenerationRecord rec{g, pop.front().fitness, pop.front().report, pop.front().circuit};
        if (on_generation) {
            on_generation(rec);
        }
        run.trace.push_back(std::move(rec));
    };
    record(0);

    for (size_t g = 1; g <= cfg.generations; g++) {
        // Only circuits alive now count as duplicates; the rest may come back.
        seen.clear();
        pop.resize(std::min(pop.size(), cfg.survivors_per_generation));
        for (const auto &ind : pop) {
            seen.insert(ind.key);
        }
        size_t n_survivors = pop.size();
        std::vector<Individual> next;
        for (size_t s = 0; s < n_survivors; s++) {
            for (size_t k = 0; k < cfg.children_per_survivor; k++) {
                Rng rng = make_rng(cfg.seed, g, s * cfg.children_per_survivor + k);
                try_add(next, mutate(pop[s].circuit, cfg, rng));
            }
        }
        if (n_survivors + next.size() < cfg.population_size) {
            fill_immigrants(next, cfg.population_size - n_survivors, g);
        }
        size_t first_new = pop.size();
        for (auto &x : next) {
            pop.push_back(std::move(x));
        }
        detail::score(pop, first_new, cfg, em);
        run.evaluated += pop.size() - first_new;
        std::sort(pop.begin(), pop.end(), detail::fitter);
        record(g);
    }
    if (pop.size() > cfg.population_size) {
        pop.resize(cfg.population_size);
    }
    run.population = std::move(pop);
    return run;
}

}  // namespace purify

#endif
