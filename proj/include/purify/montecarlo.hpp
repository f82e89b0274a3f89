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

#ifndef PURIFY_MONTECARLO_HPP
#define PURIFY_MONTECARLO_HPP

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "purify/circuit.hpp"
#include "purify/evaluator.hpp"
#include "purify/rng.hpp"

namespace purify {

enum class RestartPolicy { subcircuit, full };

inline std::string restart_policy_name(RestartPolicy p) {
    return p == RestartPolicy::subcircuit ? "subcircuit" : "full";
}

inline RestartPolicy restart_policy_from_name(const std::string &s) {
    if (s == "subcircuit") {
        return RestartPolicy::subcircuit;
    }
    if (s == "full") {
        return RestartPolicy::full;
    }
    throw std::invalid_argument("unknown restart policy '" + s + "'");
}

struct McConfig {
    size_t trials = 100000;
    uint64_t seed = 1;
    size_t max_restarts_per_trial = 10000;
    RestartPolicy policy = RestartPolicy::subcircuit;

    void validate() const {
        if (trials < 1) {
            throw std::invalid_argument("need at least one trial");
        }
    }
};

struct McReport {
    size_t trials = 0;
    size_t completed = 0;
    size_t aborted = 0;
    /// Completed trials that needed no restart.
    size_t first_pass = 0;
    size_t raw_pairs_best_case = 0;
    RestartPolicy policy = RestartPolicy::subcircuit;
    /// Raw pairs consumed -> number of completed trials.
    std::map<size_t, size_t> pairs_histogram;
    /// Operations executed -> number of completed trials.
    std::map<size_t, size_t> ops_histogram;

    double first_pass_fraction() const {
        return static_cast<double>(first_pass) / static_cast<double>(trials);
    }

    /// (pairs, fraction of all trials completed within that many pairs).
    std::vector<std::pair<size_t, double>> cumulative() const {
        std::vector<std::pair<size_t, double>> out;
        size_t acc = 0;
        for (const auto &[n, count] : pairs_histogram) {
            acc += count;
            out.emplace_back(n, static_cast<double>(acc) / static_cast<double>(trials));
        }
        return out;
    }
};

/// Mean raw pairs consumed per completed trial.
inline double mean_pairs(const McReport &r) {
    if (r.completed == 0) {
        throw std::domain_error("no completed trials");
    }
    double sum = 0;
    for (const auto &[n, count] : r.pairs_histogram) {
        sum += static_cast<double>(n) * static_cast<double>(count);
    }
    return sum / static_cast<double>(r.completed);
}

/// Standard error of mean_pairs.
inline double mean_pairs_stderr(const McReport &r) {
    double m = mean_pairs(r);
    double ss = 0;
    for (const auto &[n, count] : r.pairs_histogram) {
        double d = static_cast<double>(n) - m;
        ss += d * d * static_cast<double>(count);
    }
    double n = static_cast<double>(r.completed);
    return n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
}

struct TrialResult {
    bool completed = false;
    bool first_pass = true;
    size_t pairs = 0;
    size_t ops = 0;
};

/// Executes the circuit once until every measurement has succeeded.
///
/// Outcomes are drawn from the exact conditional acceptance probability of
/// the current Bell-diagonal state. A failed measurement whose component is
/// restartable reloads that component's pairs and queues its operations again;
/// otherwise the whole circuit starts over.
inline TrialResult simulate_trial(const Circuit &c,
                                  const ColorPartition &part,
                                  const ErrorModel &em,
                                  const McConfig &cfg,
                                  Rng &rng) {
    TrialResult t;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<size_t> all(c.ops.size());
    std::iota(all.begin(), all.end(), size_t{0});

    BellDistribution state = init_distribution(c.width, em.raw);
    std::deque<size_t> pending(all.begin(), all.end());
    t.pairs = c.width;
    size_t restarts = 0;
    while (!pending.empty()) {
        size_t i = pending.front();
        pending.pop_front();
        t.ops++;
        const auto *m = std::get_if<MeasureOp>(&c.ops[i]);
        if (!m) {
            state = apply_op(state, c.ops[i], em.raw, em.p2, em.eta);
            continue;
        }
        BellDistribution accepted = measure_unnormalized(state, m->pair, m->basis, em.eta, em.raw, m->reset);
        double p = accepted.total() / state.total();
        if (uniform(rng) < p) {
            std::vector<double> w = accepted.weights();
            double total = accepted.total();
            for (double &x : w) {
                x /= total;
            }
            state = BellDistribution(c.width, std::move(w));
            t.pairs += m->reset;
            continue;
        }
        t.first_pass = false;
        if (++restarts > cfg.max_restarts_per_trial) {
            return t;
        }
        const auto &scope = part.restart_scope[i];
        if (cfg.policy == RestartPolicy::subcircuit && scope) {
            state = retensor_pairs(state, scope->pairs, em.raw);
            t.pairs += scope->pairs.size();
            pending.insert(pending.begin(), scope->ops.begin(), scope->ops.end());
        } else {
            state = init_distribution(c.width, em.raw);
            t.pairs += c.width;
            pending.assign(all.begin(), all.end());
        }
    }
    t.completed = true;
    return t;
}

inline McReport simulate_runs(const Circuit &c, const ErrorModel &em, const McConfig &cfg) {
    validate(c);
    em.validate();
    cfg.validate();
    ColorPartition part = color_partition(c);
    McReport r;
    r.trials = cfg.trials;
    r.policy = cfg.policy;
    r.raw_pairs_best_case = c.raw_pairs_best_case();
    for (size_t k = 0; k < cfg.trials; k++) {
        Rng rng = make_rng(cfg.seed, 0, k);
        TrialResult t = simulate_trial(c, part, em, cfg, rng);
        if (!t.completed) {
            r.aborted++;
            continue;
        }
        r.completed++;
        r.first_pass += t.first_pass;
        r.pairs_histogram[t.pairs]++;
        r.ops_histogram[t.ops]++;
    }
    return r;
}

inline nlohmann::json mc_report_to_json(const McReport &r) {
    nlohmann::json j;
    j["trials"] = r.trials;
    j["completed"] = r.completed;
    j["aborted"] = r.aborted;
    j["first_pass"] = r.first_pass;
    j["first_pass_fraction"] = r.first_pass_fraction();
    j["raw_pairs_best_case"] = r.raw_pairs_best_case;
    j["restart_policy"] = restart_policy_name(r.policy);
    j["restart_resampling"] = "restarted pairs only";
    if (r.completed > 0) {
        j["N_avg"] = mean_pairs(r);
        j["N_avg_stderr"] = mean_pairs_stderr(r);
    } else {
        j["N_avg"] = nullptr;
        j["N_avg_stderr"] = nullptr;
    }
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto &[n, count] : r.pairs_histogram) {
        pairs.push_back({n, count});
    }
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &[n, count] : r.ops_histogram) {
        ops.push_back({n, count});
    }
    j["pairs_histogram"] = pairs;
    j["ops_histogram"] = ops;
    return j;
}

}  // namespace purify

#endif
