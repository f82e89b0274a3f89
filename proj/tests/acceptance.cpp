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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "purify/purify.hpp"
#include "random_circuits.hpp"

using namespace purify;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

Outcome enumeration_counts() {
    auto set = enumerate_bell_permutations();
    auto counts = count_classes(set, classify(set.perms));
    bool pass = counts.c2 == 11520 && counts.bilateral == 184320 && counts.unique == 11520 &&
                counts.a_preserving == 720 && counts.fidelity_trivial == 72 && counts.useful == 648 &&
                counts.requires_swap == 324;
    return {pass, fmt("c2=%zu bilateral=%zu unique=%zu a_preserving=%zu fidelity_trivial=%zu useful=%zu "
                      "requires_swap=%zu",
                      counts.c2, counts.bilateral, counts.unique, counts.a_preserving, counts.fidelity_trivial,
                      counts.useful, counts.requires_swap)};
}

Outcome single_selection_closed_form() {
    double f = 0.9;
    double q = (1 - f) / 3;
    double want_f = (f * f + q * q) / (f * f + 5 * q * q + 2 * f * q);
    double want_p = f * f + 5 * q * q + 2 * f * q;
    auto r = evaluate(builtin("fig1"), ErrorModel::werner(f, 1, 1));
    bool pass = std::abs(r.fidelity() - want_f) <= 1e-9 && std::abs(r.success_prob - want_p) <= 1e-9;

    // Both polynomials have degree 2 in F0, so agreement at five points
    // (with p2 = eta = 1) means they are equal.
    auto s = evaluate_symbolic(builtin("fig1"));
    bool exact = true;
    for (long k = 0; k <= 4; k++) {
        Rational fr(k + 3, 7);
        Rational qr = (1 - fr) / 3;
        std::array<Rational, 3> at{fr, Rational(1), Rational(1)};
        exact = exact && s.unnormalized.p[0].evaluate_exact(at) == fr * fr + qr * qr &&
                s.success_poly.evaluate_exact(at) == fr * fr + 5 * qr * qr + 2 * fr * qr;
    }
    return {pass && exact, fmt("fidelity=%.10f success=%.10f symbolic_exact=%s", r.fidelity(), r.success_prob,
                               exact ? "yes" : "no")};
}

Outcome first_order_floors() {
    double eps = 1e-4;
    auto slope = [&](const char *name) {
        return evaluate(builtin(name), ErrorModel::werner(1, 1 - eps, 1)).infidelity() / eps;
    };
    double s1 = slope("single_selection");
    double s2 = slope("double_selection");
    double s3 = slope("triple_selection");
    bool pass = s1 >= 0.745 && s1 <= 0.755 && s2 >= 0.370 && s2 <= 0.380 && std::abs(s3 - s2) <= 0.005;
    return {pass, fmt("single=%.5f double=%.5f triple=%.5f", s1, s2, s3)};
}

const ErrorModel GA_MODEL = ErrorModel::werner(0.9, 0.99, 0.99);

struct GaResults {
    GaRun l17;
    std::vector<GaRun> l40;
};

GaResults &ga_results() {
    static GaResults results = [] {
        GaResults r;
        GaConfig cfg;
        r.l17 = run_ga(cfg, GA_MODEL);
        cfg.max_length = 40;
        for (uint64_t seed : {1, 2}) {
            cfg.seed = seed;
            r.l40.push_back(run_ga(cfg, GA_MODEL));
        }
        return r;
    }();
    return results;
}

Outcome ga_quality() {
    const auto &best = ga_results().l17.best();
    McConfig mc;
    mc.trials = 100000;
    auto m = simulate_runs(best.circuit, GA_MODEL, mc);
    double n_avg = m.completed ? mean_pairs(m) : INFINITY;
    bool pass = best.report.infidelity() <= 0.01 && best.report.success_prob >= 0.20 && n_avg <= 26;
    return {pass, fmt("infidelity=%.5f success=%.4f N=%zu N_avg=%.3f length=%zu", best.report.infidelity(),
                      best.report.success_prob, best.report.raw_pairs_best_case, n_avg, best.circuit.ops.size())};
}

Outcome asymptotic_floor() {
    const auto &res = ga_results();
    double lowest = INFINITY;
    size_t count = 0;
    auto scan = [&](const GaRun &run) {
        for (const auto &ind : run.population) {
            if (ind.report.final_defined) {
                lowest = std::min(lowest, ind.report.infidelity());
                count++;
            }
        }
        for (const auto &g : run.trace) {
            lowest = std::min(lowest, g.best_report.infidelity());
        }
    };
    scan(res.l17);
    for (const auto &run : res.l40) {
        scan(run);
    }
    bool pass = lowest >= 0.0045 && lowest >= 0.005 && lowest <= 0.009;
    std::string l40;
    for (const auto &run : res.l40) {
        l40 += fmt(" %.5f", run.best().report.infidelity());
    }
    return {pass, fmt("lowest=%.5f over %zu circuits; L17 best=%.5f; L40 bests:%s", lowest, count,
                      res.l17.best().report.infidelity(), l40.c_str())};
}

Outcome oracle_equivalence() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.8, 1.0);
    double worst = 0;
    for (uint64_t k = 0; k < 200; k++) {
        GaConfig cfg;
        cfg.width = 2 + k % 2;
        cfg.max_length = 10;
        Rng crng = make_rng(11, 0, k);
        Circuit c = random_circuit(cfg, crng);
        auto em = ErrorModel::werner(u(rng), u(rng), u(rng));
        auto a = evaluate(c, em);
        auto b = oracle_evaluate(c, em);
        for (size_t i = 0; i < 4; i++) {
            worst = std::max(worst, std::abs(a.final.p[i] - b.final.p[i]));
        }
        worst = std::max(worst, std::abs(a.success_prob - b.success_prob));
    }
    return {worst <= 1e-12, fmt("200 circuits, worst difference %.3g", worst)};
}

Outcome monte_carlo_consistency() {
    auto em = ErrorModel::werner(0.9, 1, 1);
    McConfig cfg;
    cfg.trials = 100000;
    auto r = simulate_runs(builtin("fig1"), em, cfg);
    double p = 0.875555555555556;
    double n_target = 2 / p;
    double n_avg = mean_pairs(r);
    double n_sigma = mean_pairs_stderr(r);
    double f = r.first_pass_fraction();
    double f_sigma = std::sqrt(p * (1 - p) / static_cast<double>(r.trials));
    bool pass = std::abs(n_avg - n_target) <= 3 * n_sigma && std::abs(f - p) <= 3 * f_sigma;
    return {pass, fmt("N_avg=%.5f (target %.5f, sigma %.5f) first_pass=%.5f (target %.5f, sigma %.5f)", n_avg,
                      n_target, n_sigma, f, p, f_sigma)};
}

Outcome hashing_root() {
    double root = hashing_threshold_fidelity();
    return {std::abs(root - 0.8107) <= 0.002, fmt("root=%.6f", root)};
}

Outcome canonicalization_soundness() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.8, 1.0);
    size_t accepted = 0;
    size_t drawn = 0;
    double worst = 0;
    bool idempotent = true;
    while (accepted < 500) {
        drawn++;
        size_t width = 2 + drawn % 3;
        Circuit c = purify::testing::random_valid_circuit(rng, width, 2 + drawn % 11);
        auto r = canonicalize(c);
        if (!r.accepted()) {
            continue;
        }
        accepted++;
        auto again = canonicalize(*r.circuit);
        idempotent = idempotent && again.accepted() && again.circuit->ops == r.circuit->ops &&
                     again.circuit->width == r.circuit->width;
        auto em = ErrorModel::werner(u(rng), u(rng), u(rng));
        auto a = evaluate(c, em);
        auto b = evaluate(*r.circuit, em);
        idempotent = idempotent && a.final_defined == b.final_defined;
        for (size_t i = 0; i < 4; i++) {
            worst = std::max(worst, std::abs(a.final.p[i] - b.final.p[i]));
        }
        for (size_t i = 0; i < 3; i++) {
            worst = std::max(worst, std::abs(a.infidelity_components[i] - b.infidelity_components[i]));
        }
        worst = std::max(worst, std::abs(a.success_prob - b.success_prob));
    }
    return {idempotent && worst <= 1e-12,
            fmt("%zu accepted of %zu drawn, idempotent=%s, worst report difference %.3g", accepted, drawn,
                idempotent ? "yes" : "no", worst)};
}

}  // namespace

int main() {
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"enumeration counts", enumeration_counts},
        {"single selection closed form", single_selection_closed_form},
        {"first-order gate error floors", first_order_floors},
        {"GA quality at L17", ga_quality},
        {"asymptotic infidelity floor", asymptotic_floor},
        {"oracle equivalence", oracle_equivalence},
        {"Monte Carlo consistency", monte_carlo_consistency},
        {"hashing yield root", hashing_root},
        {"canonicalization soundness", canonicalization_soundness},
    };
    int failures = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d %s: %s | %s [%.1f s]\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
        failures += !o.pass;
        index++;
    }
    return failures == 0 ? 0 : 1;
}
