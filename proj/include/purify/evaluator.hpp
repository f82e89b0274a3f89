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

#ifndef PURIFY_EVALUATOR_HPP
#define PURIFY_EVALUATOR_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"
#include "purify/bell.hpp"
#include "purify/circuit.hpp"
#include "purify/poly.hpp"

namespace purify {

/// Applies one circuit operation to a Bell-diagonal state, keeping the
/// accepted branch of measurements without renormalizing.
template <typename T>
BasicBellDistribution<T> apply_op(const BasicBellDistribution<T> &state,
                                  const CircuitOp &op,
                                  const BasicQuadruple<T> &raw,
                                  const T &p2,
                                  const T &eta) {
    if (auto g = std::get_if<GateOp>(&op)) {
        auto s = bcd_perm_single(state, g->src, g->bcd_src);
        s = bcd_perm_single(s, g->dst, g->bcd_dst);
        return apply_bilateral_gate(s, mirrored_cnot_perm(), g->src, g->dst, p2);
    }
    if (auto m = std::get_if<MeasureOp>(&op)) {
        return measure_unnormalized(state, m->pair, m->basis, eta, raw, m->reset);
    }
    if (auto s = std::get_if<SwapOp>(&op)) {
        return apply_bilateral_gate(state, swap_pair_perm(), s->a, s->b, p2);
    }
    return bcd_perm_single(state, 0, std::get<FinalBcdOp>(op).perm);
}

/// Runs the all-success branch of the circuit and returns the unnormalized
/// final state; its total weight is the success probability.
template <typename T>
BasicBellDistribution<T> fold_circuit(const Circuit &c, const BasicQuadruple<T> &raw, const T &p2, const T &eta) {
    auto state = init_distribution(c.width, raw);
    for (const auto &op : c.ops) {
        state = apply_op(state, op, raw, p2, eta);
    }
    return state;
}

struct EvalReport {
    /// Normalized distribution of the output pair; zeros when undefined.
    PairQuadruple final{{0, 0, 0, 0}};
    bool final_defined = false;
    double success_prob = 0;
    size_t op_count = 0;
    size_t raw_pairs_best_case = 0;
    /// Shares of the infidelity along B, C and D; zeros for a perfect output.
    std::array<double, 3> infidelity_components{0, 0, 0};

    double fidelity() const {
        return final[Bell::A];
    }
    double infidelity() const {
        return final[Bell::B] + final[Bell::C] + final[Bell::D];
    }
};

inline EvalReport make_report(const Circuit &c, const BellDistribution &unnormalized) {
    EvalReport r;
    r.op_count = c.ops.size();
    r.raw_pairs_best_case = c.raw_pairs_best_case();
    PairQuadruple m = unnormalized.marginal(0);
    double total = m.p[0] + m.p[1] + m.p[2] + m.p[3];
    r.success_prob = std::min(1.0, std::max(0.0, total));
    if (!(total > 0)) {
        return r;
    }
    r.final_defined = true;
    for (size_t k = 0; k < 4; k++) {
        r.final.p[k] = m.p[k] / total;
    }
    double bad = m.p[1] + m.p[2] + m.p[3];
    if (bad > 0) {
        for (size_t k = 0; k < 3; k++) {
            r.infidelity_components[k] = m.p[k + 1] / bad;
        }
    }
    return r;
}

inline EvalReport evaluate(const Circuit &c, const ErrorModel &em) {
    validate(c);
    em.validate();
    return make_report(c, fold_circuit(c, em.raw, em.p2, em.eta));
}

inline nlohmann::json report_to_json(const EvalReport &r) {
    nlohmann::json j;
    j["final"] = {{"A", r.final.p[0]}, {"B", r.final.p[1]}, {"C", r.final.p[2]}, {"D", r.final.p[3]}};
    j["final_defined"] = r.final_defined;
    j["fidelity"] = r.fidelity();
    j["infidelity"] = r.infidelity();
    j["success_prob"] = r.success_prob;
    j["op_count"] = r.op_count;
    j["raw_pairs_best_case"] = r.raw_pairs_best_case;
    j["infidelity_components"] = {{"b", r.infidelity_components[0]},
                                  {"c", r.infidelity_components[1]},
                                  {"d", r.infidelity_components[2]}};
    return j;
}

/// Von Neumann entropy in bits of a Bell-diagonal pair.
inline double entropy(const PairQuadruple &p) {
    double h = 0;
    for (double v : p.p) {
        if (v > 0) {
            h -= v * std::log2(v);
        }
    }
    return h;
}

/// Lower bound on the yield of the circuit followed by the hashing method,
/// (P / N) (1 - H). Only meaningful for perfect local operations.
inline double hashing_yield(const EvalReport &r) {
    if (!r.final_defined || r.raw_pairs_best_case == 0) {
        return 0;
    }
    return r.success_prob / static_cast<double>(r.raw_pairs_best_case) * (1 - entropy(r.final));
}

/// Werner fidelity at which 1 - H vanishes, found by bisection on [1/2, 1].
inline double hashing_threshold_fidelity(double tol = 1e-12) {
    double lo = 0.5;
    double hi = 1.0;
    while (hi - lo > tol) {
        double mid = (lo + hi) / 2;
        (1 - entropy(werner_raw(mid)) > 0 ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

class ResourceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Coefficients of the final infidelity expanded to first order around
/// F0 = p2 = eta = 1, in the small parameters (1-F0), (1-p2), (1-eta).
struct FirstOrder {
    Rational constant;
    Rational one_minus_f0;
    Rational one_minus_p2;
    Rational one_minus_eta;
};

struct SymbolicReport {
    /// Unnormalized output-pair weights over (A, B, C, D).
    BasicQuadruple<Poly> unnormalized;
    Poly success_poly;
    FirstOrder first_order;

    /// Numeric substitution, normalized.
    PairQuadruple final_at(double f0, double p2, double eta) const {
        double t = success_poly.evaluate(f0, p2, eta);
        PairQuadruple q{};
        for (size_t k = 0; k < 4; k++) {
            q.p[k] = unnormalized.p[k].evaluate(f0, p2, eta) / t;
        }
        return q;
    }
};

inline constexpr size_t SYMBOLIC_MAX_WIDTH = 4;
inline constexpr size_t SYMBOLIC_MAX_LENGTH = 20;
inline constexpr size_t SYMBOLIC_MAX_TERMS = 4'000'000;

/// Exact analytical form of the circuit's output for Werner raw pairs,
/// as polynomials in F0, p2 and eta with normalization left to the caller.
inline SymbolicReport evaluate_symbolic(const Circuit &c) {
    validate(c);
    if (c.width > SYMBOLIC_MAX_WIDTH || c.ops.size() > SYMBOLIC_MAX_LENGTH) {
        throw ResourceError("symbolic evaluation is limited to width <= 4 and length <= 20");
    }
    Poly f = Poly::variable(Var::f0);
    Poly q = (Poly::constant(1) - f) * Poly::constant(Rational(1, 3));
    BasicQuadruple<Poly> raw{{f, q, q, q}};
    Poly p2 = Poly::variable(Var::p2);
    Poly eta = Poly::variable(Var::eta);

    auto state = init_distribution(c.width, raw);
    for (const auto &op : c.ops) {
        state = apply_op(state, op, raw, p2, eta);
        size_t terms = 0;
        for (const auto &w : state.weights()) {
            terms += w.term_count();
        }
        if (terms > SYMBOLIC_MAX_TERMS) {
            throw ResourceError("symbolic evaluation exceeded " + std::to_string(SYMBOLIC_MAX_TERMS) + " terms");
        }
    }
    SymbolicReport r;
    r.unnormalized = state.marginal(0);
    r.success_poly = r.unnormalized.p[0] + r.unnormalized.p[1] + r.unnormalized.p[2] + r.unnormalized.p[3];

    const std::array<Rational, 3> one{Rational(1), Rational(1), Rational(1)};
    Rational good = r.unnormalized.p[0].evaluate_exact(one);
    Rational total = r.success_poly.evaluate_exact(one);
    if (total == 0) {
        throw std::domain_error("circuit never succeeds at F0 = p2 = eta = 1");
    }
    r.first_order.constant = 1 - good / total;
    // d/dv of 1 - N/T is -(N' T - N T') / T^2; expanding in (1 - v) flips the sign.
    auto coeff = [&](Var v) {
        Rational dn = r.unnormalized.p[0].derivative(v).evaluate_exact(one);
        Rational dt = r.success_poly.derivative(v).evaluate_exact(one);
        return (dn * total - good * dt) / (total * total);
    };
    r.first_order.one_minus_f0 = coeff(Var::f0);
    r.first_order.one_minus_p2 = coeff(Var::p2);
    r.first_order.one_minus_eta = coeff(Var::eta);
    return r;
}

inline nlohmann::json poly_to_json(const Poly &p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto &[e, c] : p.terms()) {
        terms.push_back({{e[0], e[1], e[2]}, c.str()});
    }
    return terms;
}

inline nlohmann::json symbolic_to_json(const SymbolicReport &r) {
    nlohmann::json j;
    j["variables"] = {VAR_NAMES[0], VAR_NAMES[1], VAR_NAMES[2]};
    j["unnormalized"] = {{"A", poly_to_json(r.unnormalized.p[0])},
                         {"B", poly_to_json(r.unnormalized.p[1])},
                         {"C", poly_to_json(r.unnormalized.p[2])},
                         {"D", poly_to_json(r.unnormalized.p[3])}};
    j["success"] = poly_to_json(r.success_poly);
    j["first_order_infidelity"] = {{"constant", r.first_order.constant.str()},
                                   {"one_minus_F0", r.first_order.one_minus_f0.str()},
                                   {"one_minus_p2", r.first_order.one_minus_p2.str()},
                                   {"one_minus_eta", r.first_order.one_minus_eta.str()}};
    return j;
}

}  // namespace purify

#endif
