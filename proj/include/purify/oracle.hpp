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

#ifndef PURIFY_ORACLE_HPP
#define PURIFY_ORACLE_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "purify/circuit.hpp"
#include "purify/evaluator.hpp"

// Slow reference simulator working on full density matrices of all qubits.
// Shares no state-update code with the Bell-diagonal evaluator.

namespace purify {
namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr size_t MAX_WIDTH = 3;

/// Qubit 2k is Alice's half of pair k and qubit 2k+1 is Bob's. Qubit q is
/// bit q of a basis index.
inline size_t alice(size_t pair) {
    return 2 * pair;
}
inline size_t bob(size_t pair) {
    return 2 * pair + 1;
}

inline Matrix hadamard() {
    Matrix h(2, 2);
    double s = 1 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

inline Matrix phase() {
    Matrix p(2, 2);
    p << 1, 0, 0, Complex(0, 1);
    return p;
}

/// Single-qubit unitary for a string of H and P gates, written as an operator
/// product (the rightmost gate acts first).
inline Matrix gate_string_unitary(const std::string &s) {
    Matrix u = Matrix::Identity(2, 2);
    for (char c : s) {
        if (c == 'H') {
            u = u * hadamard();
        } else if (c == 'P') {
            u = u * phase();
        } else {
            throw std::invalid_argument("unknown gate '" + std::string(1, c) + "'");
        }
    }
    return u;
}

/// Local operations realizing each permutation of (B, C, D): (Alice, Bob).
inline std::pair<std::string, std::string> bcd_gate_strings(const BcdPerm &perm) {
    static const std::array<std::pair<const char *, std::pair<const char *, const char *>>, 6> table{{
        {"BCD", {"", ""}},
        {"BDC", {"H", "H"}},
        {"DCB", {"HPH", "PHP"}},
        {"CDB", {"PH", "HPHP"}},
        {"DBC", {"PHPH", "HPHPHPHP"}},
        {"CBD", {"HPHPH", "HHPHPHPHP"}},
    }};
    for (const auto &[name, strings] : table) {
        if (perm.name() == name) {
            return {strings.first, strings.second};
        }
    }
    throw std::invalid_argument("unknown BCD permutation");
}

/// The four Bell states in label order A, B, C, D as vectors over |ab>,
/// index = a + 2b with a Alice's bit.
inline const std::array<Vector, 4> &bell_vectors() {
    static const std::array<Vector, 4> v = [] {
        double s = 1 / std::sqrt(2.0);
        std::array<Vector, 4> r;
        for (auto &x : r) {
            x = Vector::Zero(4);
        }
        r[0](0) = s;  // (|00> + |11>)
        r[0](3) = s;
        r[1](2) = s;  // (|01> - |10>), |01> meaning Alice 0 and Bob 1
        r[1](1) = -s;
        r[2](2) = s;
        r[2](1) = s;
        r[3](0) = s;
        r[3](3) = -s;
        return r;
    }();
    return v;
}

class State {
   public:
    State(size_t width, const PairQuadruple &raw) : width_(width), raw_(raw) {
        if (width == 0 || width > MAX_WIDTH) {
            throw std::invalid_argument("the density-matrix oracle supports 1 to 3 pairs");
        }
        Matrix pair = pair_matrix(raw);
        rho_ = pair;
        for (size_t k = 1; k < width; k++) {
            // Pair k occupies the higher bits.
            rho_ = Eigen::kroneckerProduct(pair, rho_).eval();
        }
    }

    size_t dim() const {
        return rho_.rows();
    }
    size_t n_qubits() const {
        return 2 * width_;
    }
    const Matrix &rho() const {
        return rho_;
    }

    static Matrix pair_matrix(const PairQuadruple &q) {
        Matrix m = Matrix::Zero(4, 4);
        for (size_t k = 0; k < 4; k++) {
            m += q.p[k] * bell_vectors()[k] * bell_vectors()[k].adjoint();
        }
        return m;
    }

    /// Embeds an operator on the listed qubits (first listed = lowest local bit).
    Matrix embed(const Matrix &op, const std::vector<size_t> &qubits) const {
        size_t n = dim();
        size_t mask = 0;
        for (size_t q : qubits) {
            mask |= size_t{1} << q;
        }
        auto local = [&](size_t i) {
            size_t r = 0;
            for (size_t k = 0; k < qubits.size(); k++) {
                r |= ((i >> qubits[k]) & 1) << k;
            }
            return r;
        };
        Matrix full = Matrix::Zero(n, n);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                if ((i & ~mask) == (j & ~mask)) {
                    full(i, j) = op(local(i), local(j));
                }
            }
        }
        return full;
    }

    void apply_unitary(const Matrix &u, const std::vector<size_t> &qubits) {
        Matrix full = embed(u, qubits);
        rho_ = full * rho_ * full.adjoint();
    }

    /// Tr_qubits(rho) tensored with sigma on the same qubits.
    Matrix replace(const Matrix &rho, const std::vector<size_t> &qubits, const Matrix &sigma) const {
        size_t n = dim();
        size_t mask = 0;
        for (size_t q : qubits) {
            mask |= size_t{1} << q;
        }
        auto local = [&](size_t i) {
            size_t r = 0;
            for (size_t k = 0; k < qubits.size(); k++) {
                r |= ((i >> qubits[k]) & 1) << k;
            }
            return r;
        };
        auto scatter = [&](size_t rest, size_t l) {
            size_t r = rest;
            for (size_t k = 0; k < qubits.size(); k++) {
                r |= ((l >> k) & 1) << qubits[k];
            }
            return r;
        };
        size_t local_dim = size_t{1} << qubits.size();
        Matrix out = Matrix::Zero(n, n);
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < n; j++) {
                Complex traced = 0;
                for (size_t l = 0; l < local_dim; l++) {
                    traced += rho(scatter(i & ~mask, l), scatter(j & ~mask, l));
                }
                out(i, j) = traced * sigma(local(i), local(j));
            }
        }
        return out;
    }

    /// Two-qubit gate that works with chance p2 and otherwise fully
    /// depolarizes its qubits.
    void noisy_two_qubit(const Matrix &u, size_t q0, size_t q1, double p2) {
        Matrix full = embed(u, {q0, q1});
        Matrix good = full * rho_ * full.adjoint();
        Matrix bad = replace(rho_, {q0, q1}, Matrix::Identity(4, 4) / 4.0);
        rho_ = p2 * good + (1 - p2) * bad;
    }

    void local_bcd(size_t pair, const BcdPerm &perm) {
        auto [a, b] = bcd_gate_strings(perm);
        apply_unitary(gate_string_unitary(a), {alice(pair)});
        apply_unitary(gate_string_unitary(b), {bob(pair)});
    }

    static Matrix cnot() {
        // Local index = control + 2 * target.
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = 1;
        m(3, 1) = 1;
        m(2, 2) = 1;
        m(1, 3) = 1;
        return m;
    }

    static Matrix swap() {
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = 1;
        m(2, 1) = 1;
        m(1, 2) = 1;
        m(3, 3) = 1;
        return m;
    }

    void gate(size_t control, size_t target, double p2) {
        noisy_two_qubit(cnot(), alice(control), alice(target), p2);
        noisy_two_qubit(cnot(), bob(control), bob(target), p2);
    }

    void swap_pairs(size_t a, size_t b, double p2) {
        noisy_two_qubit(swap(), alice(a), alice(b), p2);
        noisy_two_qubit(swap(), bob(a), bob(b), p2);
    }

    /// Measures both qubits of a pair, keeps the accepted branch and puts a
    /// fresh raw pair (reset) or a perfect placeholder in its slot.
    void measure(size_t pair, Basis basis, double eta, bool reset) {
        Matrix rotate = Matrix::Identity(2, 2);
        bool anti = false;
        switch (basis) {
            case Basis::coin_z:
                break;
            case Basis::coin_x:
                rotate = hadamard();
                break;
            case Basis::anti_y:
                // Maps the Y eigenbasis onto the Z eigenbasis.
                rotate = hadamard() * phase().adjoint();
                anti = true;
                break;
        }
        apply_unitary(rotate, {alice(pair)});
        apply_unitary(rotate, {bob(pair)});

        double same = eta * eta + (1 - eta) * (1 - eta);
        double flip = 2 * eta * (1 - eta);
        Matrix kept = Matrix::Zero(dim(), dim());
        for (size_t a = 0; a < 2; a++) {
            for (size_t b = 0; b < 2; b++) {
                Matrix proj = Matrix::Zero(4, 4);
                proj(a + 2 * b, a + 2 * b) = 1;
                Matrix full = embed(proj, {alice(pair), bob(pair)});
                bool reported_equal_if_true = (a == b);
                double w = (reported_equal_if_true != anti) ? same : flip;
                kept += w * full * rho_ * full;
            }
        }
        Matrix fresh = reset ? pair_matrix(raw_) : pair_matrix(PairQuadruple{{1, 0, 0, 0}});
        rho_ = replace(kept, {alice(pair), bob(pair)}, fresh);
    }

    /// Unnormalized weight of the product Bell state with the given labels.
    double bell_weight(const std::vector<size_t> &labels) const {
        Vector v = bell_vectors()[labels[0]];
        for (size_t k = 1; k < width_; k++) {
            v = Eigen::kroneckerProduct(bell_vectors()[labels[k]], v).eval();
        }
        return (v.adjoint() * rho_ * v)(0, 0).real();
    }

    /// Full Bell diagonal with pair 0 as the most significant base-4 digit.
    std::vector<double> bell_diagonal() const {
        size_t n = 1;
        for (size_t k = 0; k < width_; k++) {
            n *= 4;
        }
        std::vector<double> out(n);
        std::vector<size_t> labels(width_);
        for (size_t s = 0; s < n; s++) {
            size_t r = s;
            for (size_t k = width_; k-- > 0;) {
                labels[k] = r % 4;
                r /= 4;
            }
            out[s] = bell_weight(labels);
        }
        return out;
    }

    double trace() const {
        return rho_.trace().real();
    }

   private:
    size_t width_;
    PairQuadruple raw_;
    Matrix rho_;
};

inline void apply(State &st, const CircuitOp &op, const ErrorModel &em) {
    if (auto g = std::get_if<GateOp>(&op)) {
        st.local_bcd(g->src, g->bcd_src);
        st.local_bcd(g->dst, g->bcd_dst);
        st.gate(g->src, g->dst, em.p2);
    } else if (auto m = std::get_if<MeasureOp>(&op)) {
        st.measure(m->pair, m->basis, em.eta, m->reset);
    } else if (auto s = std::get_if<SwapOp>(&op)) {
        st.swap_pairs(s->a, s->b, em.p2);
    } else {
        st.local_bcd(0, std::get<FinalBcdOp>(op).perm);
    }
}

/// Runs the circuit and returns the unnormalized Bell diagonal of all pairs.
inline std::vector<double> run(const Circuit &c, const ErrorModel &em) {
    if (c.width > MAX_WIDTH) {
        throw std::invalid_argument("the density-matrix oracle supports at most 3 pairs");
    }
    validate(c);
    State st(c.width, em.raw);
    for (const auto &op : c.ops) {
        apply(st, op, em);
    }
    return st.bell_diagonal();
}

}  // namespace oracle

inline EvalReport oracle_evaluate(const Circuit &c, const ErrorModel &em) {
    em.validate();
    return make_report(c, BellDistribution(c.width, oracle::run(c, em)));
}

}  // namespace purify

#endif
