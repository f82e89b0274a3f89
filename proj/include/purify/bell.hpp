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

#ifndef PURIFY_BELL_HPP
#define PURIFY_BELL_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace purify {

/// The four Bell states. The numeric value is used for all indexing.
///
///   A = |phi+>,  B = |psi->,  C = |psi+>,  D = |phi->
///
/// Viewed as a Pauli error applied to one half of |phi+>, A is I, B is Y,
/// C is X and D is Z.
enum class Bell : uint8_t { A = 0, B = 1, C = 2, D = 3 };

constexpr std::array<Bell, 4> ALL_BELL{Bell::A, Bell::B, Bell::C, Bell::D};

constexpr char bell_char(Bell b) {
    return "ABCD"[static_cast<int>(b)];
}

inline Bell bell_from_char(char c) {
    switch (c) {
        case 'A':
            return Bell::A;
        case 'B':
            return Bell::B;
        case 'C':
            return Bell::C;
        case 'D':
            return Bell::D;
        default:
            throw std::invalid_argument(std::string("not a Bell label: '") + c + "'");
    }
}

/// X component of the Pauli error associated with a Bell label.
constexpr bool bell_x_bit(Bell b) {
    return b == Bell::B || b == Bell::C;
}

/// Z component of the Pauli error associated with a Bell label.
constexpr bool bell_z_bit(Bell b) {
    return b == Bell::B || b == Bell::D;
}

constexpr Bell bell_from_bits(bool x, bool z) {
    if (x) {
        return z ? Bell::B : Bell::C;
    }
    return z ? Bell::D : Bell::A;
}

/// Scalar hooks needed by the templated Bell-diagonal algebra.
///
/// Specialized for the exact polynomial type in poly.hpp.
template <typename T>
struct ScalarTraits {
    static T ratio(long num, long den) {
        return T(static_cast<double>(num) / static_cast<double>(den));
    }
};

/// A local Clifford relabeling of one Bell pair that fixes A and permutes
/// {B, C, D}. Named by the image of (B, C, D), e.g. "CDB" sends B->C, C->D,
/// D->B.
class BcdPerm {
   public:
    constexpr BcdPerm() : image_{Bell::A, Bell::B, Bell::C, Bell::D} {
    }

    static BcdPerm from_name(std::string_view name) {
        if (name.size() != 3) {
            throw std::invalid_argument("BCD permutation name must have three letters: '" + std::string(name) + "'");
        }
        BcdPerm p;
        bool seen[4] = {true, false, false, false};
        for (size_t k = 0; k < 3; k++) {
            Bell img = bell_from_char(name[k]);
            if (seen[static_cast<int>(img)]) {
                throw std::invalid_argument("not a permutation of BCD: '" + std::string(name) + "'");
            }
            seen[static_cast<int>(img)] = true;
            p.image_[k + 1] = img;
        }
        return p;
    }

    /// All six permutations, in the order BCD, BDC, DCB, CDB, DBC, CBD.
    static const std::array<BcdPerm, 6> &all() {
        static const std::array<BcdPerm, 6> perms{
            from_name("BCD"), from_name("BDC"), from_name("DCB"),
            from_name("CDB"), from_name("DBC"), from_name("CBD")};
        return perms;
    }

    constexpr Bell operator()(Bell b) const {
        return image_[static_cast<int>(b)];
    }

    std::string name() const {
        return {bell_char(image_[1]), bell_char(image_[2]), bell_char(image_[3])};
    }

    constexpr bool is_identity() const {
        return image_[1] == Bell::B && image_[2] == Bell::C && image_[3] == Bell::D;
    }

    /// (this * other)(b) == this(other(b)).
    BcdPerm compose(const BcdPerm &other) const {
        BcdPerm r;
        for (Bell b : ALL_BELL) {
            r.image_[static_cast<int>(b)] = (*this)(other(b));
        }
        return r;
    }

    BcdPerm inverse() const {
        BcdPerm r;
        for (Bell b : ALL_BELL) {
            r.image_[static_cast<int>((*this)(b))] = b;
        }
        return r;
    }

    /// Position of this permutation in all().
    size_t index() const {
        const auto &a = all();
        for (size_t k = 0; k < a.size(); k++) {
            if (a[k] == *this) {
                return k;
            }
        }
        return 0;
    }

    friend constexpr bool operator==(const BcdPerm &, const BcdPerm &) = default;

   private:
    std::array<Bell, 4> image_;
};

/// A bijection on the 16 labels of two Bell pairs. Entry 4*first+second holds
/// the encoded image; the first letter belongs to the first pair argument of
/// apply_bilateral_gate.
using PairPerm = std::array<uint8_t, 16>;

constexpr uint8_t pair_code(Bell first, Bell second) {
    return static_cast<uint8_t>(4 * static_cast<int>(first) + static_cast<int>(second));
}

inline PairPerm identity_pair_perm() {
    PairPerm p{};
    std::iota(p.begin(), p.end(), uint8_t{0});
    return p;
}

inline bool is_bijection(const PairPerm &p) {
    std::array<bool, 16> seen{};
    for (uint8_t v : p) {
        if (v >= 16 || seen[v]) {
            return false;
        }
        seen[v] = true;
    }
    return true;
}

/// (a * b)(x) == a(b(x)).
inline PairPerm compose(const PairPerm &a, const PairPerm &b) {
    PairPerm r{};
    for (size_t k = 0; k < 16; k++) {
        r[k] = a[b[k]];
    }
    return r;
}

/// The action of the CNOT performed by both parties, with the first pair as
/// control and the second as target.
inline const PairPerm &mirrored_cnot_perm() {
    static const PairPerm perm = [] {
        // AA AB AC AD  BA BB BC BD  CA CB CC CD  DA DB DC DD
        constexpr std::string_view images[16] = {
            "AA", "DB", "AC", "DD", "BC", "CD", "BA", "CB",
            "CC", "BD", "CA", "BB", "DA", "AB", "DC", "AD"};
        PairPerm p{};
        for (size_t k = 0; k < 16; k++) {
            p[k] = pair_code(bell_from_char(images[k][0]), bell_from_char(images[k][1]));
        }
        return p;
    }();
    return perm;
}

/// Exchanges the two pairs.
inline const PairPerm &swap_pair_perm() {
    static const PairPerm perm = [] {
        PairPerm p{};
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                p[4 * a + b] = static_cast<uint8_t>(4 * b + a);
            }
        }
        return p;
    }();
    return perm;
}

/// Applies one BCD relabeling to each of the two pairs.
inline PairPerm local_pair_perm(const BcdPerm &first, const BcdPerm &second) {
    PairPerm p{};
    for (Bell a : ALL_BELL) {
        for (Bell b : ALL_BELL) {
            p[pair_code(a, b)] = pair_code(first(a), second(b));
        }
    }
    return p;
}

/// Probabilities of a single pair over (A, B, C, D).
template <typename T>
struct BasicQuadruple {
    std::array<T, 4> p;

    const T &operator[](Bell b) const {
        return p[static_cast<int>(b)];
    }
    T &operator[](Bell b) {
        return p[static_cast<int>(b)];
    }

    friend bool operator==(const BasicQuadruple &, const BasicQuadruple &) = default;
};

using PairQuadruple = BasicQuadruple<double>;

inline void check_quadruple(const PairQuadruple &q) {
    double total = 0;
    for (double v : q.p) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw std::domain_error("pair quadruple entries must be finite and nonnegative");
        }
        total += v;
    }
    if (std::abs(total - 1) > 1e-12) {
        throw std::domain_error("pair quadruple must sum to 1, got " + std::to_string(total));
    }
}

/// Werner pair (f0, q, q, q) with q = (1 - f0)/3.
inline PairQuadruple werner_raw(double f0) {
    if (!(f0 >= 0 && f0 <= 1)) {
        throw std::domain_error("f0 must lie in [0, 1]");
    }
    double q = (1 - f0) / 3;
    return {{f0, q, q, q}};
}

/// Raw-pair distribution plus two-qubit gate and per-qubit measurement
/// success probabilities. The gate infidelity is 1 - p2.
struct ErrorModel {
    PairQuadruple raw = werner_raw(1);
    double p2 = 1;
    double eta = 1;

    static ErrorModel werner(double f0, double p2, double eta) {
        ErrorModel em{werner_raw(f0), p2, eta};
        em.validate();
        return em;
    }

    void validate() const {
        check_quadruple(raw);
        if (!(p2 >= 0 && p2 <= 1)) {
            throw std::domain_error("p2 must lie in [0, 1]");
        }
        if (!(eta >= 0 && eta <= 1)) {
            throw std::domain_error("eta must lie in [0, 1]");
        }
    }

    friend bool operator==(const ErrorModel &, const ErrorModel &) = default;
};

/// Pair measurements that accept the A state.
enum class Basis : uint8_t { coin_z, coin_x, anti_y };

inline std::string basis_name(Basis b) {
    switch (b) {
        case Basis::coin_z:
            return "coinZ";
        case Basis::coin_x:
            return "coinX";
        case Basis::anti_y:
            return "antiY";
    }
    return "?";
}

inline Basis basis_from_name(std::string_view s) {
    if (s == "coinZ") {
        return Basis::coin_z;
    }
    if (s == "coinX") {
        return Basis::coin_x;
    }
    if (s == "antiY") {
        return Basis::anti_y;
    }
    throw std::invalid_argument("unknown measurement basis '" + std::string(s) + "'");
}

constexpr std::array<Basis, 3> ALL_BASES{Basis::coin_z, Basis::coin_x, Basis::anti_y};

/// coinZ keeps {A, D}, coinX keeps {A, C}, antiY keeps {A, B}.
constexpr bool accepts(Basis basis, Bell b) {
    switch (basis) {
        case Basis::coin_z:
            return b == Bell::A || b == Bell::D;
        case Basis::coin_x:
            return b == Bell::A || b == Bell::C;
        case Basis::anti_y:
            return b == Bell::A || b == Bell::B;
    }
    return false;
}

/// Unnormalized weights over the 4^n Bell strings of n pairs.
///
/// A string is encoded in base 4 with pair 0 as the most significant digit.
/// The total weight is the probability of the branch that produced the state.
template <typename T>
class BasicBellDistribution {
   public:
    BasicBellDistribution(size_t n_pairs, std::vector<T> weights) : n_pairs_(n_pairs), weights_(std::move(weights)) {
        if (n_pairs_ == 0 || n_pairs_ > 12) {
            throw std::invalid_argument("pair count must lie in [1, 12]");
        }
        if (weights_.size() != (size_t{1} << (2 * n_pairs_))) {
            throw std::invalid_argument("weight vector must have 4^n entries");
        }
    }

    size_t n_pairs() const {
        return n_pairs_;
    }
    size_t size() const {
        return weights_.size();
    }
    const std::vector<T> &weights() const {
        return weights_;
    }
    const T &operator[](size_t s) const {
        return weights_[s];
    }

    /// Index stride of pair k.
    size_t stride(size_t k) const {
        return size_t{1} << (2 * (n_pairs_ - 1 - k));
    }

    Bell label(size_t s, size_t k) const {
        return static_cast<Bell>((s / stride(k)) & 3);
    }

    T total() const {
        T t = ScalarTraits<T>::ratio(0, 1);
        for (const T &w : weights_) {
            t = t + w;
        }
        return t;
    }

    /// Unnormalized marginal of one pair.
    BasicQuadruple<T> marginal(size_t k) const {
        check_pair(k);
        BasicQuadruple<T> m{{ScalarTraits<T>::ratio(0, 1), ScalarTraits<T>::ratio(0, 1),
                             ScalarTraits<T>::ratio(0, 1), ScalarTraits<T>::ratio(0, 1)}};
        for (size_t s = 0; s < weights_.size(); s++) {
            m[label(s, k)] = m[label(s, k)] + weights_[s];
        }
        return m;
    }

    void check_pair(size_t k) const {
        if (k >= n_pairs_) {
            throw std::out_of_range("pair index " + std::to_string(k) + " out of range for " +
                                    std::to_string(n_pairs_) + " pairs");
        }
    }

    friend bool operator==(const BasicBellDistribution &, const BasicBellDistribution &) = default;

   private:
    size_t n_pairs_;
    std::vector<T> weights_;
};

using BellDistribution = BasicBellDistribution<double>;

/// Tensor product of n copies of the raw pair.
template <typename T>
BasicBellDistribution<T> init_distribution(size_t n_pairs, const BasicQuadruple<T> &raw) {
    if (n_pairs == 0) {
        throw std::invalid_argument("need at least one pair");
    }
    size_t n = size_t{1} << (2 * n_pairs);
    std::vector<T> w(n, ScalarTraits<T>::ratio(1, 1));
    for (size_t s = 0; s < n; s++) {
        for (size_t k = 0; k < n_pairs; k++) {
            w[s] = w[s] * raw.p[(s >> (2 * (n_pairs - 1 - k))) & 3];
        }
    }
    return BasicBellDistribution<T>(n_pairs, std::move(w));
}

/// A two-pair gate applied by both parties on pairs i and j.
///
/// Each party's gate independently depolarizes its two qubits with
/// probability 1 - p2, and either failure leaves pairs i and j uniform over
/// their 16 joint labels. The result is
///   p2^2 * permuted + (1 - p2^2) * uniform(i, j) x marginal(rest).
template <typename T>
BasicBellDistribution<T> apply_bilateral_gate(
    const BasicBellDistribution<T> &state, const PairPerm &perm, size_t i, size_t j, const T &p2) {
    state.check_pair(i);
    state.check_pair(j);
    if (i == j) {
        throw std::invalid_argument("bilateral gate needs two distinct pairs");
    }
    if (!is_bijection(perm)) {
        throw std::invalid_argument("pair permutation is not a bijection");
    }
    size_t si = state.stride(i);
    size_t sj = state.stride(j);
    const T zero = ScalarTraits<T>::ratio(0, 1);
    const T keep = p2 * p2;
    const T spread = (ScalarTraits<T>::ratio(1, 1) - keep) * ScalarTraits<T>::ratio(1, 16);
    std::vector<T> out(state.size(), zero);
    for (size_t s = 0; s < state.size(); s++) {
        size_t li = (s / si) & 3;
        size_t lj = (s / sj) & 3;
        if (li != 0 || lj != 0) {
            continue;
        }
        // s is the representative with pairs i and j both at A.
        T rest = zero;
        for (size_t a = 0; a < 4; a++) {
            for (size_t b = 0; b < 4; b++) {
                size_t src = s + a * si + b * sj;
                uint8_t img = perm[4 * a + b];
                size_t dst = s + (img >> 2) * si + (img & 3) * sj;
                out[dst] = out[dst] + keep * state[src];
                rest = rest + state[src];
            }
        }
        T share = spread * rest;
        for (size_t a = 0; a < 4; a++) {
            for (size_t b = 0; b < 4; b++) {
                size_t dst = s + a * si + b * sj;
                out[dst] = out[dst] + share;
            }
        }
    }
    return BasicBellDistribution<T>(state.n_pairs(), std::move(out));
}

/// Noiseless relabeling of pair k.
template <typename T>
BasicBellDistribution<T> bcd_perm_single(const BasicBellDistribution<T> &state, size_t k, const BcdPerm &perm) {
    state.check_pair(k);
    if (perm.is_identity()) {
        return state;
    }
    size_t sk = state.stride(k);
    std::vector<T> out(state.size(), ScalarTraits<T>::ratio(0, 1));
    for (size_t s = 0; s < state.size(); s++) {
        size_t l = (s / sk) & 3;
        size_t img = static_cast<size_t>(perm(static_cast<Bell>(l)));
        out[s - l * sk + img * sk] = state[s];
    }
    return BasicBellDistribution<T>(state.n_pairs(), std::move(out));
}

template <typename T>
struct BasicMeasureResult {
    BasicBellDistribution<T> state;
    /// Accepted weight divided by the incoming weight.
    T success_weight;
};

using MeasureResult = BasicMeasureResult<double>;

/// Accepted branch of a coincidence measurement on pair k, without the
/// division by the incoming weight.
///
/// Each of the two single-qubit readouts is wrong with probability 1 - eta,
/// so a label in the accept set is reported as accepted with probability
/// eta^2 + (1-eta)^2 and a label outside it with probability 2 eta (1-eta).
/// Afterwards pair k holds a fresh raw pair if reset is set, or sits at A as a
/// consumed placeholder otherwise.
template <typename T>
BasicBellDistribution<T> measure_unnormalized(const BasicBellDistribution<T> &state,
                                              size_t k,
                                              Basis basis,
                                              const T &eta,
                                              const BasicQuadruple<T> &raw,
                                              bool reset) {
    state.check_pair(k);
    if (k == 0) {
        throw std::invalid_argument("the preserved pair 0 can not be measured");
    }
    const T one = ScalarTraits<T>::ratio(1, 1);
    const T miss = one - eta;
    const T right = eta * eta + miss * miss;
    const T wrong = ScalarTraits<T>::ratio(2, 1) * eta * miss;
    size_t sk = state.stride(k);
    std::vector<T> out(state.size(), ScalarTraits<T>::ratio(0, 1));
    for (size_t s = 0; s < state.size(); s++) {
        if (((s / sk) & 3) != 0) {
            continue;
        }
        T kept = ScalarTraits<T>::ratio(0, 1);
        for (Bell b : ALL_BELL) {
            size_t src = s + static_cast<size_t>(b) * sk;
            kept = kept + (accepts(basis, b) ? right : wrong) * state[src];
        }
        if (reset) {
            for (Bell b : ALL_BELL) {
                out[s + static_cast<size_t>(b) * sk] = kept * raw[b];
            }
        } else {
            out[s] = kept;
        }
    }
    return BasicBellDistribution<T>(state.n_pairs(), std::move(out));
}

inline MeasureResult apply_measurement(
    const BellDistribution &state, size_t k, Basis basis, double eta, const PairQuadruple &raw, bool reset) {
    BellDistribution out = measure_unnormalized(state, k, basis, eta, raw, reset);
    double before = state.total();
    double ratio = before > 0 ? out.total() / before : 0.0;
    return {std::move(out), ratio};
}

/// Replaces the listed pairs by fresh raw pairs, keeping the marginal of the
/// others.
inline BellDistribution retensor_pairs(const BellDistribution &state,
                                       const std::vector<size_t> &pairs,
                                       const PairQuadruple &raw) {
    std::vector<double> w = state.weights();
    for (size_t k : pairs) {
        state.check_pair(k);
        size_t sk = state.stride(k);
        std::vector<double> out(w.size(), 0.0);
        for (size_t s = 0; s < w.size(); s++) {
            if (((s / sk) & 3) != 0) {
                continue;
            }
            double m = w[s] + w[s + sk] + w[s + 2 * sk] + w[s + 3 * sk];
            for (size_t l = 0; l < 4; l++) {
                out[s + l * sk] = m * raw.p[l];
            }
        }
        w = std::move(out);
    }
    return BellDistribution(state.n_pairs(), std::move(w));
}

}  // namespace purify

#endif
