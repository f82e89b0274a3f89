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

#ifndef PURIFY_CLIFFORD_HPP
#define PURIFY_CLIFFORD_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "purify/bell.hpp"

namespace purify {

/// i^phase * X^x * Z^z on up to 8 qubits; bit q of x/z refers to qubit q.
struct PhasedPauli {
    uint8_t x = 0;
    uint8_t z = 0;
    uint8_t phase = 0;

    /// The Hermitian Pauli sign * i^{|x&z|} X^x Z^z (so that x=z=1 is Y).
    static PhasedPauli hermitian(uint8_t x, uint8_t z, bool negative) {
        return {x, z, static_cast<uint8_t>((std::popcount(static_cast<unsigned>(x & z)) + (negative ? 2 : 0)) & 3)};
    }

    bool is_negative_hermitian() const {
        return ((phase - std::popcount(static_cast<unsigned>(x & z))) & 3) == 2;
    }

    friend PhasedPauli operator*(const PhasedPauli &a, const PhasedPauli &b) {
        // Moving b's X past a's Z picks up a sign per overlapping qubit.
        int ph = a.phase + b.phase + 2 * std::popcount(static_cast<unsigned>(a.z & b.x));
        return {static_cast<uint8_t>(a.x ^ b.x), static_cast<uint8_t>(a.z ^ b.z), static_cast<uint8_t>(ph & 3)};
    }

    friend bool operator==(const PhasedPauli &, const PhasedPauli &) = default;
};

inline bool commutes(const PhasedPauli &a, const PhasedPauli &b) {
    return ((std::popcount(static_cast<unsigned>(a.x & b.z)) + std::popcount(static_cast<unsigned>(a.z & b.x))) & 1) == 0;
}

/// A Clifford operation given by the images of X_q and Z_q under conjugation.
template <size_t N>
struct Tableau {
    std::array<PhasedPauli, N> x_images;
    std::array<PhasedPauli, N> z_images;

    static Tableau identity() {
        Tableau t;
        for (size_t q = 0; q < N; q++) {
            t.x_images[q] = PhasedPauli::hermitian(static_cast<uint8_t>(1u << q), 0, false);
            t.z_images[q] = PhasedPauli::hermitian(0, static_cast<uint8_t>(1u << q), false);
        }
        return t;
    }

    /// U P U^dagger.
    PhasedPauli conjugate(const PhasedPauli &p) const {
        PhasedPauli r{0, 0, p.phase};
        for (size_t q = 0; q < N; q++) {
            if ((p.x >> q) & 1) {
                r = r * x_images[q];
            }
            if ((p.z >> q) & 1) {
                r = r * z_images[q];
            }
        }
        return r;
    }

    /// (this after first): P -> this(first(P)).
    Tableau after(const Tableau &first) const {
        Tableau t;
        for (size_t q = 0; q < N; q++) {
            t.x_images[q] = conjugate(first.x_images[q]);
            t.z_images[q] = conjugate(first.z_images[q]);
        }
        return t;
    }

    friend bool operator==(const Tableau &, const Tableau &) = default;
};

/// An element of the two-qubit Clifford group modulo global phase, stored as
/// a binary symplectic part plus the four sign bits of the generator images.
class CliffordOp2 {
   public:
    CliffordOp2() : tableau_(Tableau<2>::identity()) {
    }
    explicit CliffordOp2(const Tableau<2> &t) : tableau_(t) {
    }

    const Tableau<2> &tableau() const {
        return tableau_;
    }

    /// Row r (images of X0, Z0, X1, Z1) as the 4-bit vector x0 x1 z0 z1.
    std::array<uint8_t, 4> symplectic() const {
        std::array<uint8_t, 4> m{};
        for (size_t k = 0; k < 4; k++) {
            const PhasedPauli &img = row(k);
            m[k] = static_cast<uint8_t>(img.x | (img.z << 2));
        }
        return m;
    }

    /// Bit k set when the image of generator k carries a minus sign.
    uint8_t phase_bits() const {
        uint8_t b = 0;
        for (size_t k = 0; k < 4; k++) {
            if (row(k).is_negative_hermitian()) {
                b |= static_cast<uint8_t>(1u << k);
            }
        }
        return b;
    }

    uint16_t symplectic_key() const {
        auto m = symplectic();
        return static_cast<uint16_t>(m[0] | (m[1] << 4) | (m[2] << 8) | (m[3] << 12));
    }

    /// Unique key of the element: symplectic key plus sign bits.
    uint32_t key() const {
        return (static_cast<uint32_t>(symplectic_key()) << 4) | phase_bits();
    }

    CliffordOp2 after(const CliffordOp2 &first) const {
        return CliffordOp2(tableau_.after(first.tableau_));
    }

    bool is_identity() const {
        return tableau_ == Tableau<2>::identity();
    }

    friend bool operator==(const CliffordOp2 &a, const CliffordOp2 &b) {
        return a.key() == b.key();
    }

   private:
    const PhasedPauli &row(size_t k) const {
        return k % 2 == 0 ? tableau_.x_images[k / 2] : tableau_.z_images[k / 2];
    }

    Tableau<2> tableau_;
};

/// All 11520 elements of the two-qubit Clifford group (modulo global phase),
/// sorted by key.
inline std::vector<CliffordOp2> enumerate_c2() {
    std::vector<PhasedPauli> nonzero;
    for (uint8_t x = 0; x < 4; x++) {
        for (uint8_t z = 0; z < 4; z++) {
            if (x || z) {
                nonzero.push_back(PhasedPauli::hermitian(x, z, false));
            }
        }
    }
    std::vector<CliffordOp2> out;
    for (const auto &x0 : nonzero) {
        for (const auto &z0 : nonzero) {
            if (commutes(x0, z0)) {
                continue;
            }
            for (const auto &x1 : nonzero) {
                if (!commutes(x0, x1) || !commutes(z0, x1)) {
                    continue;
                }
                for (const auto &z1 : nonzero) {
                    if (commutes(x1, z1) || !commutes(x0, z1) || !commutes(z0, z1)) {
                        continue;
                    }
                    for (uint8_t signs = 0; signs < 16; signs++) {
                        Tableau<2> t;
                        t.x_images[0] = PhasedPauli::hermitian(x0.x, x0.z, signs & 1);
                        t.z_images[0] = PhasedPauli::hermitian(z0.x, z0.z, signs & 2);
                        t.x_images[1] = PhasedPauli::hermitian(x1.x, x1.z, signs & 4);
                        t.z_images[1] = PhasedPauli::hermitian(z1.x, z1.z, signs & 8);
                        out.emplace_back(t);
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const CliffordOp2 &a, const CliffordOp2 &b) { return a.key() < b.key(); });
    return out;
}

/// CNOT with qubit 0 as control.
inline CliffordOp2 cnot_c2() {
    Tableau<2> t = Tableau<2>::identity();
    t.x_images[0] = PhasedPauli::hermitian(0b11, 0, false);
    t.z_images[1] = PhasedPauli::hermitian(0, 0b11, false);
    return CliffordOp2(t);
}

/// Bell-basis action of the bilateral operation alice (x) bob on two pairs.
///
/// Alice holds qubit k of pair k and Bob the other. The operation permutes the
/// Bell basis iff it maps the stabilizers X_a X_b and Z_a Z_b of each pair into
/// the group they generate, up to sign. Returns the induced permutation, with
/// pair 0 as the first letter, or nothing when the basis is not preserved.
inline std::optional<PairPerm> bilateral_bell_action(const CliffordOp2 &alice, const CliffordOp2 &bob) {
    Tableau<4> t;
    for (size_t q = 0; q < 2; q++) {
        auto lift = [](const PhasedPauli &p, int shift) {
            return PhasedPauli{static_cast<uint8_t>(p.x << shift), static_cast<uint8_t>(p.z << shift), p.phase};
        };
        t.x_images[q] = lift(alice.tableau().x_images[q], 0);
        t.z_images[q] = lift(alice.tableau().z_images[q], 0);
        t.x_images[q + 2] = lift(bob.tableau().x_images[q], 2);
        t.z_images[q + 2] = lift(bob.tableau().z_images[q], 2);
    }
    // Generators in the order XX(pair 0), ZZ(pair 0), XX(pair 1), ZZ(pair 1).
    std::array<PhasedPauli, 4> gens;
    for (size_t k = 0; k < 2; k++) {
        uint8_t both = static_cast<uint8_t>((1u << k) | (1u << (k + 2)));
        gens[2 * k] = PhasedPauli::hermitian(both, 0, false);
        gens[2 * k + 1] = PhasedPauli::hermitian(0, both, false);
    }
    std::array<uint8_t, 4> support{};
    std::array<uint8_t, 4> flip{};
    for (size_t g = 0; g < 4; g++) {
        PhasedPauli img = t.conjugate(gens[g]);
        if ((img.x & 3) != (img.x >> 2) || (img.z & 3) != (img.z >> 2)) {
            return std::nullopt;
        }
        PhasedPauli prod{0, 0, 0};
        uint8_t sup = 0;
        for (size_t k = 0; k < 2; k++) {
            if ((img.x >> k) & 1) {
                prod = prod * gens[2 * k];
                sup |= static_cast<uint8_t>(1u << (2 * k));
            }
            if ((img.z >> k) & 1) {
                prod = prod * gens[2 * k + 1];
                sup |= static_cast<uint8_t>(1u << (2 * k + 1));
            }
        }
        int diff = (img.phase - prod.phase) & 3;
        if (diff & 1) {
            return std::nullopt;
        }
        support[g] = sup;
        flip[g] = static_cast<uint8_t>(diff >> 1);
    }
    // Eigenvalue bits of the generators for a Bell string: XX is -1 on the
    // Z-type labels, ZZ is -1 on the X-type labels.
    auto signs_of = [](Bell l0, Bell l1) {
        return static_cast<uint8_t>(bell_z_bit(l0) | (bell_x_bit(l0) << 1) | (bell_z_bit(l1) << 2) |
                                    (bell_x_bit(l1) << 3));
    };
    auto label_of = [](uint8_t signs, size_t k) {
        return bell_from_bits((signs >> (2 * k + 1)) & 1, (signs >> (2 * k)) & 1);
    };
    PairPerm perm{};
    for (Bell l0 : ALL_BELL) {
        for (Bell l1 : ALL_BELL) {
            uint8_t in = signs_of(l0, l1);
            std::optional<uint8_t> found;
            for (uint8_t out = 0; out < 16; out++) {
                bool ok = true;
                for (size_t g = 0; g < 4 && ok; g++) {
                    int lhs = ((in >> g) & 1) ^ flip[g];
                    int rhs = std::popcount(static_cast<unsigned>(support[g] & out)) & 1;
                    ok = lhs == rhs;
                }
                if (ok) {
                    found = out;
                    break;
                }
            }
            if (!found) {
                return std::nullopt;
            }
            perm[pair_code(l0, l1)] = pair_code(label_of(*found, 0), label_of(*found, 1));
        }
    }
    return perm;
}

/// Encodes a pair permutation as a base-16 integer, first entry most
/// significant. Used as the deterministic sort order.
inline uint64_t perm_code(const PairPerm &p) {
    uint64_t c = 0;
    for (uint8_t v : p) {
        c = (c << 4) | v;
    }
    return c;
}

struct BellPermutation {
    PairPerm mapping;
    /// (Alice, Bob) index pairs into enumerate_c2() realizing the mapping.
    std::vector<std::pair<uint16_t, uint16_t>> realizers;
};

struct BellPermutationSet {
    size_t c2_size = 0;
    /// Bilateral operations acting as Bell-basis permutations.
    size_t bilateral_count = 0;
    /// Distinct mappings after discarding phases, sorted by perm_code.
    std::vector<BellPermutation> perms;
};

/// Scans alice (x) bob over C2 x C2.
///
/// Only bob sharing alice's symplectic part can pair the stabilizers
/// correctly, so the scan visits those 16 candidates per alice instead of
/// all 11520; every candidate still goes through bilateral_bell_action.
inline BellPermutationSet enumerate_bell_permutations() {
    std::vector<CliffordOp2> c2 = enumerate_c2();
    std::unordered_map<uint16_t, std::vector<uint16_t>> by_symplectic;
    for (size_t k = 0; k < c2.size(); k++) {
        by_symplectic[c2[k].symplectic_key()].push_back(static_cast<uint16_t>(k));
    }
    BellPermutationSet result;
    result.c2_size = c2.size();
    std::map<uint64_t, BellPermutation> found;
    for (size_t a = 0; a < c2.size(); a++) {
        for (uint16_t b : by_symplectic[c2[a].symplectic_key()]) {
            auto perm = bilateral_bell_action(c2[a], c2[b]);
            if (!perm) {
                continue;
            }
            result.bilateral_count++;
            auto &entry = found[perm_code(*perm)];
            entry.mapping = *perm;
            entry.realizers.emplace_back(static_cast<uint16_t>(a), b);
        }
    }
    result.perms.reserve(found.size());
    for (auto &[code, bp] : found) {
        result.perms.push_back(std::move(bp));
    }
    return result;
}

/// Unpruned scan of alice_indices x all of C2, returning the number of Bell
/// permutations found. Exists to cross-check the pruning.
inline size_t count_bilateral_full_scan(const std::vector<CliffordOp2> &c2, const std::vector<size_t> &alice_indices) {
    size_t count = 0;
    for (size_t a : alice_indices) {
        for (const auto &bob : c2) {
            if (bilateral_bell_action(c2.at(a), bob)) {
                count++;
            }
        }
    }
    return count;
}

struct PermClassification {
    bool is_a_preserving = false;
    bool is_fidelity_trivial = false;
    bool generated_by_cnot_bcd = false;
    bool requires_swap = false;

    bool is_useful() const {
        return is_a_preserving && !is_fidelity_trivial;
    }
};

/// True when the mapping acts on each pair separately, possibly exchanging
/// the two pairs.
inline bool is_local_mapping(const PairPerm &m) {
    auto first = [&](int a, int b) { return m[4 * a + b] >> 2; };
    auto second = [&](int a, int b) { return m[4 * a + b] & 3; };
    bool straight = true;
    bool crossed = true;
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            straight = straight && first(a, b) == first(a, 0) && second(a, b) == second(0, b);
            crossed = crossed && first(a, b) == first(0, b) && second(a, b) == second(a, 0);
        }
    }
    return straight || crossed;
}

/// Mappings reachable as (BCD x BCD) . CNOT . (BCD x BCD).
inline std::set<uint64_t> cnot_bcd_mappings() {
    std::set<uint64_t> out;
    const PairPerm &cnot = mirrored_cnot_perm();
    for (const auto &p1 : BcdPerm::all()) {
        for (const auto &p2 : BcdPerm::all()) {
            PairPerm after = local_pair_perm(p1, p2);
            for (const auto &p3 : BcdPerm::all()) {
                for (const auto &p4 : BcdPerm::all()) {
                    out.insert(perm_code(compose(after, compose(cnot, local_pair_perm(p3, p4)))));
                }
            }
        }
    }
    return out;
}

/// Flags for each element of the full 11520-element permutation set.
inline std::vector<PermClassification> classify(const std::vector<BellPermutation> &perms) {
    if (perms.size() != 11520) {
        throw std::invalid_argument("classify expects the full set of 11520 permutations, got " +
                                    std::to_string(perms.size()));
    }
    std::set<uint64_t> via_cnot = cnot_bcd_mappings();
    std::set<uint64_t> via_swap;
    for (uint64_t code : via_cnot) {
        PairPerm m{};
        for (int k = 15; k >= 0; k--) {
            m[k] = static_cast<uint8_t>(code & 15);
            code >>= 4;
        }
        via_swap.insert(perm_code(compose(swap_pair_perm(), m)));
    }
    std::vector<PermClassification> out;
    out.reserve(perms.size());
    for (const auto &bp : perms) {
        PermClassification c;
        c.is_a_preserving = bp.mapping[pair_code(Bell::A, Bell::A)] == pair_code(Bell::A, Bell::A);
        c.is_fidelity_trivial = c.is_a_preserving && is_local_mapping(bp.mapping);
        if (c.is_useful()) {
            uint64_t code = perm_code(bp.mapping);
            c.generated_by_cnot_bcd = via_cnot.count(code) > 0;
            c.requires_swap = !c.generated_by_cnot_bcd && via_swap.count(code) > 0;
        }
        out.push_back(c);
    }
    return out;
}

struct EnumerationCounts {
    size_t c2 = 0;
    size_t bilateral = 0;
    size_t unique = 0;
    size_t a_preserving = 0;
    size_t fidelity_trivial = 0;
    size_t useful = 0;
    size_t cnot_generated = 0;
    size_t requires_swap = 0;
};

inline EnumerationCounts count_classes(const BellPermutationSet &set, const std::vector<PermClassification> &cls) {
    EnumerationCounts c;
    c.c2 = set.c2_size;
    c.bilateral = set.bilateral_count;
    c.unique = set.perms.size();
    for (const auto &k : cls) {
        c.a_preserving += k.is_a_preserving;
        c.fidelity_trivial += k.is_fidelity_trivial;
        c.useful += k.is_useful();
        c.cnot_generated += k.generated_by_cnot_bcd;
        c.requires_swap += k.requires_swap;
    }
    return c;
}

/// Single-qubit gate strings performing a BCD permutation when Alice applies
/// the first and Bob the second. Strings are operator products over H and
/// P = diag(1, i): the rightmost letter acts first.
inline std::pair<std::string, std::string> compile_bcd_perm(const BcdPerm &perm) {
    static const std::map<std::string, std::pair<std::string, std::string>> table{
        {"BCD", {"", ""}},
        {"BDC", {"H", "H"}},
        {"DCB", {"HPH", "PHP"}},
        {"CDB", {"PH", "HPHP"}},
        {"DBC", {"PHPH", "HPHPHPHP"}},
        {"CBD", {"HPHPH", "HHPHPHPHP"}},
    };
    return table.at(perm.name());
}

}  // namespace purify

#endif
