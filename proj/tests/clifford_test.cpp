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

#include "purify/clifford.hpp"

#include <complex>
#include <set>

#include "gtest/gtest.h"
#include "purify/oracle.hpp"

using namespace purify;

namespace {

const BellPermutationSet &bell_perms() {
    static const BellPermutationSet set = enumerate_bell_permutations();
    return set;
}

}  // namespace

TEST(clifford, pauli_products) {
    PhasedPauli x = PhasedPauli::hermitian(1, 0, false);
    PhasedPauli z = PhasedPauli::hermitian(0, 1, false);
    PhasedPauli y = PhasedPauli::hermitian(1, 1, false);
    // XZ = -iY
    PhasedPauli xz = x * z;
    EXPECT_EQ(xz.x, 1);
    EXPECT_EQ(xz.z, 1);
    EXPECT_EQ(xz.phase, 0);
    // ZX = iY = -XZ
    EXPECT_EQ((z * x).phase, 2);
    EXPECT_EQ(y.phase, 1);
    EXPECT_FALSE(commutes(x, z));
    EXPECT_TRUE(commutes(x, x));
    EXPECT_TRUE(commutes(PhasedPauli::hermitian(3, 0, false), PhasedPauli::hermitian(0, 3, false)));
    EXPECT_TRUE(PhasedPauli::hermitian(1, 1, true).is_negative_hermitian());
    EXPECT_FALSE(y.is_negative_hermitian());
}

TEST(clifford, c2_size_and_uniqueness) {
    auto c2 = enumerate_c2();
    ASSERT_EQ(c2.size(), 11520u);
    std::set<uint32_t> keys;
    size_t identities = 0;
    for (const auto &g : c2) {
        keys.insert(g.key());
        identities += g.is_identity();
    }
    EXPECT_EQ(keys.size(), 11520u);
    EXPECT_EQ(identities, 1u);
}

TEST(clifford, c2_closed_under_composition) {
    auto c2 = enumerate_c2();
    std::set<uint32_t> keys;
    for (const auto &g : c2) {
        keys.insert(g.key());
    }
    for (size_t a = 0; a < c2.size(); a += 577) {
        for (size_t b = 0; b < c2.size(); b += 1009) {
            EXPECT_TRUE(keys.count(c2[a].after(c2[b]).key()));
        }
    }
}

TEST(clifford, cnot_induces_mirrored_table) {
    auto perm = bilateral_bell_action(cnot_c2(), cnot_c2());
    ASSERT_TRUE(perm.has_value());
    EXPECT_EQ(*perm, mirrored_cnot_perm());
}

TEST(clifford, identity_is_trivial_permutation) {
    auto perm = bilateral_bell_action(CliffordOp2(), CliffordOp2());
    ASSERT_TRUE(perm.has_value());
    EXPECT_EQ(*perm, identity_pair_perm());
}

TEST(clifford, enumeration_counts) {
    const auto &set = bell_perms();
    EXPECT_EQ(set.c2_size, 11520u);
    EXPECT_EQ(set.bilateral_count, 184320u);
    EXPECT_EQ(set.perms.size(), 11520u);
    auto cls = classify(set.perms);
    auto counts = count_classes(set, cls);
    EXPECT_EQ(counts.a_preserving, 720u);
    EXPECT_EQ(counts.fidelity_trivial, 72u);
    EXPECT_EQ(counts.useful, 648u);
    EXPECT_EQ(counts.cnot_generated, 324u);
    EXPECT_EQ(counts.requires_swap, 324u);
    for (const auto &bp : set.perms) {
        EXPECT_TRUE(is_bijection(bp.mapping));
        EXPECT_FALSE(bp.realizers.empty());
    }
}

TEST(clifford, pruned_scan_matches_full_scan) {
    auto c2 = enumerate_c2();
    std::vector<size_t> alice;
    for (size_t a = 0; a < c2.size(); a += 997) {
        alice.push_back(a);
    }
    size_t pruned = 0;
    std::set<size_t> chosen(alice.begin(), alice.end());
    for (const auto &bp : bell_perms().perms) {
        for (const auto &[a, b] : bp.realizers) {
            pruned += chosen.count(a);
        }
    }
    EXPECT_EQ(count_bilateral_full_scan(c2, alice), pruned);
}

TEST(clifford, classify_rejects_partial_sets) {
    std::vector<BellPermutation> few(3);
    EXPECT_THROW(classify(few), std::invalid_argument);
}

TEST(clifford, local_mappings) {
    EXPECT_TRUE(is_local_mapping(identity_pair_perm()));
    EXPECT_TRUE(is_local_mapping(swap_pair_perm()));
    EXPECT_TRUE(is_local_mapping(local_pair_perm(BcdPerm::from_name("DBC"), BcdPerm::from_name("BDC"))));
    EXPECT_FALSE(is_local_mapping(mirrored_cnot_perm()));
}

TEST(clifford, compiled_gate_strings_realize_permutations) {
    // Independent check with explicit 2x2 matrices acting on Bell vectors.
    const auto &bells = oracle::bell_vectors();
    for (const auto &perm : BcdPerm::all()) {
        auto [a, b] = compile_bcd_perm(perm);
        Eigen::MatrixXcd u = Eigen::kroneckerProduct(oracle::gate_string_unitary(b), oracle::gate_string_unitary(a));
        for (Bell l : ALL_BELL) {
            Eigen::VectorXcd out = u * bells[static_cast<size_t>(l)];
            double overlap = std::abs(bells[static_cast<size_t>(perm(l))].dot(out));
            EXPECT_NEAR(overlap, 1, 1e-12) << perm.name() << " on " << bell_char(l);
        }
    }
}

TEST(clifford, compiled_gate_strings_table) {
    EXPECT_EQ(compile_bcd_perm(BcdPerm::from_name("BCD")), std::make_pair(std::string(), std::string()));
    EXPECT_EQ(compile_bcd_perm(BcdPerm::from_name("BDC")), std::make_pair(std::string("H"), std::string("H")));
    EXPECT_EQ(compile_bcd_perm(BcdPerm::from_name("CDB")).second, "HPHP");
    EXPECT_EQ(compile_bcd_perm(BcdPerm::from_name("DBC")).second, "HPHPHPHP");
    EXPECT_EQ(compile_bcd_perm(BcdPerm::from_name("CBD")).first, "HPHPH");
}
