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

#include "purify/bell.hpp"

#include <cmath>

#include "gtest/gtest.h"

using namespace purify;

namespace {

// Two-pair table written out by hand: first letter is the control pair.
const char *CNOT_ROWS[16][2] = {
    {"AA", "AA"}, {"AB", "DB"}, {"AC", "AC"}, {"AD", "DD"}, {"BA", "BC"}, {"BB", "CD"}, {"BC", "BA"}, {"BD", "CB"},
    {"CA", "CC"}, {"CB", "BD"}, {"CC", "CA"}, {"CD", "BB"}, {"DA", "DA"}, {"DB", "AB"}, {"DC", "DC"}, {"DD", "AD"},
};

uint8_t code(const char *s) {
    return pair_code(bell_from_char(s[0]), bell_from_char(s[1]));
}

}  // namespace

TEST(bell, label_round_trip) {
    for (Bell b : ALL_BELL) {
        EXPECT_EQ(bell_from_char(bell_char(b)), b);
        EXPECT_EQ(bell_from_bits(bell_x_bit(b), bell_z_bit(b)), b);
    }
    EXPECT_THROW(bell_from_char('E'), std::invalid_argument);
    EXPECT_FALSE(bell_x_bit(Bell::D));
    EXPECT_TRUE(bell_z_bit(Bell::D));
    EXPECT_TRUE(bell_x_bit(Bell::C));
    EXPECT_FALSE(bell_z_bit(Bell::C));
}

TEST(bell, mirrored_cnot_table) {
    const PairPerm &p = mirrored_cnot_perm();
    ASSERT_TRUE(is_bijection(p));
    for (const auto &row : CNOT_ROWS) {
        EXPECT_EQ(p[code(row[0])], code(row[1])) << row[0];
    }
    // The CNOT is its own inverse.
    EXPECT_EQ(compose(p, p), identity_pair_perm());
}

TEST(bell, bcd_perm_group) {
    const auto &all = BcdPerm::all();
    ASSERT_EQ(all.size(), 6u);
    EXPECT_TRUE(all[0].is_identity());
    for (const auto &a : all) {
        EXPECT_EQ(a(Bell::A), Bell::A);
        EXPECT_EQ(BcdPerm::from_name(a.name()), a);
        EXPECT_TRUE(a.compose(a.inverse()).is_identity());
        EXPECT_EQ(all[a.index()], a);
    }
    BcdPerm bdc = BcdPerm::from_name("BDC");
    EXPECT_EQ(bdc(Bell::B), Bell::B);
    EXPECT_EQ(bdc(Bell::C), Bell::D);
    EXPECT_EQ(bdc(Bell::D), Bell::C);
    EXPECT_THROW(BcdPerm::from_name("BCB"), std::invalid_argument);
    EXPECT_THROW(BcdPerm::from_name("ABC"), std::invalid_argument);
}

TEST(bell, werner_raw) {
    PairQuadruple q = werner_raw(0.7);
    EXPECT_DOUBLE_EQ(q[Bell::A], 0.7);
    EXPECT_NEAR(q[Bell::B], 0.1, 1e-15);
    EXPECT_NEAR(q[Bell::C], 0.1, 1e-15);
    EXPECT_NEAR(q[Bell::D], 0.1, 1e-15);
    EXPECT_THROW(werner_raw(1.1), std::domain_error);
    EXPECT_THROW(werner_raw(-0.1), std::domain_error);
    EXPECT_THROW(ErrorModel::werner(0.9, 1.5, 1), std::domain_error);
    EXPECT_THROW(ErrorModel::werner(0.9, 1, -0.5), std::domain_error);
}

TEST(bell, basis_accept_sets) {
    EXPECT_TRUE(accepts(Basis::coin_z, Bell::A));
    EXPECT_TRUE(accepts(Basis::coin_z, Bell::D));
    EXPECT_FALSE(accepts(Basis::coin_z, Bell::B));
    EXPECT_TRUE(accepts(Basis::coin_x, Bell::C));
    EXPECT_FALSE(accepts(Basis::coin_x, Bell::D));
    EXPECT_TRUE(accepts(Basis::anti_y, Bell::B));
    EXPECT_FALSE(accepts(Basis::anti_y, Bell::C));
    for (Basis b : ALL_BASES) {
        EXPECT_EQ(basis_from_name(basis_name(b)), b);
    }
    EXPECT_THROW(basis_from_name("coinY"), std::invalid_argument);
}

TEST(bell, distribution_layout) {
    auto d = init_distribution(3, werner_raw(0.9));
    EXPECT_EQ(d.size(), 64u);
    EXPECT_NEAR(d.total(), 1, 1e-15);
    EXPECT_EQ(d.stride(0), 16u);
    EXPECT_EQ(d.stride(2), 1u);
    EXPECT_EQ(d.label(16 * 3 + 1, 0), Bell::D);
    EXPECT_EQ(d.label(16 * 3 + 1, 2), Bell::B);
    EXPECT_NEAR(d.marginal(1)[Bell::A], 0.9, 1e-15);
    EXPECT_THROW(d.marginal(3), std::out_of_range);
    EXPECT_THROW(BellDistribution(2, std::vector<double>(15)), std::invalid_argument);
}

TEST(bell, gate_preserves_mass_and_permutes) {
    PairQuadruple raw{{0.6, 0.2, 0.15, 0.05}};
    auto d = init_distribution(2, raw);
    auto g = apply_bilateral_gate(d, mirrored_cnot_perm(), 0, 1, 1.0);
    EXPECT_NEAR(g.total(), 1, 1e-15);
    for (const auto &row : CNOT_ROWS) {
        EXPECT_DOUBLE_EQ(g[code(row[1])], d[code(row[0])]);
    }
    EXPECT_THROW(apply_bilateral_gate(d, mirrored_cnot_perm(), 1, 1, 1.0), std::invalid_argument);
}

TEST(bell, gate_with_reversed_pairs) {
    PairQuadruple raw{{0.6, 0.2, 0.15, 0.05}};
    auto d = init_distribution(2, raw);
    auto g = apply_bilateral_gate(d, mirrored_cnot_perm(), 1, 0, 1.0);
    for (const auto &row : CNOT_ROWS) {
        uint8_t from = pair_code(bell_from_char(row[0][1]), bell_from_char(row[0][0]));
        uint8_t to = pair_code(bell_from_char(row[1][1]), bell_from_char(row[1][0]));
        EXPECT_DOUBLE_EQ(g[to], d[from]);
    }
}

TEST(bell, failed_gate_leaves_pairs_uniform) {
    auto d = init_distribution(3, werner_raw(0.8));
    auto g = apply_bilateral_gate(d, mirrored_cnot_perm(), 0, 2, 0.0);
    for (size_t s = 0; s < g.size(); s++) {
        Bell mid = g.label(s, 1);
        EXPECT_NEAR(g[s], werner_raw(0.8)[mid] / 16, 1e-15);
    }
}

TEST(bell, partial_gate_error_mixture) {
    auto d = init_distribution(2, werner_raw(1));
    double p2 = 0.9;
    auto g = apply_bilateral_gate(d, mirrored_cnot_perm(), 0, 1, p2);
    EXPECT_NEAR(g[0], p2 * p2 + (1 - p2 * p2) / 16, 1e-15);
    EXPECT_NEAR(g[5], (1 - p2 * p2) / 16, 1e-15);
}

TEST(bell, measurement_selects_accept_set) {
    PairQuadruple raw{{0.4, 0.3, 0.2, 0.1}};
    auto d = init_distribution(2, raw);
    for (Basis basis : ALL_BASES) {
        auto r = apply_measurement(d, 1, basis, 1.0, raw, false);
        double expected = 0;
        for (Bell b : ALL_BELL) {
            expected += accepts(basis, b) ? raw[b] : 0;
        }
        EXPECT_NEAR(r.success_weight, expected, 1e-15);
        // Consumed pair sits at A.
        EXPECT_NEAR(r.state.marginal(1)[Bell::A], expected, 1e-15);
        EXPECT_NEAR(r.state.marginal(0)[Bell::B], raw[Bell::B] * expected, 1e-15);
    }
    EXPECT_THROW(apply_measurement(d, 0, Basis::coin_z, 1.0, raw, false), std::invalid_argument);
}

TEST(bell, measurement_readout_error) {
    PairQuadruple raw{{0.4, 0.3, 0.2, 0.1}};
    auto d = init_distribution(2, raw);
    double eta = 0.9;
    double right = eta * eta + (1 - eta) * (1 - eta);
    double wrong = 2 * eta * (1 - eta);
    auto r = apply_measurement(d, 1, Basis::coin_z, eta, raw, true);
    EXPECT_NEAR(r.success_weight, right * 0.5 + wrong * 0.5, 1e-15);
    // The reset slot holds a fresh raw pair independent of pair 0.
    auto m1 = r.state.marginal(1);
    for (Bell b : ALL_BELL) {
        EXPECT_NEAR(m1[b], raw[b] * r.success_weight, 1e-15);
    }
}

TEST(bell, retensor_keeps_other_marginals) {
    PairQuadruple raw{{0.4, 0.3, 0.2, 0.1}};
    auto d = apply_bilateral_gate(init_distribution(3, raw), mirrored_cnot_perm(), 0, 1, 0.95);
    auto r = retensor_pairs(d, {1}, werner_raw(1));
    auto before = d.marginal(0);
    auto after = r.marginal(0);
    for (Bell b : ALL_BELL) {
        EXPECT_NEAR(before[b], after[b], 1e-15);
    }
    EXPECT_NEAR(r.marginal(1)[Bell::A], 1, 1e-15);
}

TEST(bell, bcd_perm_single_relabels) {
    PairQuadruple raw{{0.4, 0.3, 0.2, 0.1}};
    auto d = init_distribution(1, raw);
    auto r = bcd_perm_single(d, 0, BcdPerm::from_name("DBC"));
    BcdPerm p = BcdPerm::from_name("DBC");
    for (Bell b : ALL_BELL) {
        EXPECT_DOUBLE_EQ(r.marginal(0)[p(b)], raw[b]);
    }
}
