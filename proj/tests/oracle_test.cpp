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

#include "purify/oracle.hpp"

#include "gtest/gtest.h"
#include "random_circuits.hpp"

using namespace purify;

TEST(oracle, single_selection_grid) {
    for (double f : {0.6, 0.8, 0.95}) {
        for (double p2 : {0.9, 0.97, 1.0}) {
            for (double eta : {0.9, 0.97, 1.0}) {
                auto em = ErrorModel::werner(f, p2, eta);
                auto a = evaluate(builtin("fig1"), em);
                auto b = oracle_evaluate(builtin("fig1"), em);
                for (size_t k = 0; k < 4; k++) {
                    EXPECT_NEAR(a.final.p[k], b.final.p[k], 1e-12);
                }
                EXPECT_NEAR(a.success_prob, b.success_prob, 1e-12);
            }
        }
    }
}

TEST(oracle, perfect_pairs_always_pass) {
    for (Basis basis : {Basis::coin_z, Basis::coin_x, Basis::anti_y}) {
        Circuit c;
        c.width = 2;
        c.ops = {GateOp{0, 1, {}, {}}, MeasureOp{1, basis, false}};
        auto r = oracle_evaluate(c, ErrorModel::werner(1, 1, 1));
        EXPECT_NEAR(r.success_prob, 1, 1e-12);
        EXPECT_NEAR(r.fidelity(), 1, 1e-12);
    }
}

TEST(oracle, full_depolarization_is_uniform) {
    Circuit c;
    c.width = 2;
    c.ops = {GateOp{0, 1, {}, {}}};
    auto d = oracle::run(c, ErrorModel::werner(1, 0, 1));
    for (double w : d) {
        EXPECT_NEAR(w, 1.0 / 16, 1e-12);
    }
}

TEST(oracle, trace_is_preserved_by_unitaries) {
    oracle::State st(2, werner_raw(0.8));
    st.gate(0, 1, 0.95);
    st.local_bcd(1, BcdPerm::from_name("CDB"));
    st.swap_pairs(0, 1, 0.9);
    EXPECT_NEAR(st.trace(), 1, 1e-12);
}

TEST(oracle, agrees_with_bell_diagonal_evaluator) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.85, 1.0);
    double worst = 0;
    for (size_t trial = 0; trial < 60; trial++) {
        size_t width = 2 + trial % 2;
        Circuit c = purify::testing::random_valid_circuit(rng, width, 1 + trial % 8);
        auto em = ErrorModel::werner(u(rng), u(rng), u(rng));
        auto a = BellDistribution(width, oracle::run(c, em));
        auto b = fold_circuit(c, em.raw, em.p2, em.eta);
        for (size_t s = 0; s < a.size(); s++) {
            worst = std::max(worst, std::abs(a[s] - b[s]));
        }
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(oracle, rejects_wide_circuits) {
    Circuit c;
    c.width = 4;
    EXPECT_THROW(oracle::run(c, ErrorModel::werner(0.9, 1, 1)), std::invalid_argument);
}
