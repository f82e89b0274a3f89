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

#include "purify/poly.hpp"

#include "gtest/gtest.h"

using namespace purify;

namespace {

Poly f() {
    return Poly::variable(Var::f0);
}
Poly p() {
    return Poly::variable(Var::p2);
}
Poly c(long n, long d = 1) {
    return Poly::constant(Rational(n, d));
}

}  // namespace

TEST(poly, zero_terms_are_dropped) {
    Poly z = f() - f();
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.term_count(), 0u);
    EXPECT_TRUE(c(0).is_zero());
    EXPECT_TRUE((f() * c(0)).is_zero());
    EXPECT_EQ(z.to_string(), "0");
}

TEST(poly, expansion) {
    // (F + p)^2 = F^2 + 2 F p + p^2
    Poly s = f() + p();
    Poly sq = s * s;
    EXPECT_EQ(sq.term_count(), 3u);
    EXPECT_EQ(sq, f() * f() + c(2) * f() * p() + p() * p());
    EXPECT_EQ(-(f() - p()), p() - f());
}

TEST(poly, exact_and_float_evaluation) {
    Poly q = (c(1) - f()) * c(1, 3);
    std::array<Rational, 3> at{Rational(9, 10), Rational(1), Rational(1)};
    EXPECT_EQ(q.evaluate_exact(at), Rational(1, 30));
    EXPECT_NEAR(q.evaluate(0.9, 1, 1), 1.0 / 30, 1e-16);
    Poly m = f() * p() * Poly::variable(Var::eta);
    EXPECT_DOUBLE_EQ(m.evaluate(0.5, 0.25, 2), 0.25);
}

TEST(poly, derivative) {
    Poly x = f() * f() * p() + c(3) * p() + c(7);
    EXPECT_EQ(x.derivative(Var::f0), c(2) * f() * p());
    EXPECT_EQ(x.derivative(Var::p2), f() * f() + c(3));
    EXPECT_TRUE(x.derivative(Var::eta).is_zero());
}

TEST(poly, to_string) {
    Poly x = c(1, 9) * f() * f() + p();
    EXPECT_EQ(x.to_string(), "1/9*F0^2 + 1*p2");
}

TEST(poly, scalar_traits) {
    EXPECT_EQ(ScalarTraits<Poly>::ratio(3, 6), c(1, 2));
}
