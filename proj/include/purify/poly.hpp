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

#ifndef PURIFY_POLY_HPP
#define PURIFY_POLY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "purify/bell.hpp"

namespace purify {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Variables of the analytical expressions: raw fidelity F0, two-qubit gate
/// success p2 and measurement success eta.
enum class Var : uint8_t { f0 = 0, p2 = 1, eta = 2 };

constexpr std::array<const char *, 3> VAR_NAMES{"F0", "p2", "eta"};

using Exponents = std::array<uint16_t, 3>;

/// Multivariate polynomial in (F0, p2, eta) with exact rational coefficients.
/// Zero coefficients are never stored.
class Poly {
   public:
    Poly() = default;

    static Poly constant(const Rational &c) {
        Poly p;
        if (c != 0) {
            p.terms_[{0, 0, 0}] = c;
        }
        return p;
    }

    static Poly variable(Var v) {
        Poly p;
        Exponents e{0, 0, 0};
        e[static_cast<size_t>(v)] = 1;
        p.terms_[e] = 1;
        return p;
    }

    const std::map<Exponents, Rational> &terms() const {
        return terms_;
    }
    size_t term_count() const {
        return terms_.size();
    }
    bool is_zero() const {
        return terms_.empty();
    }

    Poly &operator+=(const Poly &o) {
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    Poly &operator-=(const Poly &o) {
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    friend Poly operator+(Poly a, const Poly &b) {
        a += b;
        return a;
    }
    friend Poly operator-(Poly a, const Poly &b) {
        a -= b;
        return a;
    }
    friend Poly operator-(const Poly &a) {
        Poly r;
        for (const auto &[e, c] : a.terms_) {
            r.terms_[e] = -c;
        }
        return r;
    }

    friend Poly operator*(const Poly &a, const Poly &b) {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        Poly r;
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                r.add_term({static_cast<uint16_t>(ea[0] + eb[0]), static_cast<uint16_t>(ea[1] + eb[1]),
                            static_cast<uint16_t>(ea[2] + eb[2])},
                           ca * cb);
            }
        }
        return r;
    }

    friend bool operator==(const Poly &, const Poly &) = default;

    Rational evaluate_exact(const std::array<Rational, 3> &at) const {
        Rational r = 0;
        for (const auto &[e, c] : terms_) {
            Rational t = c;
            for (size_t v = 0; v < 3; v++) {
                for (uint16_t k = 0; k < e[v]; k++) {
                    t *= at[v];
                }
            }
            r += t;
        }
        return r;
    }

    double evaluate(double f0, double p2, double eta) const {
        const double at[3] = {f0, p2, eta};
        double r = 0;
        for (const auto &[e, c] : terms_) {
            double t = static_cast<double>(c);
            for (size_t v = 0; v < 3; v++) {
                t *= std::pow(at[v], e[v]);
            }
            r += t;
        }
        return r;
    }

    Poly derivative(Var v) const {
        size_t k = static_cast<size_t>(v);
        Poly r;
        for (const auto &[e, c] : terms_) {
            if (e[k] == 0) {
                continue;
            }
            Exponents d = e;
            d[k]--;
            r.add_term(d, c * e[k]);
        }
        return r;
    }

    /// Human-readable form such as "1/9*F0^2 + 1*p2*eta".
    std::string to_string() const {
        if (terms_.empty()) {
            return "0";
        }
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto &[e, c] = *it;
            if (!s.empty()) {
                s += " + ";
            }
            s += c.str();
            for (size_t v = 0; v < 3; v++) {
                if (e[v] == 1) {
                    s += std::string("*") + VAR_NAMES[v];
                } else if (e[v] > 1) {
                    s += std::string("*") + VAR_NAMES[v] + "^" + std::to_string(e[v]);
                }
            }
        }
        return s;
    }

   private:
    void add_term(const Exponents &e, const Rational &c) {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    std::map<Exponents, Rational> terms_;
};

template <>
struct ScalarTraits<Poly> {
    static Poly ratio(long num, long den) {
        return Poly::constant(Rational(num, den));
    }
};

}  // namespace purify

#endif
