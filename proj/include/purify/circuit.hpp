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

#ifndef PURIFY_CIRCUIT_HPP
#define PURIFY_CIRCUIT_HPP

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"
#include "purify/bell.hpp"

namespace purify {

/// Mirrored CNOT with src as control, preceded by BCD relabelings of both pairs.
struct GateOp {
    size_t src = 0;
    size_t dst = 1;
    BcdPerm bcd_src;
    BcdPerm bcd_dst;
    friend bool operator==(const GateOp &, const GateOp &) = default;
};

/// Coincidence measurement of one pair; reset loads a fresh raw pair into it.
struct MeasureOp {
    size_t pair = 1;
    Basis basis = Basis::coin_z;
    bool reset = false;
    friend bool operator==(const MeasureOp &, const MeasureOp &) = default;
};

struct SwapOp {
    size_t a = 0;
    size_t b = 1;
    friend bool operator==(const SwapOp &, const SwapOp &) = default;
};

/// Relabeling of the output pair, allowed only as the last operation.
struct FinalBcdOp {
    BcdPerm perm;
    friend bool operator==(const FinalBcdOp &, const FinalBcdOp &) = default;
};

using CircuitOp = std::variant<GateOp, MeasureOp, SwapOp, FinalBcdOp>;

/// standard: every pair can receive raw pairs. hot_cold: only the last pair
/// (the communication pair) can be reloaded, gates act on neighbours only and
/// measurements elsewhere consume their pair.
enum class Mode { standard, hot_cold };

inline std::string mode_name(Mode m) {
    return m == Mode::standard ? "standard" : "hot_cold";
}

inline Mode mode_from_name(const std::string &s) {
    if (s == "standard") {
        return Mode::standard;
    }
    if (s == "hot_cold") {
        return Mode::hot_cold;
    }
    throw std::invalid_argument("unknown circuit mode '" + s + "'");
}

struct Circuit {
    size_t width = 2;
    std::vector<CircuitOp> ops;
    Mode mode = Mode::standard;
    nlohmann::json metadata = nlohmann::json::object();

    friend bool operator==(const Circuit &a, const Circuit &b) {
        return a.width == b.width && a.ops == b.ops && a.mode == b.mode && a.metadata == b.metadata;
    }

    size_t communication_pair() const {
        return width - 1;
    }

    /// Raw pairs consumed by a run in which every measurement succeeds.
    size_t raw_pairs_best_case() const {
        size_t n = width;
        for (const auto &op : ops) {
            if (auto m = std::get_if<MeasureOp>(&op); m && m->reset) {
                n++;
            }
        }
        return n;
    }
};

class CircuitError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Pairs touched by an operation (FinalBcd touches pair 0).
inline std::vector<size_t> op_pairs(const CircuitOp &op) {
    return std::visit(
        [](const auto &o) -> std::vector<size_t> {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                return {o.src, o.dst};
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                return {o.pair};
            } else if constexpr (std::is_same_v<T, SwapOp>) {
                return {o.a, o.b};
            } else {
                return {0};
            }
        },
        op);
}

inline bool is_two_pair_op(const CircuitOp &op) {
    return std::holds_alternative<GateOp>(op) || std::holds_alternative<SwapOp>(op);
}

/// Throws CircuitError when a structural invariant is violated.
inline void validate(const Circuit &c) {
    if (c.width == 0 || c.width > 8) {
        throw CircuitError("circuit width must lie in [1, 8]");
    }
    std::vector<bool> alive(c.width, true);
    for (size_t i = 0; i < c.ops.size(); i++) {
        const auto &op = c.ops[i];
        std::string where = "op " + std::to_string(i) + ": ";
        for (size_t p : op_pairs(op)) {
            if (p >= c.width) {
                throw CircuitError(where + "pair index " + std::to_string(p) + " out of range for width " +
                                   std::to_string(c.width));
            }
        }
        if (std::holds_alternative<FinalBcdOp>(op) && i + 1 != c.ops.size()) {
            throw CircuitError(where + "final_bcd must be the last operation");
        }
        if (auto g = std::get_if<GateOp>(&op)) {
            if (g->src == g->dst) {
                throw CircuitError(where + "gate source and target coincide");
            }
            if (!alive[g->src] || !alive[g->dst]) {
                throw CircuitError(where + "gate uses a consumed pair");
            }
            if (c.mode == Mode::hot_cold && (g->src > g->dst ? g->src - g->dst : g->dst - g->src) != 1) {
                throw CircuitError(where + "hot_cold gates must act on neighbouring pairs");
            }
        } else if (auto s = std::get_if<SwapOp>(&op)) {
            if (s->a == s->b) {
                throw CircuitError(where + "swap of a pair with itself");
            }
            if (c.mode == Mode::hot_cold) {
                if ((s->a > s->b ? s->a - s->b : s->b - s->a) != 1) {
                    throw CircuitError(where + "hot_cold swaps must act on neighbouring pairs");
                }
                std::swap(alive[s->a], alive[s->b]);
            } else if (!alive[s->a] || !alive[s->b]) {
                throw CircuitError(where + "swap uses a consumed pair");
            }
        } else if (auto m = std::get_if<MeasureOp>(&op)) {
            if (m->pair == 0) {
                throw CircuitError(where + "the preserved pair 0 can not be measured");
            }
            if (!alive[m->pair]) {
                throw CircuitError(where + "measurement of a consumed pair");
            }
            if (c.mode == Mode::hot_cold && m->reset && m->pair != c.communication_pair()) {
                throw CircuitError(where + "hot_cold resets are only available on the communication pair");
            }
            alive[m->pair] = m->reset;
        } else if (!alive[0]) {
            throw CircuitError(where + "final_bcd on a consumed pair");
        }
    }
    if (!alive[0]) {
        throw CircuitError("the preserved pair was consumed");
    }
}

struct CanonicalResult {
    std::optional<Circuit> circuit;
    /// Name of the violated filter when rejected.
    std::string rejected_rule;

    bool accepted() const {
        return circuit.has_value();
    }
};

namespace rule {
inline constexpr const char *FIRST_IS_MEASUREMENT = "first operation is not a measurement";
inline constexpr const char *CONSECUTIVE_MEASUREMENTS = "no two consecutive measurements on the same pair";
inline constexpr const char *UNUSED_PAIR = "no unused pairs";
inline constexpr const char *MEASURES_PRESERVED = "no measurement or reset of the preserved pair";
inline constexpr const char *LAST_NOT_MEASUREMENT = "last operation is a measurement";
}  // namespace rule

/// Returns the name of the first filter the circuit fails, or nullptr.
inline const char *canonical_filter_violation(const Circuit &c) {
    // The optional trailing final_bcd is not a step of its own for these rules.
    size_t n = c.ops.size();
    if (n > 0 && std::holds_alternative<FinalBcdOp>(c.ops.back())) {
        n--;
    }
    if (n > 0 && std::holds_alternative<MeasureOp>(c.ops[0])) {
        return rule::FIRST_IS_MEASUREMENT;
    }
    std::vector<int> last_kind(c.width, 0);  // 0 none, 1 gate, 2 measurement
    std::vector<bool> used(c.width, false);
    for (size_t i = 0; i < n; i++) {
        const auto &op = c.ops[i];
        if (auto m = std::get_if<MeasureOp>(&op)) {
            if (m->pair == 0) {
                return rule::MEASURES_PRESERVED;
            }
            if (m->pair < c.width && last_kind[m->pair] == 2) {
                return rule::CONSECUTIVE_MEASUREMENTS;
            }
        }
        int kind = std::holds_alternative<MeasureOp>(op) ? 2 : 1;
        for (size_t p : op_pairs(op)) {
            if (p < c.width) {
                last_kind[p] = kind;
                used[p] = true;
            }
        }
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        return rule::UNUSED_PAIR;
    }
    if (n == 0 || !std::holds_alternative<MeasureOp>(c.ops[n - 1])) {
        return rule::LAST_NOT_MEASUREMENT;
    }
    return nullptr;
}

/// Renames pairs by mapping[old] = new.
inline Circuit relabel_pairs(const Circuit &c, const std::vector<size_t> &mapping) {
    Circuit r = c;
    for (auto &op : r.ops) {
        std::visit(
            [&](auto &o) {
                using T = std::decay_t<decltype(o)>;
                if constexpr (std::is_same_v<T, GateOp>) {
                    o.src = mapping[o.src];
                    o.dst = mapping[o.dst];
                } else if constexpr (std::is_same_v<T, MeasureOp>) {
                    o.pair = mapping[o.pair];
                } else if constexpr (std::is_same_v<T, SwapOp>) {
                    o.a = mapping[o.a];
                    o.b = mapping[o.b];
                }
            },
            op);
    }
    return r;
}

namespace detail {

/// Pair 1 is the pair measured last, pair 2 the one measured last before
/// that, and so on; unmeasured pairs follow in their original order.
inline std::vector<size_t> measurement_order_relabeling(const Circuit &c) {
    std::vector<std::ptrdiff_t> last(c.width, -1);
    for (size_t i = 0; i < c.ops.size(); i++) {
        if (auto m = std::get_if<MeasureOp>(&c.ops[i])) {
            last[m->pair] = static_cast<std::ptrdiff_t>(i);
        }
    }
    std::vector<size_t> order(c.width > 0 ? c.width - 1 : 0);
    std::iota(order.begin(), order.end(), size_t{1});
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        bool ma = last[a] >= 0;
        bool mb = last[b] >= 0;
        if (ma != mb) {
            return ma;
        }
        return ma && last[a] > last[b];
    });
    std::vector<size_t> mapping(c.width, 0);
    for (size_t k = 0; k < order.size(); k++) {
        mapping[order[k]] = k + 1;
    }
    return mapping;
}

inline bool ops_depend(const CircuitOp &a, const CircuitOp &b) {
    if (std::holds_alternative<FinalBcdOp>(a) || std::holds_alternative<FinalBcdOp>(b)) {
        return true;
    }
    if (std::holds_alternative<MeasureOp>(a) && std::holds_alternative<MeasureOp>(b)) {
        return true;
    }
    for (size_t p : op_pairs(a)) {
        for (size_t q : op_pairs(b)) {
            if (p == q) {
                return true;
            }
        }
    }
    return false;
}

/// Gates before measurements, gates ordered by their topmost pair.
inline std::tuple<int, size_t, size_t> op_rank(const CircuitOp &op) {
    if (is_two_pair_op(op)) {
        auto p = op_pairs(op);
        return {0, std::min(p[0], p[1]), std::max(p[0], p[1])};
    }
    if (std::holds_alternative<MeasureOp>(op)) {
        return {1, 0, 0};
    }
    return {2, 0, 0};
}

/// Lexicographically smallest reordering reachable by exchanging adjacent
/// independent operations. Measurements keep their relative order.
inline std::vector<CircuitOp> commutation_normal_form(const std::vector<CircuitOp> &ops) {
    size_t n = ops.size();
    std::vector<std::vector<size_t>> preds(n);
    for (size_t j = 0; j < n; j++) {
        for (size_t i = 0; i < j; i++) {
            if (ops_depend(ops[i], ops[j])) {
                preds[j].push_back(i);
            }
        }
    }
    std::vector<bool> placed(n, false);
    std::vector<CircuitOp> out;
    out.reserve(n);
    for (size_t step = 0; step < n; step++) {
        std::optional<size_t> best;
        for (size_t j = 0; j < n; j++) {
            if (placed[j]) {
                continue;
            }
            bool ready = std::all_of(preds[j].begin(), preds[j].end(), [&](size_t i) { return placed[i]; });
            if (ready && (!best || op_rank(ops[j]) < op_rank(ops[*best]))) {
                best = j;
            }
        }
        placed[*best] = true;
        out.push_back(ops[*best]);
    }
    return out;
}

}  // namespace detail

/// Filters redundant circuits and rewrites the rest into a canonical
/// representative.
///
/// Rejected: a measurement first, two measurements of one pair with nothing
/// in between on that pair, unused pairs, measurements of pair 0, and a last
/// step that is not a measurement. Accepted circuits get their pairs renamed
/// by measurement order (standard mode only, hot_cold keeps its geometry),
/// then independent operations are reordered so gates precede measurements
/// and gates on upper pairs come first. The output is a fixed point.
/// Structural errors throw CircuitError.
inline CanonicalResult canonicalize(const Circuit &c) {
    if (const char *violated = canonical_filter_violation(c)) {
        return {std::nullopt, violated};
    }
    validate(c);
    Circuit r = c.mode == Mode::standard ? relabel_pairs(c, detail::measurement_order_relabeling(c)) : c;
    r.ops = detail::commutation_normal_form(r.ops);
    return {std::move(r), {}};
}

/// Reference circuits.
///
///   single_selection, fig1: one sacrificial pair checked with coinZ.
///   double_selection: a second sacrificial pair catches the Z errors left on
///     the first one through a coinX check.
///   triple_selection: double selection plus a third detection layer, the
///     best such extension at F0 = 1 found by exhaustive search.
inline Circuit builtin(const std::string &name) {
    Circuit c;
    auto gate = [](size_t src, size_t dst, const char *bs = "BCD", const char *bd = "BCD") {
        return GateOp{src, dst, BcdPerm::from_name(bs), BcdPerm::from_name(bd)};
    };
    if (name == "single_selection" || name == "fig1") {
        c.width = 2;
        c.ops = {gate(0, 1), MeasureOp{1, Basis::coin_z, false}};
    } else if (name == "double_selection") {
        c.width = 3;
        c.ops = {gate(0, 1), gate(2, 1), MeasureOp{2, Basis::coin_x, false}, MeasureOp{1, Basis::coin_z, false}};
    } else if (name == "triple_selection") {
        c.width = 4;
        c.ops = {gate(0, 1), gate(1, 3, "CBD", "BCD"), gate(2, 1), MeasureOp{3, Basis::anti_y, false},
                 MeasureOp{2, Basis::coin_x, false}, MeasureOp{1, Basis::coin_z, false}};
        c.metadata["selection"] =
            "exhaustive search over one extra gate on pair 3 (any partner, direction, position, BCD "
            "permutations) and its measurement basis, ranked by first-order infidelity at F0=1, eta=1, then "
            "infidelity at F0=1, p2=0.99, eta=1, then infidelity at F0=0.9, p2=eta=0.99, then success, then "
            "circuit key";
    } else {
        throw std::invalid_argument("unknown builtin circuit '" + name + "'");
    }
    c.metadata["builtin"] = name;
    return c;
}

inline const std::vector<std::string> &builtin_names() {
    static const std::vector<std::string> names{"single_selection", "double_selection", "triple_selection", "fig1"};
    return names;
}

/// Operations that may be redone on their own after a failed measurement.
struct Subcircuit {
    std::vector<size_t> ops;
    std::vector<size_t> pairs;
    friend bool operator==(const Subcircuit &, const Subcircuit &) = default;
};

/// Result of propagating colors through a circuit.
///
/// Every pair starts with its own color and gets a fresh one when reset;
/// two-pair operations merge the colors of their pairs.
struct ColorPartition {
    /// Component id of every operation, as of the end of the circuit.
    std::vector<size_t> op_component;
    /// Whether each component contains pair 0's color.
    std::vector<bool> component_has_preserved;
    /// For each operation that is a measurement whose component (at that time)
    /// excludes pair 0, the operations to redo when it fails.
    std::vector<std::optional<Subcircuit>> restart_scope;
    /// Maximal restartable subcircuits.
    std::vector<Subcircuit> subcircuits;
};

inline ColorPartition color_partition(const Circuit &c) {
    std::vector<size_t> parent;
    auto fresh = [&]() {
        parent.push_back(parent.size());
        return parent.size() - 1;
    };
    auto find = [&](size_t s) {
        while (parent[s] != s) {
            parent[s] = parent[parent[s]];
            s = parent[s];
        }
        return s;
    };
    constexpr size_t NONE = static_cast<size_t>(-1);
    std::vector<size_t> live(c.width);
    for (size_t p = 0; p < c.width; p++) {
        live[p] = fresh();
    }
    std::vector<bool> seg_touched(c.width, false);
    std::vector<size_t> op_seg(c.ops.size(), NONE);
    ColorPartition out;
    out.restart_scope.resize(c.ops.size());

    for (size_t i = 0; i < c.ops.size(); i++) {
        const auto &op = c.ops[i];
        if (is_two_pair_op(op)) {
            auto pr = op_pairs(op);
            size_t a = live[pr[0]];
            size_t b = live[pr[1]];
            if (a == NONE || b == NONE) {
                // Moving a consumed slot around; the live side keeps its color.
                op_seg[i] = a != NONE ? a : b;
            } else {
                parent[find(a)] = find(b);
                op_seg[i] = a;
            }
            if (std::holds_alternative<SwapOp>(op)) {
                std::swap(live[pr[0]], live[pr[1]]);
            }
            for (size_t s : {a, b}) {
                if (s != NONE) {
                    seg_touched[s] = true;
                }
            }
        } else if (auto m = std::get_if<MeasureOp>(&op)) {
            size_t seg = live[m->pair];
            op_seg[i] = seg;
            size_t root = find(seg);
            Subcircuit sc;
            for (size_t j = 0; j <= i; j++) {
                if (op_seg[j] != NONE && find(op_seg[j]) == root) {
                    sc.ops.push_back(j);
                }
            }
            // The preserved color is segment 0; with swaps it can also reach
            // pair 0 through another segment.
            bool has_preserved = find(0) == root;
            for (size_t j : sc.ops) {
                for (size_t p : op_pairs(c.ops[j])) {
                    has_preserved = has_preserved || p == 0;
                    if (std::find(sc.pairs.begin(), sc.pairs.end(), p) == sc.pairs.end()) {
                        sc.pairs.push_back(p);
                    }
                }
            }
            std::sort(sc.pairs.begin(), sc.pairs.end());
            // Each pair of the component must be free to be reloaded: held by
            // this component, consumed, or holding a fresh untouched pair.
            bool free = true;
            for (size_t p : sc.pairs) {
                size_t s = live[p];
                free = free && (s == NONE || find(s) == root || !seg_touched[s]);
            }
            if (!has_preserved && free) {
                out.restart_scope[i] = sc;
            }
            seg_touched[seg] = true;
            live[m->pair] = m->reset ? fresh() : NONE;
            seg_touched.resize(parent.size(), false);
        } else {
            op_seg[i] = live[0];
        }
        seg_touched.resize(parent.size(), false);
    }

    std::vector<size_t> root_ids;
    out.op_component.resize(c.ops.size());
    for (size_t i = 0; i < c.ops.size(); i++) {
        size_t r = op_seg[i] == NONE ? NONE : find(op_seg[i]);
        auto it = std::find(root_ids.begin(), root_ids.end(), r);
        if (it == root_ids.end()) {
            root_ids.push_back(r);
            it = root_ids.end() - 1;
        }
        out.op_component[i] = static_cast<size_t>(it - root_ids.begin());
    }
    for (size_t r : root_ids) {
        out.component_has_preserved.push_back(r != NONE && r == find(0));
    }

    for (size_t i = 0; i < c.ops.size(); i++) {
        if (!out.restart_scope[i]) {
            continue;
        }
        const auto &sc = *out.restart_scope[i];
        bool contained = false;
        for (size_t j = 0; j < c.ops.size() && !contained; j++) {
            if (j == i || !out.restart_scope[j]) {
                continue;
            }
            const auto &other = *out.restart_scope[j];
            bool subset = std::includes(other.ops.begin(), other.ops.end(), sc.ops.begin(), sc.ops.end());
            contained = subset && (other.ops.size() > sc.ops.size() || j > i);
        }
        if (!contained) {
            out.subcircuits.push_back(sc);
        }
    }
    return out;
}

}  // namespace purify

#endif
