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

#ifndef PURIFY_CIRCUIT_IO_HPP
#define PURIFY_CIRCUIT_IO_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "purify/circuit.hpp"

namespace purify {

// Circuit documents look like
//
//   {"version": 1, "width": 2, "mode": "standard",
//    "ops": [{"op": "gate", "src": 0, "dst": 1, "bcd_src": "BCD", "bcd_dst": "BCD"},
//            {"op": "measure", "pair": 1, "basis": "coinZ", "reset": false}],
//    "metadata": {}}
//
// with "swap" ops carrying "a"/"b" and "final_bcd" ops carrying "perm".

inline constexpr int CIRCUIT_FORMAT_VERSION = 1;

class ParseError : public std::runtime_error {
   public:
    ParseError(const std::string &field, const std::string &what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(field) {
    }

    const std::string &field() const {
        return field_;
    }

   private:
    std::string field_;
};

inline nlohmann::json op_to_json(const CircuitOp &op) {
    return std::visit(
        [](const auto &o) -> nlohmann::json {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                return {{"op", "gate"},
                        {"src", o.src},
                        {"dst", o.dst},
                        {"bcd_src", o.bcd_src.name()},
                        {"bcd_dst", o.bcd_dst.name()}};
            } else if constexpr (std::is_same_v<T, MeasureOp>) {
                return {{"op", "measure"}, {"pair", o.pair}, {"basis", basis_name(o.basis)}, {"reset", o.reset}};
            } else if constexpr (std::is_same_v<T, SwapOp>) {
                return {{"op", "swap"}, {"a", o.a}, {"b", o.b}};
            } else {
                return {{"op", "final_bcd"}, {"perm", o.perm.name()}};
            }
        },
        op);
}

inline nlohmann::json circuit_to_json(const Circuit &c) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto &op : c.ops) {
        ops.push_back(op_to_json(op));
    }
    return {{"version", CIRCUIT_FORMAT_VERSION},
            {"width", c.width},
            {"mode", mode_name(c.mode)},
            {"ops", std::move(ops)},
            {"metadata", c.metadata}};
}

inline std::string write_circuit(const Circuit &c) {
    return circuit_to_json(c).dump(2) + "\n";
}

/// Compact key identifying a circuit up to its metadata.
inline std::string circuit_key(const Circuit &c) {
    nlohmann::json j = circuit_to_json(c);
    j.erase("metadata");
    return j.dump();
}

namespace detail {

inline std::string join(const std::string &path, const char *key) {
    return path.empty() ? std::string(key) : path + "." + key;
}

inline const nlohmann::json &require(const nlohmann::json &obj, const char *key, const std::string &path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(join(path, key), "missing field");
    }
    return *it;
}

inline size_t read_index(const nlohmann::json &obj, const char *key, const std::string &path, size_t width) {
    const auto &v = require(obj, key, path);
    std::string field = join(path, key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(field, "expected a nonnegative integer");
    }
    auto idx = v.get<size_t>();
    if (idx >= width) {
        throw ParseError(field, "pair index " + std::to_string(idx) + " out of range for width " + std::to_string(width));
    }
    return idx;
}

inline std::string read_string(const nlohmann::json &obj, const char *key, const std::string &path) {
    const auto &v = require(obj, key, path);
    if (!v.is_string()) {
        throw ParseError(join(path, key), "expected a string");
    }
    return v.get<std::string>();
}

inline BcdPerm read_bcd(const nlohmann::json &obj, const char *key, const std::string &path) {
    std::string name = read_string(obj, key, path);
    try {
        return BcdPerm::from_name(name);
    } catch (const std::invalid_argument &e) {
        throw ParseError(join(path, key), e.what());
    }
}

}  // namespace detail

inline Circuit circuit_from_json(const nlohmann::json &j) {
    using namespace detail;
    if (!j.is_object()) {
        throw ParseError("", "circuit document must be a JSON object");
    }
    const auto &version = require(j, "version", "");
    if (!version.is_number_integer() || version.get<int>() != CIRCUIT_FORMAT_VERSION) {
        throw ParseError("version", "unsupported circuit format version");
    }
    Circuit c;
    const auto &width = require(j, "width", "");
    if (!width.is_number_integer() || width.get<long long>() < 1 || width.get<long long>() > 8) {
        throw ParseError("width", "expected an integer in [1, 8]");
    }
    c.width = width.get<size_t>();
    if (auto it = j.find("mode"); it != j.end()) {
        try {
            c.mode = mode_from_name(it->get<std::string>());
        } catch (const std::exception &e) {
            throw ParseError("mode", e.what());
        }
    }
    const auto &ops = require(j, "ops", "");
    if (!ops.is_array()) {
        throw ParseError("ops", "expected an array");
    }
    for (size_t i = 0; i < ops.size(); i++) {
        std::string path = "ops[" + std::to_string(i) + "]";
        const auto &o = ops[i];
        if (!o.is_object()) {
            throw ParseError(path, "expected an object");
        }
        std::string kind = read_string(o, "op", path);
        if (kind == "gate") {
            c.ops.push_back(GateOp{read_index(o, "src", path, c.width), read_index(o, "dst", path, c.width),
                                   read_bcd(o, "bcd_src", path), read_bcd(o, "bcd_dst", path)});
        } else if (kind == "measure") {
            MeasureOp m;
            m.pair = read_index(o, "pair", path, c.width);
            try {
                m.basis = basis_from_name(read_string(o, "basis", path));
            } catch (const std::invalid_argument &e) {
                throw ParseError(path + ".basis", e.what());
            }
            const auto &reset = require(o, "reset", path);
            if (!reset.is_boolean()) {
                throw ParseError(path + ".reset", "expected a boolean");
            }
            m.reset = reset.get<bool>();
            c.ops.push_back(m);
        } else if (kind == "swap") {
            c.ops.push_back(SwapOp{read_index(o, "a", path, c.width), read_index(o, "b", path, c.width)});
        } else if (kind == "final_bcd") {
            c.ops.push_back(FinalBcdOp{read_bcd(o, "perm", path)});
        } else {
            throw ParseError(path + ".op", "unknown operation '" + kind + "'");
        }
    }
    if (auto it = j.find("metadata"); it != j.end()) {
        c.metadata = *it;
    }
    try {
        validate(c);
    } catch (const CircuitError &e) {
        throw ParseError("ops", e.what());
    }
    return c;
}

inline Circuit read_circuit(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        size_t line = 1;
        for (size_t k = 0; k < e.byte && k < text.size(); k++) {
            line += text[k] == '\n';
        }
        throw ParseError("line " + std::to_string(line), e.what());
    }
    return circuit_from_json(j);
}

inline Circuit load_circuit_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("can not open circuit file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return read_circuit(buf.str());
    } catch (const ParseError &e) {
        throw ParseError(path + ": " + e.field(), std::string(e.what()).substr(e.field().empty() ? 0 : e.field().size() + 2));
    }
}

}  // namespace purify

#endif
