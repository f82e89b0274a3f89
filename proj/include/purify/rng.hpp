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

#ifndef PURIFY_RNG_HPP
#define PURIFY_RNG_HPP

#include <cstdint>
#include <random>

namespace purify {

using Rng = std::mt19937_64;

/// Independent stream for one (stage, slot) of a seeded computation, so that
/// results do not depend on evaluation order or worker count.
inline Rng make_rng(uint64_t seed, uint64_t stage, uint64_t slot) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(stage),
                      static_cast<uint32_t>(stage >> 32), static_cast<uint32_t>(slot), static_cast<uint32_t>(slot >> 32)};
    return Rng(seq);
}

}  // namespace purify

#endif
