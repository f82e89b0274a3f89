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

#ifndef PURIFY_PURIFY_HPP
#define PURIFY_PURIFY_HPP

#include "purify/bell.hpp"
#include "purify/circuit.hpp"
#include "purify/circuit_io.hpp"
#include "purify/clifford.hpp"
#include "purify/evaluator.hpp"
#include "purify/montecarlo.hpp"
#include "purify/optimizer.hpp"
#include "purify/oracle.hpp"
#include "purify/poly.hpp"
#include "purify/rng.hpp"

#endif
