// Copyright 2026 The intermed Authors
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

#ifndef INTERMED_INTERMED_HPP_
#define INTERMED_INTERMED_HPP_

#include "intermed/claims.hpp"
#include "intermed/distribution.hpp"
#include "intermed/errors.hpp"
#include "intermed/io.hpp"
#include "intermed/mechanisms.hpp"
#include "intermed/numerics.hpp"
#include "intermed/oracles.hpp"
#include "intermed/revenue.hpp"
#include "intermed/rng.hpp"
#include "intermed/solvers.hpp"

#endif  // INTERMED_INTERMED_HPP_
