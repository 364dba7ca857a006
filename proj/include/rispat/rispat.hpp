// Copyright 2026 The rispat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Umbrella header.

#ifndef RISPAT_RISPAT_HPP_
#define RISPAT_RISPAT_HPP_

#include "rispat/numerics.hpp"
#include "rispat/scenario.hpp"
#include "rispat/reduction.hpp"
#include "rispat/arrangement.hpp"
#include "rispat/traversal.hpp"
#include "rispat/baselines.hpp"
#include "rispat/pat.hpp"
#include "rispat/epat.hpp"
#include "rispat/config.hpp"
#include "rispat/bench.hpp"

#endif  // RISPAT_RISPAT_HPP_
