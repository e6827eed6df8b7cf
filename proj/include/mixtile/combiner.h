// Copyright 2026 The mixtile Authors
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

#ifndef MIXTILE_COMBINER_H_
#define MIXTILE_COMBINER_H_

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "mixtile/plan.h"
#include "mixtile/ukernel.h"
#include "mixtile/workload.h"

namespace mixtile {

// Largest space axis of the shape. Ties prefer a dynamic axis, then the
// lexicographically smaller name.
int select_main_axis(const WorkloadInstance& instance);

struct CombinationPart {
  std::int64_t tile = 0;
  std::int64_t count = 0;
  friend auto operator<=>(const CombinationPart&,
                          const CombinationPart&) = default;
};

// One or two (tile, count) pairs whose sum of tile * count is exactly H.
// Parts are sorted by tile.
struct Combination {
  std::vector<CombinationPart> parts;
  friend auto operator<=>(const Combination&, const Combination&) = default;
  friend bool operator==(const Combination&, const Combination&) = default;
};

// Every way to cover H exactly with one tile size, or with two distinct
// tile sizes each used at least once. Sorted, duplicate-free; empty when no
// combination exists.
std::vector<Combination> combin_search(std::span<const std::int64_t> tiles,
                                       std::int64_t h);

// Program pool for a shape: a single-uKernel plan for every candidate whose
// main-axis tile divides the main-axis extent, and a two-uKernel plan for
// every two-tile combination realised by candidates that agree on all other
// shared-memory tiles. Plans come back in canonical order. Throws
// Error(kEmptyResult) when nothing covers the main axis.
ProgramPool build_programs(std::span<const UKernel> candidates,
                           const WorkloadInstance& instance);

}  // namespace mixtile

#endif  // MIXTILE_COMBINER_H_
