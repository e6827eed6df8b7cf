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

#ifndef MIXTILE_PLAN_H_
#define MIXTILE_PLAN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixtile/ukernel.h"
#include "mixtile/workload.h"

namespace mixtile {

// Analytical execution-time breakdown of a plan, in seconds.
struct TimeEstimate {
  double compute_s = 0;
  double memory_s = 0;
  double padding_s = 0;  // share of compute_s spent on padded elements
  double total_s = 0;
  std::int64_t waves = 0;
};

struct PlanPart {
  UKernel kernel;
  std::int64_t count = 0;  // repetitions along the main axis
};

// One or two uKernels covering a concrete shape. Parts are ordered by their
// main-axis tile; together they cover the main axis without padding.
struct ProgramPlan {
  std::vector<PlanPart> parts;
  std::optional<double> sia;
  std::optional<TimeEstimate> est;
};

// Canonical plan order: fewer parts first, then parts compared by
// (uKernel canonical order, count).
bool canonical_less(const ProgramPlan& a, const ProgramPlan& b);
bool same_parts(const ProgramPlan& a, const ProgramPlan& b);

// Every program built for one shape, all sharing the main axis `tau`.
struct ProgramPool {
  WorkloadInstance instance;
  int tau = -1;
  std::vector<ProgramPlan> plans;
};

// Checks the plan invariants against a shape: one or two parts, positive
// counts, zero padding along tau, identical non-tau tiles across parts.
std::optional<std::string> check_plan(const ProgramPlan& plan,
                                      const WorkloadInstance& instance,
                                      int tau);

// Extent each space axis is padded to under the plan, by axis index
// (reduce axes report their true extent).
std::vector<std::int64_t> covered_extents(const ProgramPlan& plan,
                                          const WorkloadInstance& instance,
                                          int tau);

// (covered - true) / covered over the output space.
double padding_fraction(const ProgramPlan& plan,
                        const WorkloadInstance& instance, int tau);

// Thread blocks the plan launches in total.
std::int64_t plan_blocks(const ProgramPlan& plan,
                         const WorkloadInstance& instance, int tau);

}  // namespace mixtile

#endif  // MIXTILE_PLAN_H_
