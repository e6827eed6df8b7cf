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

#ifndef MIXTILE_ORACLE_H_
#define MIXTILE_ORACLE_H_

// Slow reference implementations, kept independent of the fast paths they
// check. Shipped so `mixtile plan --verify` can run them on user inputs.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mixtile/combiner.h"
#include "mixtile/filter.h"
#include "mixtile/hardware.h"
#include "mixtile/perf_model.h"
#include "mixtile/plan.h"
#include "mixtile/sia.h"

namespace mixtile::oracle {

// Every (a, n1), (b, n2) with n1 * a + n2 * b == h by exhaustive loops,
// plus single tiles dividing h. Sorted like combin_search.
std::vector<Combination> brute_force_combinations(
    std::span<const std::int64_t> tiles, std::int64_t h);

// Walks the sweep point by point; 1-based step of first retention.
std::optional<std::int64_t> walk_sweep(double pad, double occ,
                                       const SweepParams& sweep);

struct RankCheck {
  std::size_t pool_size = 0;
  std::size_t top_k = 0;
  std::size_t model_best = 0;   // index into the pool
  double best_total_s = 0;
  double top1_total_s = 0;
  double topk_best_total_s = 0;  // fastest plan within the SIA Top-K
  double tolerance = 0;
  bool top1_within = false;  // top1 <= best * (1 + tolerance)
  bool topk_within = false;
};

// Estimates every plan with the perf model, ranks the pool by SIA and
// reports how close the SIA picks come to the model's best plan.
RankCheck exhaustive_rank_check(const std::vector<ProgramPlan>& pool,
                                const WorkloadInstance& instance,
                                const HardwareDescriptor& hw,
                                const SiaCoeffs& coeffs,
                                std::size_t top_k = 10,
                                double tolerance = 0.10);

// "key: value" lines.
std::string format(const RankCheck& check);

// Main-axis coverage recomputed from the parts alone.
std::int64_t tau_coverage(const ProgramPlan& plan, int tau);

}  // namespace mixtile::oracle

#endif  // MIXTILE_ORACLE_H_
