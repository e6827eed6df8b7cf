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

#include "mixtile/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace mixtile::oracle {

std::vector<Combination> brute_force_combinations(
    std::span<const std::int64_t> tiles, std::int64_t h) {
  std::set<Combination> found;
  for (std::int64_t a : tiles) {
    if (a < 1) continue;
    if (h >= 1 && h % a == 0) found.insert(Combination{{{a, h / a}}});
    for (std::int64_t b : tiles) {
      if (b <= a) continue;
      for (std::int64_t n1 = 1; n1 * a < h; ++n1) {
        const std::int64_t rest = h - n1 * a;
        if (rest % b == 0) found.insert(Combination{{{a, n1}, {b, rest / b}}});
      }
    }
  }
  return {found.begin(), found.end()};
}

std::optional<std::int64_t> walk_sweep(double pad, double occ,
                                       const SweepParams& sweep) {
  const std::int64_t eps_max = std::llround(sweep.eps_max * 1e6);
  const std::int64_t lam_min = std::llround(sweep.lam_min * 1e6);
  const std::int64_t de = std::llround(sweep.eps_step * 1e6);
  const std::int64_t dl = std::llround(sweep.lam_step * 1e6);
  std::int64_t eps = std::llround(sweep.eps_min * 1e6);
  std::int64_t lam = std::llround(sweep.lam_max * 1e6);
  for (std::int64_t step = 1; eps <= eps_max && lam >= lam_min; ++step) {
    if (pad >= static_cast<double>(eps) / 1e6 &&
        occ >= static_cast<double>(lam) / 1e6) {
      return step;
    }
    eps += de;
    lam -= dl;
  }
  return std::nullopt;
}

RankCheck exhaustive_rank_check(const std::vector<ProgramPlan>& pool,
                                const WorkloadInstance& instance,
                                const HardwareDescriptor& hw,
                                const SiaCoeffs& coeffs, std::size_t top_k,
                                double tolerance) {
  RankCheck r;
  r.pool_size = pool.size();
  r.tolerance = tolerance;
  if (pool.empty()) return r;

  r.best_total_s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double t = estimate_time(pool[i], instance, hw).total_s;
    if (t < r.best_total_s) {
      r.best_total_s = t;
      r.model_best = i;
    }
  }
  const std::vector<ProgramPlan> top =
      rank_programs(pool, coeffs, RankOptions{top_k, false});
  r.top_k = top.size();
  r.top1_total_s = estimate_time(top.front(), instance, hw).total_s;
  r.topk_best_total_s = std::numeric_limits<double>::infinity();
  for (const ProgramPlan& p : top) {
    r.topk_best_total_s =
        std::min(r.topk_best_total_s, estimate_time(p, instance, hw).total_s);
  }
  const double limit = r.best_total_s * (1 + tolerance);
  r.top1_within = r.top1_total_s <= limit;
  r.topk_within = r.topk_best_total_s <= limit;
  return r;
}

std::string format(const RankCheck& c) {
  std::ostringstream os;
  os.precision(9);
  os << "pool_size: " << c.pool_size << "\n"
     << "top_k: " << c.top_k << "\n"
     << "model_best_index: " << c.model_best << "\n"
     << "model_best_total_s: " << c.best_total_s << "\n"
     << "sia_top1_total_s: " << c.top1_total_s << "\n"
     << "sia_topk_best_total_s: " << c.topk_best_total_s << "\n"
     << "tolerance: " << c.tolerance << "\n"
     << "top1_within: " << (c.top1_within ? "true" : "false") << "\n"
     << "topk_within: " << (c.topk_within ? "true" : "false") << "\n";
  return os.str();
}

std::int64_t tau_coverage(const ProgramPlan& plan, int tau) {
  std::int64_t total = 0;
  for (const PlanPart& p : plan.parts) {
    total += p.count * static_cast<std::int64_t>(p.kernel.smem_tile.values()[tau]);
  }
  return total;
}

}  // namespace mixtile::oracle
