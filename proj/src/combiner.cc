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

#include "mixtile/combiner.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>

#include "mixtile/error.h"

namespace mixtile {
namespace {

// Inverse of a modulo m for coprime a, m (m >= 1).
std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = a % m, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  std::int64_t inv = old_s % m;
  return inv < 0 ? inv + m : inv;
}

// All n1, n2 >= 1 with n1 * a + n2 * b == h, for a < b. Solutions of the
// linear Diophantine equation step n1 by b / gcd(a, b).
void pair_solutions(std::int64_t a, std::int64_t b, std::int64_t h,
                    std::vector<Combination>& out) {
  const std::int64_t g = std::gcd(a, b);
  if (h % g != 0) return;
  const std::int64_t ag = a / g, bg = b / g, hg = h / g;
  std::int64_t n1 = bg == 1 ? 0 : (hg % bg) * mod_inverse(ag, bg) % bg;
  if (n1 == 0) n1 = bg;
  for (; a * n1 <= h - b; n1 += bg) {
    const std::int64_t n2 = (h - a * n1) / b;
    out.push_back(Combination{{{a, n1}, {b, n2}}});
  }
}

TileVec off_tau_key(const TileVec& smem, int tau) {
  TileVec key = smem;
  key.set(tau, 0);
  return key;
}

}  // namespace

int select_main_axis(const WorkloadInstance& instance) {
  const OperatorSpec& spec = instance.spec();
  int best = -1;
  for (int a : spec.space_axes()) {
    if (best < 0) {
      best = a;
      continue;
    }
    const std::int64_t ea = instance.extent(a), eb = instance.extent(best);
    if (ea != eb) {
      if (ea > eb) best = a;
      continue;
    }
    const bool da = spec.axes()[a].dynamic, db = spec.axes()[best].dynamic;
    if (da != db) {
      if (da) best = a;
      continue;
    }
    if (spec.axes()[a].name < spec.axes()[best].name) best = a;
  }
  return best;
}

std::vector<Combination> combin_search(std::span<const std::int64_t> tiles,
                                       std::int64_t h) {
  std::vector<std::int64_t> sizes;
  for (std::int64_t t : tiles) {
    if (t >= 1) sizes.push_back(t);
  }
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<Combination> out;
  if (h < 1) return out;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (h % sizes[i] == 0) {
      out.push_back(Combination{{{sizes[i], h / sizes[i]}}});
    }
    for (std::size_t j = i + 1; j < sizes.size(); ++j) {
      pair_solutions(sizes[i], sizes[j], h, out);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProgramPool build_programs(std::span<const UKernel> candidates,
                           const WorkloadInstance& instance) {
  const int tau = select_main_axis(instance);
  const std::int64_t h = instance.extent(tau);
  ProgramPool pool{instance, tau, {}};

  std::vector<const UKernel*> sorted;
  sorted.reserve(candidates.size());
  for (const UKernel& k : candidates) sorted.push_back(&k);
  std::sort(sorted.begin(), sorted.end(),
            [](const UKernel* a, const UKernel* b) { return *a < *b; });
  sorted.erase(std::unique(sorted.begin(), sorted.end(),
                           [](const UKernel* a, const UKernel* b) {
                             return same_tiles(*a, *b);
                           }),
               sorted.end());

  for (const UKernel* k : sorted) {
    const std::int64_t t = k->smem_tile[tau];
    if (h % t == 0) pool.plans.push_back(ProgramPlan{{{*k, h / t}}, {}, {}});
  }

  // Two-part plans only pair uKernels that tile the other axes identically.
  std::map<TileVec, std::map<std::int64_t, std::vector<const UKernel*>>>
      groups;
  for (const UKernel* k : sorted) {
    groups[off_tau_key(k->smem_tile, tau)][k->smem_tile[tau]].push_back(k);
  }
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<Combination>>
      memo;
  for (const auto& [key, by_tile] : groups) {
    for (auto ia = by_tile.begin(); ia != by_tile.end(); ++ia) {
      for (auto ib = std::next(ia); ib != by_tile.end(); ++ib) {
        auto [it, inserted] = memo.try_emplace({ia->first, ib->first});
        if (inserted) pair_solutions(ia->first, ib->first, h, it->second);
        for (const Combination& c : it->second) {
          for (const UKernel* ka : ia->second) {
            for (const UKernel* kb : ib->second) {
              pool.plans.push_back(ProgramPlan{
                  {{*ka, c.parts[0].count}, {*kb, c.parts[1].count}}, {}, {}});
            }
          }
        }
      }
    }
  }

  if (pool.plans.empty()) {
    throw Error(ErrorKind::kEmptyResult,
                "no uKernel or uKernel pair covers main axis '" +
                    instance.spec().axes()[tau].name + "' (extent " +
                    std::to_string(h) +
                    ") without padding; relax the compile-stage filters or "
                    "widen the candidate set");
  }
  std::sort(pool.plans.begin(), pool.plans.end(), canonical_less);
  return pool;
}

bool canonical_less(const ProgramPlan& a, const ProgramPlan& b) {
  if (a.parts.size() != b.parts.size()) return a.parts.size() < b.parts.size();
  for (std::size_t i = 0; i < a.parts.size(); ++i) {
    const PlanPart& pa = a.parts[i];
    const PlanPart& pb = b.parts[i];
    if (!same_tiles(pa.kernel, pb.kernel)) return pa.kernel < pb.kernel;
    if (pa.count != pb.count) return pa.count < pb.count;
  }
  return false;
}

bool same_parts(const ProgramPlan& a, const ProgramPlan& b) {
  return !canonical_less(a, b) && !canonical_less(b, a);
}

std::optional<std::string> check_plan(const ProgramPlan& plan,
                                      const WorkloadInstance& instance,
                                      int tau) {
  if (plan.parts.empty() || plan.parts.size() > 2) {
    return "plan must have one or two parts";
  }
  std::int64_t covered = 0;
  for (const PlanPart& p : plan.parts) {
    if (p.count < 1) return "part count must be >= 1";
    covered += p.count * p.kernel.smem_tile[tau];
  }
  if (covered != instance.extent(tau)) {
    return "parts cover " + std::to_string(covered) + " of main-axis extent " +
           std::to_string(instance.extent(tau));
  }
  if (plan.parts.size() == 2) {
    const TileVec& a = plan.parts[0].kernel.smem_tile;
    const TileVec& b = plan.parts[1].kernel.smem_tile;
    if (off_tau_key(a, tau) != off_tau_key(b, tau)) {
      return "parts disagree on tiles off the main axis";
    }
    if (a[tau] == b[tau]) return "parts share the same main-axis tile";
  }
  return std::nullopt;
}

std::vector<std::int64_t> covered_extents(const ProgramPlan& plan,
                                          const WorkloadInstance& instance,
                                          int tau) {
  const OperatorSpec& spec = instance.spec();
  std::vector<std::int64_t> out = instance.extents();
  const TileVec& smem = plan.parts.front().kernel.smem_tile;
  for (int a : spec.space_axes()) {
    if (a == tau) {
      std::int64_t c = 0;
      for (const PlanPart& p : plan.parts) c += p.count * p.kernel.smem_tile[a];
      out[a] = c;
    } else {
      out[a] = ceil_by(instance.extent(a), smem[a]);
    }
  }
  return out;
}

double padding_fraction(const ProgramPlan& plan,
                        const WorkloadInstance& instance, int tau) {
  const auto cov = covered_extents(plan, instance, tau);
  double covered = 1, actual = 1;
  for (int a : instance.spec().space_axes()) {
    covered *= static_cast<double>(cov[a]);
    actual *= static_cast<double>(instance.extent(a));
  }
  return (covered - actual) / covered;
}

std::int64_t plan_blocks(const ProgramPlan& plan,
                         const WorkloadInstance& instance, int tau) {
  std::int64_t total = 0;
  for (const PlanPart& p : plan.parts) {
    std::int64_t blocks = p.count;
    for (int a : instance.spec().space_axes()) {
      if (a != tau) blocks *= ceil_div(instance.extent(a), p.kernel.smem_tile[a]);
    }
    total += blocks;
  }
  return total;
}

}  // namespace mixtile
