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

#include "mixtile/sia.h"

#include <algorithm>
#include <cmath>

#include "mixtile/error.h"

namespace mixtile {
namespace {

struct Metrics3 {
  double cmr, pad, occ;
};

Metrics3 raw_metrics(const PlanPart& part) {
  if (!part.kernel.cached) {
    throw Error(ErrorKind::kValidation,
                "plan part has no cached metrics; evaluate it first",
                "cached");
  }
  const CachedMetrics& c = *part.kernel.cached;
  return {c.compute_eff, c.padding_threshold, c.usage_eff};
}

// Coefficients divided by their maximum and snapped to a 2^-40 grid, so a
// joint rescaling yields bit-identical weights.
SiaCoeffs ranking_coeffs(const SiaCoeffs& c) {
  const double m = std::max({c.c0, c.c1, c.c2});
  auto snap = [m](double v) {
    return std::round(v / m * 0x1p40) * 0x1p-40;
  };
  return {snap(c.c0), snap(c.c1), snap(c.c2)};
}

struct MinMax {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double scale(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 1.0; }
};

struct Keyed {
  double score;
  double mean_pad;
  std::size_t index;
};

}  // namespace

void validate(const SiaCoeffs& coeffs) {
  const double c[] = {coeffs.c0, coeffs.c1, coeffs.c2};
  const char* names[] = {"c0", "c1", "c2"};
  for (int i = 0; i < 3; ++i) {
    if (!std::isfinite(c[i]) || c[i] < 0) {
      throw_validation(names[i], "coefficient must be finite and >= 0");
    }
  }
  if (c[0] == 0 && c[1] == 0 && c[2] == 0) {
    throw_validation("coeffs", "at least one coefficient must be positive");
  }
}

SiaTerms part_terms(const PlanPart& part, const SiaCoeffs& coeffs) {
  const Metrics3 m = raw_metrics(part);
  return {coeffs.c0 * m.cmr, coeffs.c1 * m.pad, coeffs.c2 * m.occ};
}

double sia_score(const ProgramPlan& plan, const SiaCoeffs& coeffs) {
  if (plan.parts.empty()) {
    throw Error(ErrorKind::kValidation, "plan has no parts", "parts");
  }
  double sum = 0;
  for (const PlanPart& p : plan.parts) sum += part_terms(p, coeffs).total();
  return sum / static_cast<double>(plan.parts.size());
}

std::vector<ProgramPlan> rank_programs(const std::vector<ProgramPlan>& pool,
                                       const SiaCoeffs& coeffs,
                                       const RankOptions& options) {
  validate(coeffs);
  const SiaCoeffs w = ranking_coeffs(coeffs);

  MinMax cmr_range, pad_range, occ_range;
  if (options.normalize) {
    for (const ProgramPlan& plan : pool) {
      for (const PlanPart& p : plan.parts) {
        const Metrics3 m = raw_metrics(p);
        cmr_range.add(m.cmr);
        pad_range.add(m.pad);
        occ_range.add(m.occ);
      }
    }
  }

  std::vector<Keyed> keys;
  keys.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    double score = 0, pad = 0;
    for (const PlanPart& p : pool[i].parts) {
      Metrics3 m = raw_metrics(p);
      pad += m.pad;
      if (options.normalize) {
        m = {cmr_range.scale(m.cmr), pad_range.scale(m.pad),
             occ_range.scale(m.occ)};
      }
      score += w.c0 * m.cmr + w.c1 * m.pad + w.c2 * m.occ;
    }
    const double n = static_cast<double>(pool[i].parts.size());
    keys.push_back({score / n, pad / n, i});
  }

  auto better = [&pool](const Keyed& a, const Keyed& b) {
    if (a.score != b.score) return a.score > b.score;
    const std::size_t na = pool[a.index].parts.size();
    const std::size_t nb = pool[b.index].parts.size();
    if (na != nb) return na < nb;
    if (a.mean_pad != b.mean_pad) return a.mean_pad > b.mean_pad;
    if (canonical_less(pool[a.index], pool[b.index])) return true;
    if (canonical_less(pool[b.index], pool[a.index])) return false;
    return a.index < b.index;
  };
  const std::size_t k = std::min(options.top_k, keys.size());
  std::partial_sort(keys.begin(), keys.begin() + static_cast<long>(k),
                    keys.end(), better);

  std::vector<ProgramPlan> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    ProgramPlan plan = pool[keys[i].index];
    plan.sia = options.normalize ? keys[i].score : sia_score(plan, coeffs);
    out.push_back(std::move(plan));
  }
  return out;
}

}  // namespace mixtile
