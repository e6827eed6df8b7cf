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

#ifndef MIXTILE_SIA_H_
#define MIXTILE_SIA_H_

#include <cstddef>
#include <vector>

#include "mixtile/plan.h"

namespace mixtile {

// Weights of the compute-to-memory ratio, padding and occupancy terms.
struct SiaCoeffs {
  double c0 = 1;
  double c1 = 1;
  double c2 = 1;
};

// Throws Error(kValidation) for negative, non-finite or all-zero weights.
void validate(const SiaCoeffs& coeffs);

struct SiaTerms {
  double cmr = 0;  // c0 * CMR
  double pad = 0;  // c1 * Pad
  double occ = 0;  // c2 * Occ
  double total() const { return cmr + pad + occ; }
};

// Weighted terms of one part. Throws Error(kValidation) when the uKernel
// carries no cached metrics.
SiaTerms part_terms(const PlanPart& part, const SiaCoeffs& coeffs);

// c0*CMR + c1*Pad + c2*Occ for one part; two-part plans take the unweighted
// mean of their parts.
double sia_score(const ProgramPlan& plan, const SiaCoeffs& coeffs);

struct RankOptions {
  std::size_t top_k = 10;
  // Rescale each metric to [0, 1] across the pool before weighting.
  bool normalize = false;
};

// Scores every plan and returns the best min(top_k, |pool|) with `sia` set,
// best first. Ties go to fewer parts, then higher mean Pad, then canonical
// order. The order depends on the coefficients only through their ratios.
std::vector<ProgramPlan> rank_programs(const std::vector<ProgramPlan>& pool,
                                       const SiaCoeffs& coeffs,
                                       const RankOptions& options = {});

}  // namespace mixtile

#endif  // MIXTILE_SIA_H_
