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

#ifndef MIXTILE_PLAN_IO_H_
#define MIXTILE_PLAN_IO_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixtile/hardware.h"
#include "mixtile/oracle.h"
#include "mixtile/plan.h"
#include "mixtile/sia.h"
#include "mixtile/workload.h"

namespace mixtile {

// Names written into every output file.
struct Provenance {
  std::string hardware;
  std::string workload;
  std::string workload_hash;
};

Provenance provenance(const HardwareDescriptor& hw, const OperatorSpec& spec);

struct Verification {
  bool combinations_match = false;  // combin_search == brute force on tau
  std::size_t plans_checked = 0;
  bool tau_exact = false;           // every pooled plan covers tau exactly
  oracle::RankCheck rank;
};

// Runtime-stage result for one shape: the Top-K plans with scores and
// estimates attached, best first.
struct PlanReport {
  Provenance prov;
  int tau = -1;
  std::size_t pool_size = 0;
  SiaCoeffs coeffs;
  std::size_t top_k = 0;
  std::vector<ProgramPlan> ranked;
  std::vector<std::string> fallback;  // compile-stage relaxations
  std::optional<double> build_seconds;
  std::optional<Verification> verify;
};

// Canonical JSON plan file.
std::string write_plan_file(const PlanReport& report,
                            const WorkloadInstance& instance);

struct PlanFile {
  Bindings binding;
  std::string tau;
  std::vector<ProgramPlan> plans;
};

// Reads the plans back (tiles, counts, scores); estimates are dropped.
PlanFile read_plan_file(std::string_view document, const OperatorSpec& spec);

// Plain-text ranking with the per-part score decomposition.
std::string format_ranking_report(const PlanReport& report,
                                  const WorkloadInstance& instance);

// One row of a shape sweep. `status` is "ok" or the error kind.
struct SweepRow {
  Bindings binding;
  std::string status = "ok";
  std::string error;
  int tau = -1;
  std::optional<ProgramPlan> plan;  // the SIA Top-1, with sia and est
  double padding_fraction = 0;
  double occupancy = 0;
  std::size_t pool_size = 0;
  std::vector<std::string> fallback;
};

// CSV with a leading "# key=value ..." provenance line and a header row.
std::string write_sweep_csv(const Provenance& prov, const OperatorSpec& spec,
                            const std::vector<SweepRow>& rows);

// "j: reg(i=4,j=8) smem(i=32,j=8,k=16) x3 + ..." on one line.
std::string describe(const ProgramPlan& plan, const OperatorSpec& spec,
                     int tau);

}  // namespace mixtile

#endif  // MIXTILE_PLAN_IO_H_
