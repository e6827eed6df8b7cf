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

#ifndef MIXTILE_PERF_MODEL_H_
#define MIXTILE_PERF_MODEL_H_

#include "mixtile/hardware.h"
#include "mixtile/plan.h"
#include "mixtile/workload.h"

namespace mixtile {

// Tagged on every report that carries estimates.
inline constexpr char kPerfModelVersion[] = "analytic-v1";

struct PerfModelOptions {
  // Extra seconds charged per padded output element for boundary checks.
  double padding_surcharge_s = 0;
};

// Analytical execution time of a plan.
//
// Each part runs count * prod_{a != tau} ceil(E_a / S_a) blocks over its
// covered sub-shape (tau spans count * S_tau, other space axes are rounded
// up to their tile). Per part, compute is covered FLOPs / peak_flops and
// memory is the memory latency of the covered sub-shape, so padded tiles
// cost both arithmetic and traffic. Compute and memory overlap, so a part
// costs max(compute, memory) at full-device rate.
//
// Blocks run in waves of num_cores * active_blocks_per_core. Full waves run
// at full rate; the last wave, holding a fraction r of a wave's blocks,
// takes (1 + r) / 2 of a full wave's time, since a partly filled wave still
// pays most of the fixed latency.
TimeEstimate estimate_time(const ProgramPlan& plan,
                           const WorkloadInstance& instance,
                           const HardwareDescriptor& hw,
                           const PerfModelOptions& options = {});

}  // namespace mixtile

#endif  // MIXTILE_PERF_MODEL_H_
