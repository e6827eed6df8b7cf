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

#ifndef MIXTILE_METRICS_H_
#define MIXTILE_METRICS_H_

#include <cstdint>

#include "mixtile/hardware.h"
#include "mixtile/ukernel.h"
#include "mixtile/workload.h"

namespace mixtile {

struct MetricParams {
  // Registers each thread needs besides its register tile.
  std::int64_t rest_regs = 24;
  // Compute-to-memory ratio at or above which a uKernel counts as
  // compute-intensive.
  double psi = 1.0;
};

struct MetricBundle {
  double pad = 0;                   // useful / covered output bytes
  double occ = 0;                   // blocks / whole-wave blocks
  std::int64_t regs_in_block = 0;   // registers one block holds
  bool saturated = false;           // enough blocks to fill every core
  double cmr = 0;                   // compute time / memory latency
  bool compute_intensive = false;   // cmr >= psi
  double mem_latency_s = 0;         // memory latency of the whole instance
  std::int64_t blocks_needed = 0;   // uKernels tiling the covered output
  std::int64_t smem_bytes = 0;      // staged shared-memory footprint
};

// Number of uKernels needed to cover the output space.
std::int64_t blocks_needed(const UKernel& k, const WorkloadInstance& instance);

// Output bytes of the true shape over output bytes once every space axis is
// rounded up to a multiple of its shared-memory tile. 1.0 means no padding.
double padding_metric(const UKernel& k, const WorkloadInstance& instance);

// blocks / ceil_by(blocks, num_cores): the fraction of the last wave's slots
// doing useful work, averaged over all waves.
double occupancy_metric(std::int64_t blocks, std::int64_t num_cores);
double occupancy_metric(const UKernel& k, const WorkloadInstance& instance,
                        const HardwareDescriptor& hw);

// (sum of register-tile extents + rest_regs) * threads per block, where a
// block runs one thread per register tile of its shared-memory tile.
std::int64_t regs_in_block(const UKernel& k, const OperatorSpec& spec,
                           std::int64_t rest_regs);

// Threads in one block: product over space axes of smem / reg.
std::int64_t threads_per_block(const UKernel& k, const OperatorSpec& spec);

// Blocks allowed per core when checking the register file: the blocks per
// core the workload needs, capped at the device default.
std::int64_t block_bound(std::int64_t blocks_needed,
                         const HardwareDescriptor& hw);

// regs_in_block <= regs_per_core / bound, evaluated without rounding.
bool within_register_bound(std::int64_t regs, std::int64_t bound,
                           const HardwareDescriptor& hw);

// True when the covered output splits into at least as many uKernels as the
// device keeps active at once.
bool space_saturation(std::int64_t blocks, const HardwareDescriptor& hw);
bool space_saturation(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw);

// Slower of the global-memory and shared-memory paths, in seconds.
double memory_latency(const DataVolumes& v, const HardwareDescriptor& hw);
double memory_latency(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw);

struct IntensityVerdict {
  double cmr = 0;
  bool compute_intensive = false;
};

// cmr = (flops / peak_flops) / memory latency. Throws Error(kInvariant) when
// the memory latency is zero.
IntensityVerdict compute_intensity(const UKernel& k,
                                   const WorkloadInstance& instance,
                                   const HardwareDescriptor& hw, double psi);

MetricBundle evaluate(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw,
                      const MetricParams& params = {});

// Copies pad/occ/cmr into the uKernel's cache.
void attach(UKernel& k, const MetricBundle& m);

}  // namespace mixtile

#endif  // MIXTILE_METRICS_H_
