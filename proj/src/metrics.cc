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

#include "mixtile/metrics.h"

#include <algorithm>

#include "mixtile/error.h"

namespace mixtile {

std::int64_t blocks_needed(const UKernel& k, const WorkloadInstance& instance) {
  std::int64_t n = 1;
  for (int a : instance.spec().space_axes()) {
    n *= ceil_div(instance.extent(a), k.smem_tile[a]);
  }
  return n;
}

double padding_metric(const UKernel& k, const WorkloadInstance& instance) {
  std::int64_t base = 1;
  std::int64_t covered = 1;
  for (int a : instance.spec().space_axes()) {
    base *= instance.extent(a);
    covered *= ceil_by(instance.extent(a), k.smem_tile[a]);
  }
  // elem_bytes cancels between base and base + pad.
  return static_cast<double>(base) / static_cast<double>(covered);
}

double occupancy_metric(std::int64_t blocks, std::int64_t num_cores) {
  return static_cast<double>(blocks) /
         static_cast<double>(ceil_by(blocks, num_cores));
}

double occupancy_metric(const UKernel& k, const WorkloadInstance& instance,
                        const HardwareDescriptor& hw) {
  return occupancy_metric(blocks_needed(k, instance), hw.num_cores);
}

std::int64_t threads_per_block(const UKernel& k, const OperatorSpec& spec) {
  std::int64_t threads = 1;
  for (int a : spec.space_axes()) {
    threads *= k.smem_tile[a] / k.reg_tile[spec.space_ordinal(a)];
  }
  return threads;
}

std::int64_t regs_in_block(const UKernel& k, const OperatorSpec& spec,
                           std::int64_t rest_regs) {
  std::int64_t per_thread = rest_regs;
  for (std::size_t s = 0; s < k.reg_tile.size(); ++s) {
    per_thread += k.reg_tile[s];
  }
  return per_thread * threads_per_block(k, spec);
}

std::int64_t block_bound(std::int64_t blocks_needed,
                         const HardwareDescriptor& hw) {
  return std::min(ceil_div(blocks_needed, hw.num_cores),
                  hw.default_active_blocks);
}

bool within_register_bound(std::int64_t regs, std::int64_t bound,
                           const HardwareDescriptor& hw) {
  return regs * bound <= hw.regs_per_core;
}

bool space_saturation(std::int64_t blocks, const HardwareDescriptor& hw) {
  return blocks >= hw.active_blocks();
}

bool space_saturation(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw) {
  return space_saturation(blocks_needed(k, instance), hw);
}

double memory_latency(const DataVolumes& v, const HardwareDescriptor& hw) {
  const double bw_g = static_cast<double>(hw.global_bw_bytes_per_s);
  const double bw_s = static_cast<double>(hw.shared_bw_bytes_per_s);
  const double global = static_cast<double>(v.data_r) / bw_g +
                        static_cast<double>(v.data_w) / bw_g;
  const double shared = static_cast<double>(v.data_trans_w) / bw_s +
                        static_cast<double>(v.data_trans_r) / bw_s;
  return std::max(global, shared);
}

double memory_latency(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw) {
  return memory_latency(data_volumes(instance, k.reg_tile, k.smem_tile), hw);
}

namespace {

IntensityVerdict intensity_from(double mem_latency_s,
                                const WorkloadInstance& instance,
                                const HardwareDescriptor& hw, double psi) {
  if (!(mem_latency_s > 0)) {
    throw Error(ErrorKind::kInvariant,
                "memory latency is zero; compute-to-memory ratio undefined");
  }
  const double compute_s = static_cast<double>(flops(instance)) /
                           static_cast<double>(hw.peak_flops);
  IntensityVerdict v;
  v.cmr = compute_s / mem_latency_s;
  v.compute_intensive = v.cmr >= psi;
  return v;
}

}  // namespace

IntensityVerdict compute_intensity(const UKernel& k,
                                   const WorkloadInstance& instance,
                                   const HardwareDescriptor& hw, double psi) {
  return intensity_from(memory_latency(k, instance, hw), instance, hw, psi);
}

MetricBundle evaluate(const UKernel& k, const WorkloadInstance& instance,
                      const HardwareDescriptor& hw,
                      const MetricParams& params) {
  const OperatorSpec& spec = instance.spec();
  MetricBundle m;
  m.blocks_needed = blocks_needed(k, instance);
  m.pad = padding_metric(k, instance);
  m.occ = occupancy_metric(m.blocks_needed, hw.num_cores);
  m.regs_in_block = regs_in_block(k, spec, params.rest_regs);
  m.saturated = space_saturation(m.blocks_needed, hw);
  m.mem_latency_s = memory_latency(k, instance, hw);
  IntensityVerdict iv = intensity_from(m.mem_latency_s, instance, hw,
                                       params.psi);
  m.cmr = iv.cmr;
  m.compute_intensive = iv.compute_intensive;
  m.smem_bytes = staged_smem_bytes(spec, k.smem_tile);
  return m;
}

void attach(UKernel& k, const MetricBundle& m) {
  k.cached = CachedMetrics{m.pad, m.occ, m.cmr};
}

}  // namespace mixtile
