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

#include "mixtile/perf_model.h"

#include <algorithm>
#include <vector>

#include "mixtile/combiner.h"
#include "mixtile/metrics.h"

namespace mixtile {

TimeEstimate estimate_time(const ProgramPlan& plan,
                           const WorkloadInstance& instance,
                           const HardwareDescriptor& hw,
                           const PerfModelOptions& options) {
  const OperatorSpec& spec = instance.spec();
  const int tau = select_main_axis(instance);
  const double peak = static_cast<double>(hw.peak_flops);

  double reduce_points = 1;
  for (int a : spec.reduce_axes()) {
    reduce_points *= static_cast<double>(instance.extent(a));
  }
  const double fpp = static_cast<double>(spec.flops_per_point());

  TimeEstimate est;
  double busy = 0;  // sum over parts of max(compute, memory)
  std::int64_t blocks = 0;
  double true_tau_left = static_cast<double>(instance.extent(tau));
  for (const PlanPart& part : plan.parts) {
    const TileVec& smem = part.kernel.smem_tile;
    std::vector<std::int64_t> covered = instance.extents();
    double covered_out = 1, true_out = 1;
    std::int64_t part_blocks = part.count;
    for (int a : spec.space_axes()) {
      if (a == tau) {
        covered[a] = part.count * smem[a];
        // Parts fill tau in order; the true extent is whatever remains.
        const double t = std::min(true_tau_left, static_cast<double>(covered[a]));
        true_tau_left -= t;
        true_out *= t;
      } else {
        covered[a] = ceil_by(instance.extent(a), smem[a]);
        part_blocks *= covered[a] / smem[a];
        true_out *= static_cast<double>(instance.extent(a));
      }
      covered_out *= static_cast<double>(covered[a]);
    }
    const double padded_elems = covered_out - true_out;
    const double surcharge = padded_elems * options.padding_surcharge_s;
    const double compute = fpp * covered_out * reduce_points / peak + surcharge;
    const double padding =
        fpp * padded_elems * reduce_points / peak + surcharge;
    const double memory = memory_latency(
        data_volumes(spec, covered, part.kernel.reg_tile, smem), hw);

    est.compute_s += compute;
    est.padding_s += padding;
    est.memory_s += memory;
    busy += std::max(compute, memory);
    blocks += part_blocks;
  }

  const std::int64_t cap = hw.active_blocks();
  est.waves = ceil_div(blocks, cap);
  const double r = static_cast<double>(blocks - (est.waves - 1) * cap) /
                   static_cast<double>(cap);
  const double per_wave = busy * static_cast<double>(cap) /
                          static_cast<double>(blocks);
  est.total_s = per_wave * (static_cast<double>(est.waves - 1) + (1 + r) / 2);
  return est;
}

}  // namespace mixtile
