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

#ifndef MIXTILE_FILTER_H_
#define MIXTILE_FILTER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mixtile/hardware.h"
#include "mixtile/metrics.h"
#include "mixtile/sia.h"
#include "mixtile/ukernel.h"
#include "mixtile/workload.h"

namespace mixtile {

// Padding (eps) and occupancy (lambda) thresholds walked in lockstep: eps
// rises from eps_min while lambda falls from lam_max, until eps passes
// eps_max or lambda drops below lam_min. Values are fractions and are held
// internally in millionths, so every threshold is an exact grid point.
struct SweepParams {
  double eps_min = 0.50;
  double eps_max = 0.95;
  double lam_min = 0.90;
  double lam_max = 0.95;
  double eps_step = 0.01;
  double lam_step = 0.001;

  friend bool operator==(const SweepParams&, const SweepParams&) = default;
};

// Throws Error(kValidation) naming the offending field.
void validate(const SweepParams& sweep);

// The sweep in millionths. Point s (0-based) is
// (eps0 + s * deps, lam0 - s * dlam) for s < steps().
struct SweepGrid {
  std::int64_t eps0, eps_max, deps;
  std::int64_t lam0, lam_min, dlam;

  static SweepGrid from(const SweepParams& sweep);
  std::int64_t steps() const;
  double eps(std::int64_t s) const;
  double lam(std::int64_t s) const;
};

// 1-based sweep step at which (pad, occ) is first retained, or nullopt.
// Constant time; agrees with walking the grid point by point.
std::optional<std::int64_t> sweep_retention_step(double pad, double occ,
                                                 const SweepParams& sweep);
std::optional<std::int64_t> sweep_retention_step(double pad, double occ,
                                                 const SweepGrid& grid);

// Every threshold of the sweep moved down by `rounds` eps strides, with
// eps_max and the walk's length bound left in place.
SweepParams widen(const SweepParams& sweep, std::int64_t rounds);

struct Candidate {
  UKernel kernel;
  MetricBundle metrics;
};

// Metrics for every uKernel, cached on the kernel as well. Order kept.
std::vector<Candidate> evaluate_candidates(std::span<const UKernel> kernels,
                                           const WorkloadInstance& instance,
                                           const HardwareDescriptor& hw,
                                           const MetricParams& params = {});

// K.Cross: candidates that fit shared memory and are retained by the sweep.
std::vector<Candidate> cross_pick(const std::vector<Candidate>& candidates,
                                  const HardwareDescriptor& hw,
                                  const SweepParams& sweep);

// True when the block's registers fit the register file at
// min(ceil(blocks_needed / num_cores), default_active_blocks) blocks per core.
bool passes_register_bound(const MetricBundle& m,
                           const HardwareDescriptor& hw);

// K.Filter: candidates passing the register bound.
std::vector<Candidate> set_bound(const std::vector<Candidate>& cross,
                                 const HardwareDescriptor& hw);

// Candidates that saturate the device and are compute-intensive.
std::vector<Candidate> multi_axis_filter(const std::vector<Candidate>& filtered);

struct FilterParams {
  SweepParams sweep;
  MetricParams metric;
  EnumerateOptions enumerate;
  // Final sets above this size keep uKernels whose main-axis tile divides
  // the main-axis extent first, then the best single-uKernel SIA scores.
  std::size_t final_cap = 256;
  SiaCoeffs coeffs;
};

struct FilterCounts {
  std::size_t align = 0;
  std::size_t cross = 0;
  std::size_t filter = 0;
  std::size_t final = 0;  // before final_cap
};

// Relaxation labels, applied in this order when the final set is empty.
inline constexpr char kDropIntensity[] = "drop_compute_intensity";
inline constexpr char kDropSaturation[] = "drop_space_saturation";
inline constexpr char kWidenSweep[] = "widen_sweep";  // suffixed ":<rounds>"

struct ShapeResult {
  Bindings binding;
  std::vector<Candidate> final;  // canonical order, metrics attached
  FilterCounts counts;
  bool truncated = false;        // enumeration hit the candidate cap
  bool capped = false;           // final set hit final_cap
  std::vector<std::string> fallback;
  SweepParams effective_sweep;
};

// Runs the chain on an already evaluated K.Align of `instance`, relaxing as
// documented when it empties. Throws Error(kEmptyResult) when no candidate
// satisfies the register bound.
ShapeResult filter_chain(const std::vector<Candidate>& align,
                         const WorkloadInstance& instance,
                         const HardwareDescriptor& hw,
                         const FilterParams& params);

// Enumerate, evaluate and filter one shape. Streams the candidates, so
// K.Align is never held in memory; the result equals
// filter_chain(evaluate_candidates(enumerate_ukernels(...))). Throws
// Error(kCapacity) when no uKernel fits shared memory.
ShapeResult compile_shape(const WorkloadInstance& instance,
                          const HardwareDescriptor& hw,
                          const FilterParams& params);

// Inclusive range of one dynamic axis, sampled every `step` values.
struct AxisRange {
  std::string axis;
  std::int64_t lo = 1;
  std::int64_t hi = 1;
  std::int64_t step = 1;
};

// Cartesian product over the dynamic axes in declaration order, first axis
// slowest. Axes without a range take their declared range with step 1. Throws
// Error(kValidation) for unknown or fixed axes and out-of-range bounds.
std::vector<Bindings> expand_ranges(const OperatorSpec& spec,
                                    const std::vector<AxisRange>& ranges);

// compile_shape for every binding, on up to `jobs` threads. Results come
// back in binding order whatever the thread count.
std::vector<ShapeResult> compile_stage(const OperatorSpec& spec,
                                       const HardwareDescriptor& hw,
                                       const FilterParams& params,
                                       const std::vector<Bindings>& shapes,
                                       unsigned jobs = 1);

}  // namespace mixtile

#endif  // MIXTILE_FILTER_H_
