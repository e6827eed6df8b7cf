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

#include "mixtile/filter.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <utility>

#include "mixtile/combiner.h"
#include "mixtile/error.h"
#include "parallel.h"

namespace mixtile {
namespace {

constexpr double kMicro = 1e6;

std::int64_t to_micro(double v) { return std::llround(v * kMicro); }
double from_micro(std::int64_t v) { return static_cast<double>(v) / kMicro; }

double single_score(const MetricBundle& m, const SiaCoeffs& c) {
  return c.c0 * m.cmr + c.c1 * m.pad + c.c2 * m.occ;
}

bool passes_sweep(const Candidate& c, const HardwareDescriptor& hw,
                  const SweepGrid& grid) {
  return c.metrics.smem_bytes <= hw.smem_per_core_bytes &&
         sweep_retention_step(c.metrics.pad, c.metrics.occ, grid).has_value();
}

// Smallest widening round that retains (pad, occ). Retention only grows with
// the round, so a binary search over [0, limit] suffices.
std::optional<std::int64_t> min_widen_round(double pad, double occ,
                                            const SweepParams& sweep,
                                            std::int64_t limit) {
  if (!sweep_retention_step(pad, occ, widen(sweep, limit))) return std::nullopt;
  std::int64_t lo = 0, hi = limit;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (sweep_retention_step(pad, occ, widen(sweep, mid))) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

void validate(const SweepParams& sweep) {
  const std::pair<const char*, double> fields[] = {
      {"eps_min", sweep.eps_min},   {"eps_max", sweep.eps_max},
      {"lam_min", sweep.lam_min},   {"lam_max", sweep.lam_max},
      {"eps_step", sweep.eps_step}, {"lam_step", sweep.lam_step}};
  for (const auto& [name, v] : fields) {
    if (!std::isfinite(v) || std::fabs(v) > 1e6) {
      throw_validation(name, "must be a finite fraction");
    }
  }
  const SweepGrid g = SweepGrid::from(sweep);
  if (g.deps <= 0) throw_validation("eps_step", "must be >= 1e-6");
  if (g.dlam <= 0) throw_validation("lam_step", "must be >= 1e-6");
  if (g.eps0 >= g.eps_max) {
    throw_validation("eps_min", "must be below eps_max");
  }
  if (g.lam_min >= g.lam0) {
    throw_validation("lam_min", "must be below lam_max");
  }
}

SweepGrid SweepGrid::from(const SweepParams& s) {
  return {to_micro(s.eps_min), to_micro(s.eps_max), to_micro(s.eps_step),
          to_micro(s.lam_max), to_micro(s.lam_min), to_micro(s.lam_step)};
}

std::int64_t SweepGrid::steps() const {
  if (eps0 > eps_max || lam0 < lam_min) return 0;
  return std::min((eps_max - eps0) / deps, (lam0 - lam_min) / dlam) + 1;
}

double SweepGrid::eps(std::int64_t s) const {
  return from_micro(eps0 + s * deps);
}

double SweepGrid::lam(std::int64_t s) const {
  return from_micro(lam0 - s * dlam);
}

std::optional<std::int64_t> sweep_retention_step(double pad, double occ,
                                                 const SweepParams& sweep) {
  return sweep_retention_step(pad, occ, SweepGrid::from(sweep));
}

std::optional<std::int64_t> sweep_retention_step(double pad, double occ,
                                                 const SweepGrid& g) {
  if (!std::isfinite(pad) || !std::isfinite(occ)) return std::nullopt;
  const std::int64_t n = g.steps();
  if (n == 0) return std::nullopt;

  // First point whose lambda is at or below occ. The estimate is off by at
  // most one grid point from rounding; the loops settle it exactly.
  double guess = std::ceil((static_cast<double>(g.lam0) - occ * kMicro) /
                           static_cast<double>(g.dlam));
  std::int64_t lo = static_cast<std::int64_t>(std::clamp(guess, 0.0, double(n)));
  while (lo > 0 && g.lam(lo - 1) <= occ) --lo;
  while (lo < n && g.lam(lo) > occ) ++lo;
  if (lo >= n) return std::nullopt;

  // Last point whose eps is at or below pad.
  guess = std::floor((pad * kMicro - static_cast<double>(g.eps0)) /
                     static_cast<double>(g.deps));
  std::int64_t hi =
      static_cast<std::int64_t>(std::clamp(guess, -1.0, double(n - 1)));
  while (hi + 1 < n && g.eps(hi + 1) <= pad) ++hi;
  while (hi >= 0 && g.eps(hi) > pad) --hi;

  if (lo > hi) return std::nullopt;
  return lo + 1;
}

SweepParams widen(const SweepParams& sweep, std::int64_t rounds) {
  const SweepGrid g = SweepGrid::from(sweep);
  const std::int64_t shift = rounds * g.deps;
  SweepParams out = sweep;
  out.eps_min = from_micro(g.eps0 - shift);
  out.lam_max = from_micro(g.lam0 - shift);
  out.lam_min = from_micro(g.lam_min - shift);
  return out;
}

std::vector<Candidate> evaluate_candidates(std::span<const UKernel> kernels,
                                           const WorkloadInstance& instance,
                                           const HardwareDescriptor& hw,
                                           const MetricParams& params) {
  std::vector<Candidate> out;
  out.reserve(kernels.size());
  for (const UKernel& k : kernels) {
    Candidate c{k, evaluate(k, instance, hw, params)};
    attach(c.kernel, c.metrics);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Candidate> cross_pick(const std::vector<Candidate>& candidates,
                                  const HardwareDescriptor& hw,
                                  const SweepParams& sweep) {
  validate(sweep);
  const SweepGrid grid = SweepGrid::from(sweep);
  std::vector<Candidate> out;
  for (const Candidate& c : candidates) {
    if (passes_sweep(c, hw, grid)) out.push_back(c);
  }
  return out;
}

bool passes_register_bound(const MetricBundle& m,
                           const HardwareDescriptor& hw) {
  return within_register_bound(m.regs_in_block,
                               block_bound(m.blocks_needed, hw), hw);
}

std::vector<Candidate> set_bound(const std::vector<Candidate>& cross,
                                 const HardwareDescriptor& hw) {
  std::vector<Candidate> out;
  for (const Candidate& c : cross) {
    if (passes_register_bound(c.metrics, hw)) out.push_back(c);
  }
  return out;
}

std::vector<Candidate> multi_axis_filter(
    const std::vector<Candidate>& filtered) {
  std::vector<Candidate> out;
  for (const Candidate& c : filtered) {
    if (c.metrics.saturated && c.metrics.compute_intensive) out.push_back(c);
  }
  return out;
}

namespace {

// Visits evaluated candidates in canonical order; returns how many.
using CandidateSource =
    std::function<std::size_t(const std::function<void(const Candidate&)>&)>;

struct Scan {
  std::size_t align = 0;
  std::vector<Candidate> cross;
  // (pad, occ) of register-feasible candidates the sweep rejected.
  std::vector<std::pair<double, double>> feasible_rejected;
};

Scan scan(const CandidateSource& source, const HardwareDescriptor& hw,
          const SweepParams& sweep) {
  const SweepGrid grid = SweepGrid::from(sweep);
  Scan s;
  s.align = source([&](const Candidate& c) {
    if (c.metrics.smem_bytes > hw.smem_per_core_bytes) return;
    if (sweep_retention_step(c.metrics.pad, c.metrics.occ, grid)) {
      s.cross.push_back(c);
    } else if (passes_register_bound(c.metrics, hw)) {
      s.feasible_rejected.emplace_back(c.metrics.pad, c.metrics.occ);
    }
  });
  return s;
}

ShapeResult run_chain(const CandidateSource& source,
                      const WorkloadInstance& instance,
                      const HardwareDescriptor& hw,
                      const FilterParams& params) {
  validate(params.sweep);
  validate(params.coeffs);
  ShapeResult r;
  r.effective_sweep = params.sweep;

  Scan s = scan(source, hw, params.sweep);
  if (s.align == 0) throw_no_fit(hw);
  r.counts.align = s.align;
  r.counts.cross = s.cross.size();
  std::vector<Candidate> filtered = set_bound(s.cross, hw);
  r.counts.filter = filtered.size();

  std::vector<Candidate> final = multi_axis_filter(filtered);
  if (final.empty()) {
    r.fallback.push_back(kDropIntensity);
    for (const Candidate& c : filtered) {
      if (c.metrics.saturated) final.push_back(c);
    }
  }
  if (final.empty()) {
    r.fallback.push_back(kDropSaturation);
    final = filtered;
  }
  if (final.empty()) {
    // Nothing in the sweep fits the register file, so every feasible
    // candidate is in feasible_rejected. Widen until one of them enters.
    const SweepGrid g = SweepGrid::from(params.sweep);
    const std::int64_t limit =
        (std::max(g.eps0, g.lam0) + g.deps - 1) / g.deps + 1;
    std::optional<std::int64_t> best;
    for (const auto& [pad, occ] : s.feasible_rejected) {
      const std::int64_t cap = best ? *best : limit;
      if (auto round = min_widen_round(pad, occ, params.sweep, cap)) {
        best = *round;
      }
    }
    if (!best) {
      throw Error(ErrorKind::kEmptyResult,
                  "no uKernel fits the register file (regs_in_block * "
                  "block_bound > regs_per_core for all " +
                      std::to_string(s.align) +
                      " candidates); lower rest_regs or use a larger "
                      "register file",
                  "regs_per_core");
    }
    r.effective_sweep = widen(params.sweep, *best);
    r.fallback.push_back(std::string(kWidenSweep) + ":" +
                         std::to_string(*best));
    s = scan(source, hw, r.effective_sweep);
    r.counts.cross = s.cross.size();
    final = set_bound(s.cross, hw);
    r.counts.filter = final.size();
  }
  r.counts.final = final.size();

  if (final.size() > params.final_cap) {
    // Keep uKernels that tile the main axis exactly first; the rest can only
    // enter programs in pairs.
    r.capped = true;
    const int tau = select_main_axis(instance);
    const std::int64_t h = instance.extent(tau);
    auto divides = [&](const Candidate& c) {
      return h % c.kernel.smem_tile[tau] == 0;
    };
    std::stable_sort(final.begin(), final.end(),
                     [&](const Candidate& a, const Candidate& b) {
                       if (divides(a) != divides(b)) return divides(a);
                       return single_score(a.metrics, params.coeffs) >
                              single_score(b.metrics, params.coeffs);
                     });
    final.resize(params.final_cap);
    std::sort(final.begin(), final.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.kernel < b.kernel;
              });
  }
  r.final = std::move(final);
  return r;
}

}  // namespace

ShapeResult filter_chain(const std::vector<Candidate>& align,
                         const WorkloadInstance& instance,
                         const HardwareDescriptor& hw,
                         const FilterParams& params) {
  ShapeResult r = run_chain(
      [&align](const std::function<void(const Candidate&)>& visit) {
        for (const Candidate& c : align) visit(c);
        return align.size();
      },
      instance, hw, params);
  r.binding = instance.bindings();
  return r;
}

ShapeResult compile_shape(const WorkloadInstance& instance,
                          const HardwareDescriptor& hw,
                          const FilterParams& params) {
  bool truncated = false;
  ShapeResult r = run_chain(
      [&](const std::function<void(const Candidate&)>& visit) {
        Candidate c;
        return for_each_ukernel(
            instance, hw, params.enumerate,
            [&](const UKernel& k) {
              c.kernel = k;
              c.metrics = evaluate(k, instance, hw, params.metric);
              attach(c.kernel, c.metrics);
              visit(c);
            },
            &truncated);
      },
      instance, hw, params);
  r.binding = instance.bindings();
  r.truncated = truncated;
  return r;
}

std::vector<Bindings> expand_ranges(const OperatorSpec& spec,
                                    const std::vector<AxisRange>& ranges) {
  for (const AxisRange& r : ranges) {
    const int a = spec.find_axis(r.axis);
    if (a < 0) throw_validation(r.axis, "unknown axis in range");
    const AxisSpec& ax = spec.axes()[a];
    if (!ax.dynamic) throw_validation(r.axis, "range given for a fixed axis");
    if (r.step < 1) throw_validation(r.axis, "range step must be >= 1");
    if (r.lo > r.hi || r.lo < ax.lo || r.hi > ax.hi) {
      throw_validation(r.axis, "range [" + std::to_string(r.lo) + ", " +
                                   std::to_string(r.hi) +
                                   "] outside declared range [" +
                                   std::to_string(ax.lo) + ", " +
                                   std::to_string(ax.hi) + "]");
    }
  }
  std::vector<Bindings> out{Bindings{}};
  for (int a : spec.dynamic_axes()) {
    const AxisSpec& ax = spec.axes()[a];
    AxisRange range{ax.name, ax.lo, ax.hi, 1};
    for (const AxisRange& r : ranges) {
      if (r.axis == ax.name) range = r;
    }
    std::vector<Bindings> next;
    for (const Bindings& b : out) {
      for (std::int64_t v = range.lo; v <= range.hi; v += range.step) {
        Bindings nb = b;
        nb[ax.name] = v;
        next.push_back(std::move(nb));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<ShapeResult> compile_stage(const OperatorSpec& spec,
                                       const HardwareDescriptor& hw,
                                       const FilterParams& params,
                                       const std::vector<Bindings>& shapes,
                                       unsigned jobs) {
  std::vector<ShapeResult> results(shapes.size());
  std::vector<std::exception_ptr> errors(shapes.size());
  parallel_for(shapes.size(), jobs, [&](std::size_t i) {
    try {
      results[i] =
          compile_shape(WorkloadInstance(spec, shapes[i]), hw, params);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace mixtile
