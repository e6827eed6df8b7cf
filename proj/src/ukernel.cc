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

#include "mixtile/ukernel.h"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "mixtile/error.h"

namespace mixtile {
namespace {

void append_divisors(std::int64_t n, std::vector<std::int64_t>& out) {
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      out.push_back(n / d);
    }
  }
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Admissible shared-memory extents of each axis, ascending.
std::vector<std::vector<std::int64_t>> axis_choices(
    const TileVec& reg_tile, const WorkloadInstance& instance,
    const HardwareDescriptor& hw) {
  const OperatorSpec& spec = instance.spec();
  std::vector<std::vector<std::int64_t>> choices(spec.num_axes());
  for (std::size_t a = 0; a < spec.num_axes(); ++a) {
    const int axis = static_cast<int>(a);
    std::int64_t step;
    if (spec.axes()[a].kind == AxisKind::kReduce) {
      step = hw.align_elems;
    } else {
      step = reg_tile[spec.space_ordinal(axis)];
      if (axis == spec.major_axis()) step = std::lcm(step, hw.align_elems);
    }
    const std::int64_t limit = ceil_by(instance.extent(axis), step);
    for (std::int64_t v = step; v <= limit; v += step) choices[a].push_back(v);
  }
  return choices;
}

// Depth-first walk over axes in order. Staged footprint is monotone in every
// extent, so once the smallest completion of a prefix overflows, larger
// values at that depth overflow too.
class SmemWalker {
 public:
  SmemWalker(const OperatorSpec& spec,
             const std::vector<std::vector<std::int64_t>>& choices,
             std::int64_t capacity, std::size_t limit,
             std::vector<TileVec>& out)
      : spec_(spec), choices_(choices), capacity_(capacity), limit_(limit),
        out_(out), tile_(spec.num_axes()) {
    for (std::size_t a = 0; a < choices.size(); ++a) {
      tile_.set(a, choices[a].empty() ? 0 : choices[a].front());
    }
  }

  // Returns false when the output limit was hit.
  bool run() {
    for (const auto& c : choices_) {
      if (c.empty()) return true;
    }
    return visit(0);
  }

 private:
  bool visit(std::size_t depth) {
    if (depth == choices_.size()) {
      if (out_.size() >= limit_) return false;
      out_.push_back(tile_);
      return true;
    }
    for (std::int64_t v : choices_[depth]) {
      tile_.set(depth, v);
      if (staged_smem_bytes(spec_, tile_) > capacity_) break;
      if (!visit(depth + 1)) return false;
    }
    tile_.set(depth, choices_[depth].front());
    return true;
  }

  const OperatorSpec& spec_;
  const std::vector<std::vector<std::int64_t>>& choices_;
  std::int64_t capacity_;
  std::size_t limit_;
  std::vector<TileVec>& out_;
  TileVec tile_;
};

}  // namespace

std::vector<std::int64_t> reg_tile_candidates(std::int64_t axis_extent,
                                              std::int64_t align_elems) {
  std::vector<std::int64_t> out;
  if (axis_extent < 1) return out;
  append_divisors(axis_extent, out);
  if (axis_extent > align_elems && is_prime(axis_extent)) {
    append_divisors(axis_extent - 1, out);
    append_divisors(axis_extent + 1, out);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<TileVec> smem_tile_candidates(const TileVec& reg_tile,
                                          const WorkloadInstance& instance,
                                          const HardwareDescriptor& hw) {
  std::vector<TileVec> out;
  auto choices = axis_choices(reg_tile, instance, hw);
  SmemWalker(instance.spec(), choices, hw.smem_per_core_bytes,
             static_cast<std::size_t>(-1), out)
      .run();
  return out;
}

std::size_t for_each_ukernel(const WorkloadInstance& instance,
                             const HardwareDescriptor& hw,
                             const EnumerateOptions& options,
                             const std::function<void(const UKernel&)>& visit,
                             bool* truncated) {
  const OperatorSpec& spec = instance.spec();
  const auto& space = spec.space_axes();
  std::vector<std::vector<std::int64_t>> reg_choices;
  for (int a : space) {
    reg_choices.push_back(
        reg_tile_candidates(instance.extent(a), hw.align_elems));
  }

  std::size_t visited = 0;
  if (truncated) *truncated = false;
  std::vector<std::size_t> odometer(space.size(), 0);
  std::vector<TileVec> smem;
  bool done = false;
  while (!done) {
    UKernel k;
    for (std::size_t s = 0; s < space.size(); ++s) {
      k.reg_tile.push_back(reg_choices[s][odometer[s]]);
    }

    smem.clear();
    auto choices = axis_choices(k.reg_tile, instance, hw);
    const std::size_t room = options.cap - visited;
    bool complete = SmemWalker(spec, choices, hw.smem_per_core_bytes, room,
                               smem)
                        .run();
    for (const TileVec& t : smem) {
      k.smem_tile = t;
      visit(k);
    }
    visited += smem.size();
    if (!complete) {
      if (truncated) *truncated = true;
      break;
    }

    // Advance the odometer, last space axis fastest.
    std::size_t s = space.size();
    while (true) {
      if (s == 0) {
        done = true;
        break;
      }
      --s;
      if (++odometer[s] < reg_choices[s].size()) break;
      odometer[s] = 0;
    }
  }
  return visited;
}

void throw_no_fit(const HardwareDescriptor& hw) {
  throw Error(ErrorKind::kCapacity,
              "no uKernel fits in " + std::to_string(hw.smem_per_core_bytes) +
                  " bytes of shared memory on '" + hw.name + "'",
              "smem_per_core_bytes");
}

CandidateSet enumerate_ukernels(const WorkloadInstance& instance,
                                const HardwareDescriptor& hw,
                                const EnumerateOptions& options) {
  CandidateSet result;
  result.cap = options.cap;
  for_each_ukernel(
      instance, hw, options,
      [&result](const UKernel& k) { result.kernels.push_back(k); },
      &result.truncated);
  if (result.kernels.empty()) throw_no_fit(hw);
  return result;
}

std::optional<std::string> check_ukernel(const UKernel& k,
                                         const OperatorSpec& spec,
                                         const HardwareDescriptor& hw) {
  if (k.reg_tile.size() != spec.space_axes().size() ||
      k.smem_tile.size() != spec.num_axes()) {
    return "tile rank does not match the operator";
  }
  for (std::size_t a = 0; a < spec.num_axes(); ++a) {
    if (k.smem_tile[a] < 1) return "non-positive shared-memory tile";
  }
  for (int a : spec.space_axes()) {
    std::int64_t r = k.reg_tile[spec.space_ordinal(a)];
    if (r < 1) return "non-positive register tile";
    if (k.smem_tile[a] % r != 0) {
      return "register tile does not divide shared tile on axis '" +
             spec.axes()[a].name + "'";
    }
  }
  if (staged_smem_bytes(spec, k.smem_tile) > hw.smem_per_core_bytes) {
    return "staged inputs exceed shared memory";
  }
  if (k.smem_tile[spec.major_axis()] % hw.align_elems != 0) {
    return "major-axis tile is not a multiple of align_elems";
  }
  return std::nullopt;
}

std::string describe(const UKernel& k, const OperatorSpec& spec) {
  std::ostringstream os;
  os << "reg(";
  for (std::size_t s = 0; s < spec.space_axes().size(); ++s) {
    if (s) os << ',';
    os << spec.axes()[spec.space_axes()[s]].name << '=' << k.reg_tile[s];
  }
  os << ") smem(";
  for (std::size_t a = 0; a < spec.num_axes(); ++a) {
    if (a) os << ',';
    os << spec.axes()[a].name << '=' << k.smem_tile[a];
  }
  os << ')';
  return os.str();
}

}  // namespace mixtile
