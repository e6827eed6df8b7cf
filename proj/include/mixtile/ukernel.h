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

#ifndef MIXTILE_UKERNEL_H_
#define MIXTILE_UKERNEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mixtile/hardware.h"
#include "mixtile/tile_vec.h"
#include "mixtile/workload.h"

namespace mixtile {

// Metrics cached on a uKernel once it has been evaluated for a shape.
struct CachedMetrics {
  double padding_threshold = 0;  // K.pad, fraction of useful output bytes
  double usage_eff = 0;          // K.occ, blocks over whole-wave blocks
  double compute_eff = 0;        // CMR, compute time over memory latency

  friend bool operator==(const CachedMetrics&, const CachedMetrics&) = default;
};

// One tile configuration of a thread block: a register tile per space axis
// nested inside a shared-memory tile per axis.
struct UKernel {
  TileVec reg_tile;   // indexed by space ordinal
  TileVec smem_tile;  // indexed by axis
  std::optional<CachedMetrics> cached;

  // Canonical order: lexicographic by (reg_tile, smem_tile).
  friend bool operator<(const UKernel& a, const UKernel& b) {
    if (a.reg_tile != b.reg_tile) return a.reg_tile < b.reg_tile;
    return a.smem_tile < b.smem_tile;
  }
  friend bool same_tiles(const UKernel& a, const UKernel& b) {
    return a.reg_tile == b.reg_tile && a.smem_tile == b.smem_tile;
  }
};

// Register-tile extents for an axis: the divisors of the extent, plus the
// divisors of its two neighbours when the extent is a prime above the
// alignment (a prime has no useful tiling of its own). Sorted, unique.
std::vector<std::int64_t> reg_tile_candidates(std::int64_t axis_extent,
                                              std::int64_t align_elems = 8);

// Shared-memory tiles for one register tile, in lexicographic order. Space
// axes take multiples of their register extent up to the covering size;
// the major axis additionally steps by align_elems, and reduce axes take
// multiples of align_elems up to the covering size. Only tiles whose staged
// inputs fit in shared memory are produced.
std::vector<TileVec> smem_tile_candidates(const TileVec& reg_tile,
                                          const WorkloadInstance& instance,
                                          const HardwareDescriptor& hw);

struct EnumerateOptions {
  std::size_t cap = std::size_t{1} << 21;
};

// K.Align: every (register tile, shared-memory tile) pair for an instance,
// canonical order, metrics unset. When more than `cap` candidates exist the
// set is truncated in canonical order and `truncated` is set.
struct CandidateSet {
  std::vector<UKernel> kernels;
  bool truncated = false;
  std::size_t cap = 0;
};

CandidateSet enumerate_ukernels(const WorkloadInstance& instance,
                                const HardwareDescriptor& hw,
                                const EnumerateOptions& options = {});

// Visits the same sequence as enumerate_ukernels without storing it.
// Returns the number of uKernels visited; `truncated` reports whether the
// cap cut the walk short. Does not throw on an empty walk.
std::size_t for_each_ukernel(const WorkloadInstance& instance,
                             const HardwareDescriptor& hw,
                             const EnumerateOptions& options,
                             const std::function<void(const UKernel&)>& visit,
                             bool* truncated = nullptr);

// Error(kCapacity) for a descriptor on which no uKernel fits.
[[noreturn]] void throw_no_fit(const HardwareDescriptor& hw);

// Returns a description of the first broken uKernel invariant, if any:
// register tiles divide shared tiles, staged inputs fit in shared memory,
// the major-axis tile is aligned.
std::optional<std::string> check_ukernel(const UKernel& k,
                                         const OperatorSpec& spec,
                                         const HardwareDescriptor& hw);

// "reg(i=4,j=8) smem(i=32,j=64,k=16)"
std::string describe(const UKernel& k, const OperatorSpec& spec);

}  // namespace mixtile

#endif  // MIXTILE_UKERNEL_H_
