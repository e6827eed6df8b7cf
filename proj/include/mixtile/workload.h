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

#ifndef MIXTILE_WORKLOAD_H_
#define MIXTILE_WORKLOAD_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mixtile/tile_vec.h"

namespace mixtile {

enum class AxisKind { kSpace, kReduce };

// A loop axis. Fixed axes have lo == hi and dynamic == false; dynamic axes
// carry the inclusive range of extents a runtime shape may bind.
struct AxisSpec {
  std::string name;
  AxisKind kind = AxisKind::kSpace;
  bool dynamic = false;
  std::int64_t lo = 1;
  std::int64_t hi = 1;

  static AxisSpec fixed(std::string name, AxisKind kind, std::int64_t extent);
  static AxisSpec ranged(std::string name, AxisKind kind, std::int64_t lo,
                         std::int64_t hi);

  friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

enum class AccessRole { kInput, kOutput };

// Affine projection of the loop indices onto one tensor.
struct TensorAccess {
  std::string tensor;
  std::vector<std::string> axes;
  AccessRole role = AccessRole::kInput;

  friend bool operator==(const TensorAccess&, const TensorAccess&) = default;
};

// Validated single-output nested-loop operator. Construct through create()
// or parse_workload(); both reject malformed operators with Error.
class OperatorSpec {
 public:
  static OperatorSpec create(std::string name, std::vector<AxisSpec> axes,
                             std::vector<TensorAccess> accesses,
                             std::int64_t elem_bytes,
                             std::int64_t flops_per_point = 2,
                             std::optional<std::string> major_axis = {});

  const std::string& name() const { return name_; }
  const std::vector<AxisSpec>& axes() const { return axes_; }
  const std::vector<TensorAccess>& accesses() const { return accesses_; }
  std::int64_t elem_bytes() const { return elem_bytes_; }
  std::int64_t flops_per_point() const { return flops_per_point_; }

  std::size_t num_axes() const { return axes_.size(); }
  // Axis indices by kind, in declaration order.
  const std::vector<int>& space_axes() const { return space_axes_; }
  const std::vector<int>& reduce_axes() const { return reduce_axes_; }
  const std::vector<int>& dynamic_axes() const { return dynamic_axes_; }
  // Position of an axis within space_axes(), or -1 for reduce axes.
  int space_ordinal(int axis) const { return space_ordinal_[axis]; }
  // Innermost contiguous output axis; its shared-memory tile is aligned.
  int major_axis() const { return major_axis_; }

  // Index of the named axis, or -1.
  int find_axis(std::string_view name) const;
  int axis_index(std::string_view name) const;  // throws when absent

  // Bit i set when the access references axis i.
  const std::vector<std::uint32_t>& input_masks() const { return input_masks_; }
  std::uint32_t output_mask() const { return output_mask_; }

  friend bool operator==(const OperatorSpec& a, const OperatorSpec& b) {
    return a.name_ == b.name_ && a.axes_ == b.axes_ &&
           a.accesses_ == b.accesses_ && a.elem_bytes_ == b.elem_bytes_ &&
           a.flops_per_point_ == b.flops_per_point_ &&
           a.major_axis_ == b.major_axis_;
  }

 private:
  OperatorSpec() = default;

  std::string name_;
  std::vector<AxisSpec> axes_;
  std::vector<TensorAccess> accesses_;
  std::int64_t elem_bytes_ = 4;
  std::int64_t flops_per_point_ = 2;

  std::vector<int> space_axes_;
  std::vector<int> reduce_axes_;
  std::vector<int> dynamic_axes_;
  std::vector<int> space_ordinal_;
  int major_axis_ = -1;
  std::vector<std::uint32_t> input_masks_;
  std::uint32_t output_mask_ = 0;
};

// Largest number of dynamic axes an operator may declare.
inline constexpr std::size_t kMaxDynamicAxes = 4;

using Bindings = std::map<std::string, std::int64_t>;

// An operator with every dynamic axis bound to a concrete extent.
class WorkloadInstance {
 public:
  WorkloadInstance(OperatorSpec spec, Bindings bindings);

  const OperatorSpec& spec() const { return spec_; }
  const Bindings& bindings() const { return bindings_; }
  std::int64_t extent(int axis) const { return extents_[axis]; }
  const std::vector<std::int64_t>& extents() const { return extents_; }

  // Product of the space-axis extents (output elements).
  std::int64_t output_elems() const;

 private:
  OperatorSpec spec_;
  Bindings bindings_;
  std::vector<std::int64_t> extents_;
};

// Parses the JSON workload document
//   {name, axes:[{name, kind, extent | range:[lo,hi]}],
//    accesses:[{tensor, axes, role}], elem_bytes, flops_per_point?,
//    major_axis?}
OperatorSpec parse_workload(std::string_view document);
OperatorSpec load_workload_file(const std::filesystem::path& path);
std::string serialize(const OperatorSpec& spec);
// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string workload_hash(const OperatorSpec& spec);

// flops_per_point times the product of every axis extent.
std::int64_t flops(const WorkloadInstance& instance);

// Traffic, in bytes, of executing the whole instance with one tiling.
//
// Each block owns one shared-memory tile of the output and walks the reduce
// axes tile by tile. On every pass it stages the input tiles it touches from
// global into shared memory, and each thread then reads the slice its
// register tile needs:
//   data_R       = sum_inputs footprint(input) * blocks * passes
//   data_transW  = data_R  (every global read lands in shared memory)
//   data_transR  = sum_inputs footprint(input)
//                  * prod_{space axes not indexing input} smem/reg
//                  * blocks * passes
//   data_W       = true output footprint (each element written once)
struct DataVolumes {
  std::int64_t data_r = 0;
  std::int64_t data_w = 0;
  std::int64_t data_trans_r = 0;
  std::int64_t data_trans_w = 0;

  friend bool operator==(const DataVolumes&, const DataVolumes&) = default;
};

// `reg_tile` is indexed by space ordinal, `smem_tile` by axis index.
DataVolumes data_volumes(const WorkloadInstance& instance,
                         const TileVec& reg_tile, const TileVec& smem_tile);
// Same, over explicit per-axis extents (a sub-range of a shape).
DataVolumes data_volumes(const OperatorSpec& spec,
                         std::span<const std::int64_t> extents,
                         const TileVec& reg_tile, const TileVec& smem_tile);

// Bytes of the input tiles one block stages in shared memory per pass.
std::int64_t staged_smem_bytes(const OperatorSpec& spec,
                               const TileVec& smem_tile);

}  // namespace mixtile

#endif  // MIXTILE_WORKLOAD_H_
