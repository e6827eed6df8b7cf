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

#ifndef MIXTILE_HARDWARE_H_
#define MIXTILE_HARDWARE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mixtile {

// Analytical machine model consumed by every metric. Bandwidths are in
// bytes/s and compute in FLOP/s, so every derived time is in seconds.
// Immutable once validated; safe to share across tuning tasks.
struct HardwareDescriptor {
  std::string name;
  std::int64_t num_cores = 0;            // parallel compute units (SMs)
  std::int64_t regs_per_core = 0;        // register file per core
  std::int64_t smem_per_core_bytes = 0;  // shared memory per core
  std::int64_t global_bw_bytes_per_s = 0;
  std::int64_t shared_bw_bytes_per_s = 0;
  std::int64_t peak_flops = 0;
  std::int64_t default_active_blocks = 0;   // blocks per core used by the
                                            // register bound
  std::int64_t active_blocks_per_core = 0;  // blocks per core for saturation
  std::int64_t align_elems = 0;  // major-axis alignment, power of two

  // Blocks resident across the whole device in one wave.
  std::int64_t active_blocks() const {
    return active_blocks_per_core * num_cores;
  }

  friend bool operator==(const HardwareDescriptor&,
                         const HardwareDescriptor&) = default;
};

// Throws Error(kValidation) naming the first field that breaks an invariant.
void validate(const HardwareDescriptor& hw);

// Parses a flat JSON object holding exactly the descriptor fields. Unknown
// or missing fields, non-integer numbers and invalid values are rejected
// with the field name attached to the error.
HardwareDescriptor load_hardware_descriptor(std::string_view document);
HardwareDescriptor load_hardware_file(const std::filesystem::path& path);

// Canonical form: keys sorted, two-space indent, trailing newline.
std::string serialize(const HardwareDescriptor& hw);

}  // namespace mixtile

#endif  // MIXTILE_HARDWARE_H_
