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

#ifndef MIXTILE_CANDIDATE_CACHE_H_
#define MIXTILE_CANDIDATE_CACHE_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mixtile/filter.h"
#include "mixtile/hardware.h"
#include "mixtile/workload.h"

namespace mixtile {

// Compile-stage output: one section per shape binding with the filtered
// uKernels, their metrics and the filter metadata.
struct CandidateCache {
  std::string hardware;
  std::string workload;
  std::string workload_hash;
  FilterParams params;
  std::vector<ShapeResult> shapes;

  // Section whose binding equals `binding`, or nullptr.
  const ShapeResult* find(const Bindings& binding) const;
};

// Canonical JSON (sorted keys, two-space indent, trailing newline).
std::string write_candidate_cache(const CandidateCache& cache,
                                  const OperatorSpec& spec);

// Parses a cache written for `spec`. Throws Error(kParse) for malformed
// documents and Error(kValidation) when it was written for another
// workload.
CandidateCache read_candidate_cache(std::string_view document,
                                    const OperatorSpec& spec);
CandidateCache load_candidate_cache(const std::filesystem::path& path,
                                    const OperatorSpec& spec);

}  // namespace mixtile

#endif  // MIXTILE_CANDIDATE_CACHE_H_
