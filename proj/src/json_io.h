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

// JSON helpers shared by the cache and plan writers. Internal.

#ifndef MIXTILE_SRC_JSON_IO_H_
#define MIXTILE_SRC_JSON_IO_H_

#include <string>

#include "json.hpp"
#include "mixtile/filter.h"
#include "mixtile/ukernel.h"
#include "mixtile/workload.h"

namespace mixtile::json_io {

using Json = nlohmann::json;

// {"i": 4, "j": 8}: register tiles keyed by space axis name.
Json reg_map(const UKernel& k, const OperatorSpec& spec);
// Shared-memory tiles keyed by axis name.
Json smem_map(const UKernel& k, const OperatorSpec& spec);
// Inverse of reg_map/smem_map; throws Error(kParse) on missing axes.
UKernel kernel_from(const Json& reg, const Json& smem,
                    const OperatorSpec& spec);

Json to_json(const SweepParams& s);
SweepParams sweep_from(const Json& j);
Json to_json(const MetricBundle& m);
MetricBundle metrics_from(const Json& j);
Json to_json(const Bindings& b);
Bindings bindings_from(const Json& j);

// Typed member access raising Error(kParse) with the key path.
const Json& member(const Json& obj, const std::string& key);

}  // namespace mixtile::json_io

#endif  // MIXTILE_SRC_JSON_IO_H_
