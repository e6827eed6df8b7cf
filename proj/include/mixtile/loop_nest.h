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

#ifndef MIXTILE_LOOP_NEST_H_
#define MIXTILE_LOOP_NEST_H_

#include <string>

#include "mixtile/plan.h"
#include "mixtile/workload.h"

namespace mixtile {

// Target-neutral tiled loop nest for each part of a plan. Per part, space
// axes get three levels: block tiles (x.0), thread tiles inside the
// shared-memory tile (x.1) and register tiles (x.2); reduce axes get a
// staging loop (k.0) that loads the input tiles into shared memory and an
// inner loop (k.1). Trip counts multiply back to the covered extents. The
// second part of a two-part plan starts at a main-axis offset.
std::string emit_loop_nest(const ProgramPlan& plan,
                           const WorkloadInstance& instance, int tau);

}  // namespace mixtile

#endif  // MIXTILE_LOOP_NEST_H_
