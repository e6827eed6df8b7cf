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

#ifndef MIXTILE_COMMANDS_H_
#define MIXTILE_COMMANDS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mixtile/filter.h"
#include "mixtile/workload.h"

namespace mixtile {

// Settings shared by every subcommand.
struct RunConfig {
  std::filesystem::path hardware;
  std::filesystem::path workload;
  FilterParams filter;
  std::size_t top_k = 10;
  bool normalize = false;        // per-pool min-max SIA normalization
  Bindings shape;                // --shape NAME=VALUE
  std::vector<AxisRange> ranges;  // --range NAME=LO..HI[:STEP]
  std::filesystem::path out;     // empty: stdout
  std::filesystem::path cache;
  std::filesystem::path report;  // plan: text ranking report
  std::filesystem::path plan;    // emit-loopnest: plan file to read
  std::size_t rank = 1;          // emit-loopnest: which ranked plan
  std::string emit = "plan";     // plan | loopnest | csv
  unsigned jobs = 1;
  bool verify = false;
  bool timing = false;           // record plan wall clock in the output
};

// Each command writes its artifact to config.out (or `out`), diagnostics to
// `err`, and returns the process exit code. Library errors propagate as
// mixtile::Error.
int cmd_tune(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_plan(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_emit_loopnest(const RunConfig& config, std::ostream& out,
                      std::ostream& err);

// Parses "NAME=VALUE" and "NAME=LO..HI[:STEP]". Throw Error(kParse).
std::pair<std::string, std::int64_t> parse_binding(const std::string& text);
AxisRange parse_range(const std::string& text);
SiaCoeffs parse_coeffs(const std::string& text);

}  // namespace mixtile

#endif  // MIXTILE_COMMANDS_H_
