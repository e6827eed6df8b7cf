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

#include "mixtile/loop_nest.h"

#include <sstream>

#include "mixtile/ukernel.h"

namespace mixtile {
namespace {

class Emitter {
 public:
  explicit Emitter(std::ostringstream& os) : os_(os) {}

  void line(const std::string& text) {
    os_ << std::string(2 * depth_, ' ') << text << "\n";
  }
  void open(const std::string& var, std::int64_t begin, std::int64_t end,
            std::int64_t step, const std::string& note = {}) {
    std::string text = "for " + var + " in range(" + std::to_string(begin) +
                       ", " + std::to_string(end) + ", " +
                       std::to_string(step) + "):";
    if (!note.empty()) text += "  # " + note;
    line(text);
    ++depth_;
  }

 private:
  std::ostringstream& os_;
  int depth_ = 0;
};

std::string index_expr(const TensorAccess& access) {
  std::string out = access.tensor + "[";
  for (std::size_t i = 0; i < access.axes.size(); ++i) {
    if (i) out += ", ";
    out += access.axes[i];
  }
  return out + "]";
}

}  // namespace

std::string emit_loop_nest(const ProgramPlan& plan,
                           const WorkloadInstance& instance, int tau) {
  const OperatorSpec& spec = instance.spec();
  const auto covered = covered_extents(plan, instance, tau);

  std::string update;
  std::string operands;
  for (const TensorAccess& acc : spec.accesses()) {
    if (acc.role == AccessRole::kOutput) {
      update = index_expr(acc);
    } else {
      operands += operands.empty() ? "" : " * ";
      operands += index_expr(acc);
    }
  }

  std::ostringstream os;
  std::int64_t offset = 0;
  for (std::size_t p = 0; p < plan.parts.size(); ++p) {
    const PlanPart& part = plan.parts[p];
    const UKernel& k = part.kernel;
    const std::int64_t tau_len = part.count * k.smem_tile[tau];
    os << "# part " << p + 1 << " of " << plan.parts.size() << ": "
       << describe(k, spec) << " x" << part.count << "\n";
    if (plan.parts.size() > 1) {
      os << "# " << spec.axes()[tau].name << " offset " << offset
         << ", covers [" << offset << ", " << offset + tau_len << ")\n";
    }
    Emitter e(os);
    // Level 0: one iteration per block.
    for (int a : spec.space_axes()) {
      const std::string& n = spec.axes()[a].name;
      if (a == tau) {
        e.open(n + ".0", offset, offset + tau_len, k.smem_tile[a],
               "block tiles");
      } else {
        e.open(n + ".0", 0, covered[a], k.smem_tile[a], "block tiles");
      }
    }
    for (int a : spec.reduce_axes()) {
      const std::string& n = spec.axes()[a].name;
      e.open(n + ".0", 0, ceil_by(instance.extent(a), k.smem_tile[a]),
             k.smem_tile[a], "shared-memory staging");
    }
    for (const TensorAccess& acc : spec.accesses()) {
      if (acc.role != AccessRole::kInput) continue;
      std::string slice = acc.tensor + "[";
      for (std::size_t i = 0; i < acc.axes.size(); ++i) {
        const int a = spec.axis_index(acc.axes[i]);
        slice += (i ? ", " : "") + acc.axes[i] + ".0:" + acc.axes[i] +
                 ".0+" + std::to_string(k.smem_tile[a]);
      }
      e.line("stage " + slice + "] -> shared");
    }
    // Level 1: threads of the block, one register tile each.
    for (int a : spec.space_axes()) {
      const std::int64_t reg = k.reg_tile[spec.space_ordinal(a)];
      e.open(spec.axes()[a].name + ".1", 0, k.smem_tile[a], reg,
             "thread tiles");
    }
    for (int a : spec.reduce_axes()) {
      e.open(spec.axes()[a].name + ".1", 0, k.smem_tile[a], 1);
    }
    // Level 2: register tile of one thread.
    for (int a : spec.space_axes()) {
      e.open(spec.axes()[a].name + ".2", 0, k.reg_tile[spec.space_ordinal(a)],
             1, "register tiles");
    }
    e.line(update + " += " + operands);
    os << "# where";
    for (int a : spec.space_axes()) {
      const std::string& n = spec.axes()[a].name;
      os << " " << n << " = " << n << ".0 + " << n << ".1 + " << n << ".2;";
    }
    for (int a : spec.reduce_axes()) {
      const std::string& n = spec.axes()[a].name;
      os << " " << n << " = " << n << ".0 + " << n << ".1;";
    }
    os << "\n";
    offset += tau_len;
    if (p + 1 < plan.parts.size()) os << "\n";
  }
  return os.str();
}

}  // namespace mixtile
