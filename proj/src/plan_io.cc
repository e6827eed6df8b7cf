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

#include "mixtile/plan_io.h"

#include <cstdio>
#include <sstream>

#include "json_io.h"
#include "mixtile/error.h"
#include "mixtile/metrics.h"
#include "mixtile/perf_model.h"
#include "mixtile/version.h"

namespace mixtile {
namespace {

using json_io::Json;
using json_io::member;

constexpr char kFormat[] = "mixtile-plan";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Json estimate_json(const TimeEstimate& e) {
  return Json{{"compute_s", e.compute_s},
              {"memory_s", e.memory_s},
              {"padding_s", e.padding_s},
              {"total_s", e.total_s},
              {"waves", e.waves}};
}

Json provenance_json(const Provenance& p) {
  return Json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"perf_model_version", kPerfModelVersion},
              {"hardware", p.hardware},
              {"workload", p.workload},
              {"workload_hash", p.workload_hash}};
}

std::string binding_text(const Bindings& b) {
  std::string out;
  for (const auto& [k, v] : b) {
    if (!out.empty()) out += ",";
    out += k + "=" + std::to_string(v);
  }
  return out;
}

}  // namespace

Provenance provenance(const HardwareDescriptor& hw, const OperatorSpec& spec) {
  return {hw.name, spec.name(), workload_hash(spec)};
}

std::string describe(const ProgramPlan& plan, const OperatorSpec& spec,
                     int tau) {
  std::string out = spec.axes()[tau].name + ":";
  for (std::size_t i = 0; i < plan.parts.size(); ++i) {
    out += i == 0 ? " " : " + ";
    out += describe(plan.parts[i].kernel, spec) + " x" +
           std::to_string(plan.parts[i].count);
  }
  return out;
}

std::string write_plan_file(const PlanReport& report,
                            const WorkloadInstance& instance) {
  const OperatorSpec& spec = instance.spec();
  Json plans = Json::array();
  for (std::size_t r = 0; r < report.ranked.size(); ++r) {
    const ProgramPlan& plan = report.ranked[r];
    Json parts = Json::array();
    std::int64_t offset = 0;
    for (const PlanPart& p : plan.parts) {
      const SiaTerms t = part_terms(p, report.coeffs);
      parts.push_back(Json{{"reg", json_io::reg_map(p.kernel, spec)},
                           {"smem", json_io::smem_map(p.kernel, spec)},
                           {"count", p.count},
                           {"tau_offset", offset},
                           {"sia_terms", Json{{"cmr", t.cmr},
                                              {"pad", t.pad},
                                              {"occ", t.occ}}}});
      offset += p.count * p.kernel.smem_tile[report.tau];
    }
    Json covered = Json::object();
    const auto cov = covered_extents(plan, instance, report.tau);
    for (std::size_t a = 0; a < spec.num_axes(); ++a) {
      covered[spec.axes()[a].name] = cov[a];
    }
    Json entry{{"rank", r + 1},
               {"parts", std::move(parts)},
               {"covered_extents", std::move(covered)},
               {"padding_fraction",
                padding_fraction(plan, instance, report.tau)}};
    if (plan.sia) entry["sia"] = *plan.sia;
    if (plan.est) entry["estimate"] = estimate_json(*plan.est);
    plans.push_back(std::move(entry));
  }

  Json doc = provenance_json(report.prov);
  doc["format"] = kFormat;
  doc["binding"] = json_io::to_json(instance.bindings());
  doc["tau"] = spec.axes()[report.tau].name;
  doc["pool_size"] = report.pool_size;
  doc["top_k"] = report.top_k;
  doc["coeffs"] =
      Json::array({report.coeffs.c0, report.coeffs.c1, report.coeffs.c2});
  doc["fallback"] = report.fallback;
  doc["plans"] = std::move(plans);
  if (report.build_seconds) doc["build_seconds"] = *report.build_seconds;
  if (report.verify) {
    const Verification& v = *report.verify;
    doc["verify"] = Json{
        {"combinations_match", v.combinations_match},
        {"plans_checked", v.plans_checked},
        {"tau_exact", v.tau_exact},
        {"rank", Json{{"pool_size", v.rank.pool_size},
                      {"top_k", v.rank.top_k},
                      {"model_best_index", v.rank.model_best},
                      {"model_best_total_s", v.rank.best_total_s},
                      {"sia_top1_total_s", v.rank.top1_total_s},
                      {"sia_topk_best_total_s", v.rank.topk_best_total_s},
                      {"tolerance", v.rank.tolerance},
                      {"top1_within", v.rank.top1_within},
                      {"topk_within", v.rank.topk_within}}}};
  }
  return doc.dump(2) + "\n";
}

PlanFile read_plan_file(std::string_view document, const OperatorSpec& spec) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw_parse(std::string("plan file: ") + e.what());
  }
  try {
    if (member(doc, "format") != kFormat) {
      throw_parse("not a plan file", "format");
    }
    if (member(doc, "schema_version") != kSchemaVersion) {
      throw_parse("unsupported schema_version", "schema_version");
    }
    if (member(doc, "workload_hash") != workload_hash(spec)) {
      throw_validation("workload_hash",
                       "plan was written for a different workload");
    }
    PlanFile f;
    f.binding = json_io::bindings_from(member(doc, "binding"));
    f.tau = member(doc, "tau").get<std::string>();
    spec.axis_index(f.tau);
    for (const Json& p : member(doc, "plans")) {
      ProgramPlan plan;
      for (const Json& part : member(p, "parts")) {
        plan.parts.push_back(PlanPart{
            json_io::kernel_from(member(part, "reg"), member(part, "smem"),
                                 spec),
            member(part, "count").get<std::int64_t>()});
      }
      if (p.contains("sia")) plan.sia = p.at("sia").get<double>();
      f.plans.push_back(std::move(plan));
    }
    return f;
  } catch (const Json::exception& e) {
    throw_parse(std::string("plan file: ") + e.what());
  }
}

std::string format_ranking_report(const PlanReport& report,
                                  const WorkloadInstance& instance) {
  const OperatorSpec& spec = instance.spec();
  std::ostringstream os;
  os << "# mixtile " << kToolVersion << " perf_model=" << kPerfModelVersion
     << " hardware=" << report.prov.hardware
     << " workload=" << report.prov.workload
     << " workload_hash=" << report.prov.workload_hash
     << " schema_version=" << kSchemaVersion << "\n";
  os << "shape " << binding_text(instance.bindings()) << ", main axis "
     << spec.axes()[report.tau].name << ", pool " << report.pool_size
     << " plans, coeffs " << num(report.coeffs.c0) << ","
     << num(report.coeffs.c1) << "," << num(report.coeffs.c2) << "\n";
  if (!report.fallback.empty()) {
    os << "compile-stage fallback:";
    for (const std::string& f : report.fallback) os << " " << f;
    os << "\n";
  }
  for (std::size_t r = 0; r < report.ranked.size(); ++r) {
    const ProgramPlan& plan = report.ranked[r];
    os << "#" << r + 1 << " sia=" << num(plan.sia.value_or(0));
    if (plan.est) {
      os << " total_s=" << num(plan.est->total_s)
         << " compute_s=" << num(plan.est->compute_s)
         << " memory_s=" << num(plan.est->memory_s)
         << " padding_s=" << num(plan.est->padding_s)
         << " waves=" << plan.est->waves;
    }
    os << "\n";
    for (const PlanPart& p : plan.parts) {
      const SiaTerms t = part_terms(p, report.coeffs);
      os << "    " << describe(p.kernel, spec) << " x" << p.count
         << "  c0*CMR=" << num(t.cmr) << " c1*Pad=" << num(t.pad)
         << " c2*Occ=" << num(t.occ) << "\n";
    }
  }
  if (report.build_seconds) {
    os << "combine+rank wall clock: " << num(*report.build_seconds) << " s\n";
  }
  return os.str();
}

std::string write_sweep_csv(const Provenance& prov, const OperatorSpec& spec,
                            const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "# tool_version=" << kToolVersion
     << " perf_model_version=" << kPerfModelVersion
     << " hardware=" << prov.hardware << " workload=" << prov.workload
     << " workload_hash=" << prov.workload_hash
     << " schema_version=" << kSchemaVersion << "\n";
  for (int a : spec.dynamic_axes()) os << spec.axes()[a].name << ",";
  os << "status,tau,plan,parts,pool_size,sia,total_s,compute_s,memory_s,"
        "padding_s,waves,padding_fraction,occupancy,fallback,error\n";
  for (const SweepRow& row : rows) {
    for (int a : spec.dynamic_axes()) {
      auto it = row.binding.find(spec.axes()[a].name);
      os << (it == row.binding.end() ? 0 : it->second) << ",";
    }
    os << row.status << ",";
    if (row.plan) {
      const ProgramPlan& p = *row.plan;
      const TimeEstimate e = p.est.value_or(TimeEstimate{});
      os << spec.axes()[row.tau].name << ",\"" << describe(p, spec, row.tau)
         << "\"," << p.parts.size() << "," << row.pool_size << ","
         << num(p.sia.value_or(0)) << "," << num(e.total_s) << ","
         << num(e.compute_s) << "," << num(e.memory_s) << ","
         << num(e.padding_s) << "," << e.waves << ","
         << num(row.padding_fraction) << "," << num(row.occupancy) << ",";
    } else {
      os << ",,,,,,,,,,,,";
    }
    for (std::size_t i = 0; i < row.fallback.size(); ++i) {
      os << (i ? ";" : "") << row.fallback[i];
    }
    std::string err = row.error;
    for (char& c : err) {
      if (c == '"') c = '\'';
    }
    os << ",\"" << err << "\"\n";
  }
  return os.str();
}

}  // namespace mixtile
