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

#include "mixtile/candidate_cache.h"

#include <fstream>
#include <sstream>

#include "json_io.h"
#include "mixtile/error.h"
#include "mixtile/perf_model.h"
#include "mixtile/version.h"

namespace mixtile {
namespace {

using json_io::Json;
using json_io::member;

constexpr char kFormat[] = "mixtile-candidates";

Json params_json(const FilterParams& p) {
  return Json{{"sweep", json_io::to_json(p.sweep)},
              {"rest_regs", p.metric.rest_regs},
              {"psi", p.metric.psi},
              {"candidate_cap", p.enumerate.cap},
              {"final_cap", p.final_cap},
              {"coeffs", Json::array({p.coeffs.c0, p.coeffs.c1, p.coeffs.c2})}};
}

FilterParams params_from(const Json& j) {
  FilterParams p;
  p.sweep = json_io::sweep_from(member(j, "sweep"));
  p.metric.rest_regs = member(j, "rest_regs").get<std::int64_t>();
  p.metric.psi = member(j, "psi").get<double>();
  p.enumerate.cap = member(j, "candidate_cap").get<std::size_t>();
  p.final_cap = member(j, "final_cap").get<std::size_t>();
  const Json& c = member(j, "coeffs");
  if (!c.is_array() || c.size() != 3) throw_parse("coeffs must hold 3 numbers", "coeffs");
  p.coeffs = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
  return p;
}

}  // namespace

const ShapeResult* CandidateCache::find(const Bindings& binding) const {
  for (const ShapeResult& s : shapes) {
    if (s.binding == binding) return &s;
  }
  return nullptr;
}

std::string write_candidate_cache(const CandidateCache& cache,
                                  const OperatorSpec& spec) {
  Json shapes = Json::array();
  for (const ShapeResult& s : cache.shapes) {
    Json kernels = Json::array();
    for (const Candidate& c : s.final) {
      kernels.push_back(Json{{"reg", json_io::reg_map(c.kernel, spec)},
                             {"smem", json_io::smem_map(c.kernel, spec)},
                             {"metrics", json_io::to_json(c.metrics)}});
    }
    shapes.push_back(Json{
        {"binding", json_io::to_json(s.binding)},
        {"counts", Json{{"align", s.counts.align},
                        {"cross", s.counts.cross},
                        {"filter", s.counts.filter},
                        {"final", s.counts.final}}},
        {"truncated", s.truncated},
        {"capped", s.capped},
        {"fallback", s.fallback},
        {"effective_sweep", json_io::to_json(s.effective_sweep)},
        {"kernels", std::move(kernels)}});
  }
  Json doc{{"format", kFormat},
           {"schema_version", kSchemaVersion},
           {"tool_version", kToolVersion},
           {"perf_model_version", kPerfModelVersion},
           {"hardware", cache.hardware},
           {"workload", cache.workload},
           {"workload_hash", cache.workload_hash},
           {"params", params_json(cache.params)},
           {"shapes", std::move(shapes)}};
  return doc.dump(2) + "\n";
}

CandidateCache read_candidate_cache(std::string_view document,
                                    const OperatorSpec& spec) {
  Json doc;
  try {
    doc = Json::parse(document);
  } catch (const Json::parse_error& e) {
    throw_parse(std::string("candidate cache: ") + e.what());
  }
  try {
    if (member(doc, "format") != kFormat) {
      throw_parse("not a candidate cache", "format");
    }
    if (member(doc, "schema_version") != kSchemaVersion) {
      throw_parse("unsupported schema_version", "schema_version");
    }
    CandidateCache cache;
    cache.hardware = member(doc, "hardware").get<std::string>();
    cache.workload = member(doc, "workload").get<std::string>();
    cache.workload_hash = member(doc, "workload_hash").get<std::string>();
    if (cache.workload_hash != workload_hash(spec)) {
      throw_validation("workload_hash",
                       "cache was written for a different workload (" +
                           cache.workload + ")");
    }
    cache.params = params_from(member(doc, "params"));
    for (const Json& s : member(doc, "shapes")) {
      ShapeResult r;
      r.binding = json_io::bindings_from(member(s, "binding"));
      const Json& counts = member(s, "counts");
      r.counts = {member(counts, "align").get<std::size_t>(),
                  member(counts, "cross").get<std::size_t>(),
                  member(counts, "filter").get<std::size_t>(),
                  member(counts, "final").get<std::size_t>()};
      r.truncated = member(s, "truncated").get<bool>();
      r.capped = member(s, "capped").get<bool>();
      r.fallback = member(s, "fallback").get<std::vector<std::string>>();
      r.effective_sweep = json_io::sweep_from(member(s, "effective_sweep"));
      for (const Json& k : member(s, "kernels")) {
        Candidate c{json_io::kernel_from(member(k, "reg"), member(k, "smem"),
                                         spec),
                    json_io::metrics_from(member(k, "metrics"))};
        attach(c.kernel, c.metrics);
        r.final.push_back(std::move(c));
      }
      cache.shapes.push_back(std::move(r));
    }
    return cache;
  } catch (const Json::exception& e) {
    throw_parse(std::string("candidate cache: ") + e.what());
  }
}

CandidateCache load_candidate_cache(const std::filesystem::path& path,
                                    const OperatorSpec& spec) {
  std::ifstream in(path);
  if (!in) throw_parse("cannot open candidate cache '" + path.string() + "'", "cache");
  std::ostringstream os;
  os << in.rdbuf();
  return read_candidate_cache(os.str(), spec);
}

}  // namespace mixtile
