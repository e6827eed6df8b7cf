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

#include "mixtile/commands.h"

#include <charconv>
#include <chrono>
#include <fstream>
#include <ostream>
#include <set>

#include "mixtile/candidate_cache.h"
#include "mixtile/combiner.h"
#include "mixtile/error.h"
#include "mixtile/hardware.h"
#include "mixtile/loop_nest.h"
#include "mixtile/metrics.h"
#include "mixtile/oracle.h"
#include "mixtile/perf_model.h"
#include "mixtile/plan_io.h"
#include "mixtile/sia.h"
#include "parallel.h"

namespace mixtile {
namespace {

std::int64_t parse_int(std::string_view text, const std::string& field) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw_parse("expected an integer, got '" + std::string(text) + "'", field);
  }
  return v;
}

double parse_double(std::string_view text, const std::string& field) {
  std::string s(text);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw_parse("expected a number, got '" + s + "'", field);
  }
  return v;
}

void write_output(const RunConfig& config, std::ostream& out,
                  const std::string& text) {
  if (config.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(config.out, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorKind::kValidation,
                "cannot write '" + config.out.string() + "'", "out");
  }
}

void write_file(const std::filesystem::path& path, const std::string& text,
                const std::string& field) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    throw Error(ErrorKind::kValidation,
                "cannot write '" + path.string() + "'", field);
  }
}

struct Inputs {
  HardwareDescriptor hw;
  OperatorSpec spec;
};

Inputs load_inputs(const RunConfig& config) {
  if (config.hardware.empty()) {
    throw_validation("hardware", "--hardware is required");
  }
  if (config.workload.empty()) {
    throw_validation("workload", "--workload is required");
  }
  HardwareDescriptor hw = load_hardware_file(config.hardware);
  return {std::move(hw), load_workload_file(config.workload)};
}

std::vector<Bindings> shapes_for(const RunConfig& config,
                                 const OperatorSpec& spec) {
  if (!config.shape.empty()) {
    if (!config.ranges.empty()) {
      throw_validation("shape", "--shape and --range are exclusive");
    }
    WorkloadInstance check(spec, config.shape);
    return {config.shape};
  }
  return expand_ranges(spec, config.ranges);
}

std::string truncation_warning(const ShapeResult& r) {
  if (!r.truncated) return {};
  std::string b;
  for (const auto& [k, v] : r.binding) b += " " + k + "=" + std::to_string(v);
  return "mixtile: warning: candidate enumeration truncated at " +
         std::to_string(r.counts.align) + " uKernels for shape" + b + "\n";
}

Verification verify_pool(const ProgramPool& pool,
                         const std::vector<Candidate>& candidates,
                         const HardwareDescriptor& hw,
                         const SiaCoeffs& coeffs, std::size_t top_k) {
  Verification v;
  std::set<std::int64_t> tiles;
  for (const Candidate& c : candidates) {
    tiles.insert(c.kernel.smem_tile[pool.tau]);
  }
  const std::vector<std::int64_t> tile_list(tiles.begin(), tiles.end());
  const std::int64_t h = pool.instance.extent(pool.tau);
  v.combinations_match = combin_search(tile_list, h) ==
                         oracle::brute_force_combinations(tile_list, h);
  v.tau_exact = true;
  for (const ProgramPlan& plan : pool.plans) {
    ++v.plans_checked;
    if (oracle::tau_coverage(plan, pool.tau) != h) v.tau_exact = false;
  }
  v.rank = oracle::exhaustive_rank_check(pool.plans, pool.instance, hw, coeffs,
                                         top_k);
  return v;
}

// Combines and ranks one shape's candidates.
PlanReport plan_shape(const WorkloadInstance& instance,
                      const HardwareDescriptor& hw,
                      const ShapeResult& compiled, const RunConfig& config,
                      double* seconds) {
  std::vector<UKernel> kernels;
  kernels.reserve(compiled.final.size());
  for (const Candidate& c : compiled.final) kernels.push_back(c.kernel);

  const auto start = std::chrono::steady_clock::now();
  ProgramPool pool = build_programs(kernels, instance);
  PlanReport report;
  report.ranked = rank_programs(pool.plans, config.filter.coeffs,
                                RankOptions{config.top_k, config.normalize});
  const auto stop = std::chrono::steady_clock::now();
  *seconds = std::chrono::duration<double>(stop - start).count();

  for (ProgramPlan& p : report.ranked) p.est = estimate_time(p, instance, hw);
  report.tau = pool.tau;
  report.pool_size = pool.plans.size();
  report.coeffs = config.filter.coeffs;
  report.top_k = config.top_k;
  report.fallback = compiled.fallback;
  if (config.timing) report.build_seconds = *seconds;
  if (config.verify) {
    report.verify = verify_pool(pool, compiled.final, hw,
                                config.filter.coeffs, config.top_k);
  }
  return report;
}

SweepRow sweep_row(const WorkloadInstance& instance,
                   const HardwareDescriptor& hw, const ShapeResult& compiled,
                   const PlanReport& report) {
  SweepRow row;
  row.binding = instance.bindings();
  row.tau = report.tau;
  row.plan = report.ranked.front();
  row.pool_size = report.pool_size;
  row.padding_fraction = padding_fraction(*row.plan, instance, report.tau);
  row.occupancy = occupancy_metric(plan_blocks(*row.plan, instance, report.tau),
                                   hw.num_cores);
  row.fallback = compiled.fallback;
  return row;
}

}  // namespace

std::pair<std::string, std::int64_t> parse_binding(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw_parse("expected NAME=VALUE, got '" + text + "'", "shape");
  }
  return {text.substr(0, eq),
          parse_int(std::string_view(text).substr(eq + 1), "shape")};
}

AxisRange parse_range(const std::string& text) {
  const auto eq = text.find('=');
  const auto dots = text.find("..", eq == std::string::npos ? 0 : eq);
  if (eq == std::string::npos || eq == 0 || dots == std::string::npos) {
    throw_parse("expected NAME=LO..HI[:STEP], got '" + text + "'", "range");
  }
  AxisRange r;
  r.axis = text.substr(0, eq);
  const std::string_view s(text);
  r.lo = parse_int(s.substr(eq + 1, dots - eq - 1), "range");
  std::string_view rest = s.substr(dots + 2);
  const auto colon = rest.find(':');
  if (colon != std::string_view::npos) {
    r.step = parse_int(rest.substr(colon + 1), "range");
    rest = rest.substr(0, colon);
  }
  r.hi = parse_int(rest, "range");
  return r;
}

SiaCoeffs parse_coeffs(const std::string& text) {
  std::vector<double> v;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    v.push_back(parse_double(
        std::string_view(text).substr(start, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - start),
        "coeffs"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (v.size() != 3) throw_parse("expected c0,c1,c2", "coeffs");
  SiaCoeffs c{v[0], v[1], v[2]};
  validate(c);
  return c;
}

int cmd_tune(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(config);
  const std::vector<Bindings> shapes = shapes_for(config, in.spec);
  CandidateCache cache;
  cache.hardware = in.hw.name;
  cache.workload = in.spec.name();
  cache.workload_hash = workload_hash(in.spec);
  cache.params = config.filter;
  cache.shapes = compile_stage(in.spec, in.hw, config.filter, shapes,
                               config.jobs);
  for (const ShapeResult& r : cache.shapes) err << truncation_warning(r);
  const std::string text = write_candidate_cache(cache, in.spec);
  if (!config.cache.empty()) {
    write_file(config.cache, text, "cache");
  } else {
    write_output(config, out, text);
  }
  return 0;
}

int cmd_plan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(config);
  const WorkloadInstance instance(in.spec, config.shape);

  ShapeResult compiled;
  bool cached = false;
  if (!config.cache.empty() && std::filesystem::exists(config.cache)) {
    const CandidateCache cache = load_candidate_cache(config.cache, in.spec);
    if (cache.hardware != in.hw.name) {
      throw_validation("cache", "cache was tuned for hardware '" +
                                    cache.hardware + "'");
    }
    if (const ShapeResult* s = cache.find(instance.bindings())) {
      compiled = *s;
      cached = true;
    }
  }
  if (!cached) {
    compiled = compile_shape(instance, in.hw, config.filter);
    err << truncation_warning(compiled);
  }

  double seconds = 0;
  PlanReport report = plan_shape(instance, in.hw, compiled, config, &seconds);
  report.prov = provenance(in.hw, in.spec);
  if (!config.timing) {
    err << "mixtile: combine+rank took " << seconds << " s\n";
  }
  if (!config.report.empty()) {
    write_file(config.report, format_ranking_report(report, instance),
               "report");
  }

  if (config.emit == "plan") {
    write_output(config, out, write_plan_file(report, instance));
  } else if (config.emit == "loopnest") {
    write_output(config, out,
                 emit_loop_nest(report.ranked.front(), instance, report.tau));
  } else if (config.emit == "csv") {
    write_output(config, out,
                 write_sweep_csv(report.prov, in.spec,
                                 {sweep_row(instance, in.hw, compiled, report)}));
  } else {
    throw_validation("emit", "expected plan, loopnest or csv");
  }

  if (report.verify &&
      (!report.verify->combinations_match || !report.verify->tau_exact)) {
    throw Error(ErrorKind::kInvariant,
                "verification failed: combination search disagrees with the "
                "brute-force oracle or a plan misses the main axis");
  }
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Inputs in = load_inputs(config);
  const std::vector<Bindings> shapes = shapes_for(config, in.spec);
  std::vector<SweepRow> rows(shapes.size());
  std::vector<std::string> warnings(shapes.size());
  parallel_for(shapes.size(), config.jobs, [&](std::size_t i) {
    try {
      const WorkloadInstance instance(in.spec, shapes[i]);
      const ShapeResult compiled = compile_shape(instance, in.hw,
                                                 config.filter);
      warnings[i] = truncation_warning(compiled);
      RunConfig quiet = config;
      quiet.verify = false;
      quiet.timing = false;
      double seconds = 0;
      const PlanReport report =
          plan_shape(instance, in.hw, compiled, quiet, &seconds);
      rows[i] = sweep_row(instance, in.hw, compiled, report);
    } catch (const Error& e) {
      rows[i].binding = shapes[i];
      rows[i].status = to_string(e.kind());
      rows[i].error = e.what();
    }
  });
  std::size_t failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    err << warnings[i];
    if (rows[i].status != "ok") ++failed;
  }
  if (failed) err << "mixtile: " << failed << " shape(s) failed\n";
  write_output(config, out,
               write_sweep_csv(provenance(in.hw, in.spec), in.spec, rows));
  return 0;
}

int cmd_emit_loopnest(const RunConfig& config, std::ostream& out,
                      std::ostream&) {
  if (config.plan.empty()) throw_validation("plan", "--plan is required");
  if (config.workload.empty()) {
    throw_validation("workload", "--workload is required");
  }
  const OperatorSpec spec = load_workload_file(config.workload);
  std::ifstream f(config.plan);
  if (!f) {
    throw_parse("cannot open plan file '" + config.plan.string() + "'",
                "plan");
  }
  const std::string doc((std::istreambuf_iterator<char>(f)),
                        std::istreambuf_iterator<char>());
  const PlanFile plan = read_plan_file(doc, spec);
  if (config.rank < 1 || config.rank > plan.plans.size()) {
    throw_validation("rank", "plan file holds " +
                                 std::to_string(plan.plans.size()) + " plans");
  }
  const WorkloadInstance instance(spec, plan.binding);
  const int tau = spec.axis_index(plan.tau);
  const ProgramPlan& chosen = plan.plans[config.rank - 1];
  if (auto problem = check_plan(chosen, instance, tau)) {
    throw_validation("plan", *problem);
  }
  write_output(config, out, emit_loop_nest(chosen, instance, tau));
  return 0;
}

}  // namespace mixtile
