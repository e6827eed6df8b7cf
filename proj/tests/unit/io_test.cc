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

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mixtile/candidate_cache.h"
#include "mixtile/combiner.h"
#include "mixtile/commands.h"
#include "mixtile/error.h"
#include "mixtile/loop_nest.h"
#include "mixtile/perf_model.h"
#include "mixtile/plan_io.h"
#include "test_util.h"

namespace mixtile {
namespace {

using testing::dense;
using testing::dense_kernel;
using testing::source_path;
using testing::v100_like;

CandidateCache small_cache() {
  const OperatorSpec spec = testing::dense_spec(1, 128, 256, 128);
  CandidateCache cache;
  cache.hardware = "v100-like";
  cache.workload = spec.name();
  cache.workload_hash = workload_hash(spec);
  cache.shapes = compile_stage(spec, v100_like(), cache.params,
                               expand_ranges(spec, {{"i", 1, 21, 10}}));
  return cache;
}

TEST(CandidateCacheTest, RoundTripIsByteExact) {
  const OperatorSpec spec = testing::dense_spec(1, 128, 256, 128);
  const CandidateCache cache = small_cache();
  const std::string text = write_candidate_cache(cache, spec);
  const CandidateCache back = read_candidate_cache(text, spec);
  EXPECT_EQ(write_candidate_cache(back, spec), text);
  ASSERT_EQ(back.shapes.size(), 3u);
  const ShapeResult* s = back.find({{"i", 11}});
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->final.size(), cache.shapes[1].final.size());
  EXPECT_EQ(back.find({{"i", 12}}), nullptr);
  for (std::size_t n = 0; n < s->final.size(); ++n) {
    EXPECT_TRUE(same_tiles(s->final[n].kernel, cache.shapes[1].final[n].kernel));
    EXPECT_EQ(s->final[n].kernel.cached, cache.shapes[1].final[n].kernel.cached);
  }
}

TEST(CandidateCacheTest, RejectsOtherWorkload) {
  const OperatorSpec spec = testing::dense_spec(1, 128, 256, 128);
  const std::string text = write_candidate_cache(small_cache(), spec);
  EXPECT_THROW(read_candidate_cache(text, testing::dense_spec()), Error);
  EXPECT_THROW(read_candidate_cache("{", spec), Error);
  EXPECT_THROW(read_candidate_cache("{}", spec), Error);
}

PlanReport ranked_report(const WorkloadInstance& inst) {
  const HardwareDescriptor hw = v100_like();
  const ShapeResult r = compile_shape(inst, hw, FilterParams{});
  std::vector<UKernel> ks;
  for (const Candidate& c : r.final) ks.push_back(c.kernel);
  const ProgramPool pool = build_programs(ks, inst);
  PlanReport report;
  report.prov = provenance(hw, inst.spec());
  report.tau = pool.tau;
  report.pool_size = pool.plans.size();
  report.top_k = 10;
  report.ranked = rank_programs(pool.plans, report.coeffs, {10, false});
  for (ProgramPlan& p : report.ranked) p.est = estimate_time(p, inst, hw);
  report.fallback = r.fallback;
  return report;
}

TEST(PlanFileTest, RoundTrip) {
  const WorkloadInstance inst = dense(53, 256, 128);
  const PlanReport report = ranked_report(inst);
  const std::string text = write_plan_file(report, inst);
  const PlanFile back = read_plan_file(text, inst.spec());
  EXPECT_EQ(back.binding, inst.bindings());
  EXPECT_EQ(back.tau, "j");
  ASSERT_EQ(back.plans.size(), report.ranked.size());
  for (std::size_t i = 0; i < back.plans.size(); ++i) {
    EXPECT_TRUE(same_parts(back.plans[i], report.ranked[i]));
    EXPECT_EQ(back.plans[i].sia, report.ranked[i].sia);
  }
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc.at("format"), "mixtile-plan");
  EXPECT_TRUE(doc.contains("schema_version"));
  const auto& first = doc.at("plans").at(0);
  EXPECT_TRUE(first.contains("estimate"));
  EXPECT_TRUE(first.at("parts").at(0).contains("sia_terms"));
}

TEST(PlanFileTest, ReportMentionsEveryRank) {
  const WorkloadInstance inst = dense(53, 256, 128);
  const PlanReport report = ranked_report(inst);
  const std::string text = format_ranking_report(report, inst);
  for (std::size_t i = 1; i <= report.ranked.size(); ++i) {
    EXPECT_NE(text.find(std::to_string(i)), std::string::npos);
  }
}

TEST(SweepCsvTest, HeaderAndRows) {
  const OperatorSpec spec = testing::dense_spec();
  SweepRow ok;
  ok.binding = {{"i", 53}};
  ok.tau = 1;
  ok.plan = ProgramPlan{
      {{testing::with_metrics(dense_kernel(1, 8, 8, 64, 8), 0.5, 0.9, 0.9),
        36}},
      0.5 + 0.9 + 0.9,
      TimeEstimate{1e-5, 2e-5, 1e-6, 3e-5, 1}};
  SweepRow bad;
  bad.binding = {{"i", 54}};
  bad.status = "empty_result";
  bad.error = "no plan, sorry";
  const std::string csv =
      write_sweep_csv(provenance(v100_like(), spec), spec, {ok, bad});
  std::istringstream in(csv);
  std::string meta, header, row1, row2;
  std::getline(in, meta);
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(meta.rfind("# tool_version=", 0), 0u);
  EXPECT_EQ(header,
            "i,status,tau,plan,parts,pool_size,sia,total_s,compute_s,memory_s,"
            "padding_s,waves,padding_fraction,occupancy,fallback,error");
  auto columns = [](const std::string& line) {
    std::size_t n = 1;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == ',' && !quoted) ++n;
    }
    return n;
  };
  EXPECT_EQ(columns(row1), 16u);
  EXPECT_EQ(columns(row2), 16u);
  EXPECT_EQ(row1.rfind("53,ok,j,", 0), 0u);
  EXPECT_EQ(row2.rfind("54,empty_result,", 0), 0u);
}

// Trip counts per axis multiply back to the covered extent of each part.
TEST(LoopNestTest, TripCountsCoverThePlan) {
  const WorkloadInstance inst = dense(53, 16, 64);
  const ProgramPlan p{{{dense_kernel(1, 8, 7, 16, 8), 3},
                       {dense_kernel(1, 8, 8, 16, 8), 4}},
                      {},
                      {}};
  const std::string text = emit_loop_nest(p, inst, 0);
  const std::regex loop(R"(for (\w+)\.(\d) in range\((\d+), (\d+), (\d+)\):)");
  std::vector<std::map<std::string, std::int64_t>> trips(1);
  std::istringstream in(text);
  std::string line;
  int stages = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# part 2", 0) == 0) trips.emplace_back();
    if (line.find("stage ") != std::string::npos) ++stages;
    std::smatch m;
    if (!std::regex_search(line, m, loop)) continue;
    const std::int64_t b = std::stoll(m[3]), e = std::stoll(m[4]),
                       s = std::stoll(m[5]);
    auto& t = trips.back()[m[1]];
    if (t == 0) t = 1;
    t *= (e - b + s - 1) / s;
  }
  ASSERT_EQ(trips.size(), 2u);
  EXPECT_EQ(trips[0]["i"], 21);
  EXPECT_EQ(trips[1]["i"], 32);
  EXPECT_EQ(trips[0]["j"], 16);
  EXPECT_EQ(trips[0]["k"], 64);
  EXPECT_EQ(trips[1]["k"], 64);
  EXPECT_EQ(stages, 4);
  EXPECT_NE(text.find("for i.0 in range(21, 53, 8):"), std::string::npos);
  EXPECT_NE(text.find("C[i, j] += A[i, k] * B[k, j]"), std::string::npos);
  EXPECT_NE(text.find("# i offset 21, covers [21, 53)"), std::string::npos);
}

TEST(ParseTest, Bindings) {
  EXPECT_EQ(parse_binding("i=53"), (std::pair<std::string, std::int64_t>{"i", 53}));
  EXPECT_THROW(parse_binding("i53"), Error);
  EXPECT_THROW(parse_binding("i=x"), Error);
  EXPECT_THROW(parse_binding("=5"), Error);
}

TEST(ParseTest, Ranges) {
  const AxisRange r = parse_range("i=1..128:4");
  EXPECT_EQ(r.axis, "i");
  EXPECT_EQ(r.lo, 1);
  EXPECT_EQ(r.hi, 128);
  EXPECT_EQ(r.step, 4);
  EXPECT_EQ(parse_range("t=3..9").step, 1);
  EXPECT_THROW(parse_range("i=5"), Error);
  EXPECT_THROW(parse_range("i=1..x"), Error);
}

TEST(ParseTest, Coeffs) {
  const SiaCoeffs c = parse_coeffs("1,2.5,0");
  EXPECT_EQ(c.c0, 1);
  EXPECT_EQ(c.c1, 2.5);
  EXPECT_EQ(c.c2, 0);
  EXPECT_THROW(parse_coeffs("1,2"), Error);
  EXPECT_THROW(parse_coeffs("-1,1,1"), Error);
  EXPECT_THROW(parse_coeffs("0,0,0"), Error);
}

RunConfig sample_config() {
  RunConfig c;
  c.hardware = source_path("configs/hardware/v100_like.json");
  c.workload = source_path("configs/workloads/dense.json");
  return c;
}

TEST(CommandTest, TuneIsIdenticalAcrossJobCounts) {
  RunConfig c = sample_config();
  c.ranges = {{"i", 1, 4, 1}};
  std::ostringstream a, b, err;
  EXPECT_EQ(cmd_tune(c, a, err), 0);
  c.jobs = 2;
  EXPECT_EQ(cmd_tune(c, b, err), 0);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

TEST(CommandTest, PlanFromCacheMatchesOnTheFlyPlan) {
  const auto dir = std::filesystem::temp_directory_path() / "mixtile_io_test";
  std::filesystem::create_directories(dir);
  RunConfig c = sample_config();
  c.ranges = {{"i", 52, 54, 1}};
  c.cache = dir / "cands.json";
  std::filesystem::remove(c.cache);
  std::ostringstream sink, err;
  ASSERT_EQ(cmd_tune(c, sink, err), 0);

  c.shape = {{"i", 53}};
  std::ostringstream cached, fresh;
  ASSERT_EQ(cmd_plan(c, cached, err), 0);
  c.cache.clear();
  ASSERT_EQ(cmd_plan(c, fresh, err), 0);
  EXPECT_EQ(cached.str(), fresh.str());

  c.emit = "loopnest";
  std::ostringstream nest;
  ASSERT_EQ(cmd_plan(c, nest, err), 0);
  EXPECT_NE(nest.str().find("# part 1"), std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST(CommandTest, EmitLoopNestFromPlanFile) {
  const auto dir = std::filesystem::temp_directory_path() / "mixtile_io_emit";
  std::filesystem::create_directories(dir);
  RunConfig c = sample_config();
  c.shape = {{"i", 53}};
  c.out = dir / "plan.json";
  std::ostringstream sink, err;
  ASSERT_EQ(cmd_plan(c, sink, err), 0);

  c.plan = c.out;
  c.out.clear();
  c.emit = "loopnest";
  std::ostringstream from_file, direct;
  ASSERT_EQ(cmd_emit_loopnest(c, from_file, err), 0);
  c.plan.clear();
  ASSERT_EQ(cmd_plan(c, direct, err), 0);
  EXPECT_EQ(from_file.str(), direct.str());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace mixtile
