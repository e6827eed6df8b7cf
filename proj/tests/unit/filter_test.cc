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

#include "mixtile/filter.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mixtile/error.h"
#include "mixtile/oracle.h"
#include "test_util.h"

namespace mixtile {
namespace {

using testing::dense;
using testing::dense_kernel;
using testing::v100_like;

Candidate synthetic(double pad, double occ, bool saturated, bool intensive,
                    std::int64_t regs = 1024, std::int64_t sj = 64) {
  Candidate c;
  c.kernel = dense_kernel(1, 8, 8, sj, 8);
  c.metrics.pad = pad;
  c.metrics.occ = occ;
  c.metrics.saturated = saturated;
  c.metrics.compute_intensive = intensive;
  c.metrics.cmr = intensive ? 2.0 : 0.5;
  c.metrics.regs_in_block = regs;
  c.metrics.blocks_needed = 160;
  c.metrics.smem_bytes = 1024;
  c.metrics.mem_latency_s = 1e-6;
  attach(c.kernel, c.metrics);
  return c;
}

bool contains(const std::vector<Candidate>& set, const UKernel& k) {
  return std::any_of(set.begin(), set.end(), [&](const Candidate& c) {
    return same_tiles(c.kernel, k);
  });
}

TEST(SweepTest, DefaultGrid) {
  const SweepGrid g = SweepGrid::from(SweepParams{});
  EXPECT_EQ(g.steps(), 46);
  EXPECT_EQ(g.eps(0), 0.50);
  EXPECT_EQ(g.lam(0), 0.95);
  EXPECT_EQ(g.eps(45), 0.95);
  EXPECT_EQ(g.lam(45), 0.905);
}

TEST(SweepTest, RetentionStepExamples) {
  const SweepParams s;
  EXPECT_EQ(sweep_retention_step(0.60, 0.941, s), 10);
  EXPECT_EQ(sweep_retention_step(1.0, 1.0, s), 1);
  EXPECT_EQ(sweep_retention_step(0.50, 0.95, s), 1);
  EXPECT_EQ(sweep_retention_step(0.49, 1.0, s), std::nullopt);
  EXPECT_EQ(sweep_retention_step(1.0, 0.90, s), std::nullopt);
  EXPECT_EQ(sweep_retention_step(1.0, 0.905, s), 46);
  // Occupancy reached only after the padding threshold passed.
  EXPECT_EQ(sweep_retention_step(0.55, 0.93, s), std::nullopt);
}

TEST(SweepTest, PadBelowStartIsNeverRetained) {
  const SweepParams s;
  for (int i = 0; i <= 1000; ++i) {
    EXPECT_FALSE(sweep_retention_step(0.49, i / 1000.0, s)) << i;
  }
}

TEST(SweepTest, ValidateNamesField) {
  SweepParams s;
  s.eps_step = 0;
  try {
    validate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kValidation);
    EXPECT_EQ(e.field(), "eps_step");
  }
  s = SweepParams{};
  s.lam_min = 0.99;
  EXPECT_THROW(validate(s), Error);
  s = SweepParams{};
  s.eps_min = 0.96;
  EXPECT_THROW(validate(s), Error);
}

TEST(SweepTest, WidenShiftsThresholdsDown) {
  const SweepParams w = widen(SweepParams{}, 3);
  EXPECT_DOUBLE_EQ(w.eps_min, 0.47);
  EXPECT_DOUBLE_EQ(w.lam_max, 0.92);
  EXPECT_DOUBLE_EQ(w.lam_min, 0.87);
  EXPECT_EQ(w.eps_max, 0.95);
  EXPECT_EQ(widen(SweepParams{}, 0), SweepParams{});
}

// Closed-form retention against the point-by-point walk.
TEST(SweepPropertyTest, RetentionMatchesWalk) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pct(1, 99);
  for (int trial = 0; trial < 300; ++trial) {
    SweepParams s;
    s.eps_min = pct(rng) / 100.0;
    s.eps_max = std::min(1.0, s.eps_min + pct(rng) / 200.0);
    s.lam_max = pct(rng) / 100.0;
    s.lam_min = std::max(0.0, s.lam_max - pct(rng) / 300.0);
    s.eps_step = std::uniform_int_distribution<int>(1, 50)(rng) / 1000.0;
    s.lam_step = std::uniform_int_distribution<int>(1, 50)(rng) / 10000.0;
    if (s.eps_min >= s.eps_max || s.lam_min >= s.lam_max) continue;
    for (int p = 0; p < 50; ++p) {
      double pad = unit(rng), occ = unit(rng);
      if (p % 5 == 0) {
        // Land exactly on grid points.
        const SweepGrid g = SweepGrid::from(s);
        const auto n = std::max<std::int64_t>(g.steps(), 1);
        pad = g.eps(rng() % n);
        occ = g.lam(rng() % n);
      }
      EXPECT_EQ(sweep_retention_step(pad, occ, s),
                oracle::walk_sweep(pad, occ, s))
          << pad << ' ' << occ;
    }
  }
}

// Larger pad or occ never delays retention.
TEST(SweepPropertyTest, RetentionIsMonotone) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.4, 1.0);
  const SweepParams s;
  for (int trial = 0; trial < 2000; ++trial) {
    const double pad = unit(rng), occ = unit(rng);
    const auto base = sweep_retention_step(pad, occ, s);
    if (!base) continue;
    const auto more = sweep_retention_step(std::min(1.0, pad + 0.05),
                                           std::min(1.0, occ + 0.01), s);
    ASSERT_TRUE(more);
    EXPECT_LE(*more, *base);
  }
}

TEST(FilterTest, RegisterBound) {
  const HardwareDescriptor hw = v100_like();
  MetricBundle m;
  m.regs_in_block = 32768;
  m.blocks_needed = 400;
  EXPECT_TRUE(passes_register_bound(m, hw));
  m.regs_in_block = 32769;
  EXPECT_FALSE(passes_register_bound(m, hw));
  m.blocks_needed = 80;  // one block per core
  EXPECT_TRUE(passes_register_bound(m, hw));
}

TEST(FilterTest, StagesApplyTheirOwnCriterion) {
  const HardwareDescriptor hw = v100_like();
  std::vector<Candidate> align = {
      synthetic(1.0, 1.0, true, true),
      synthetic(0.3, 1.0, true, true),            // dropped by the sweep
      synthetic(1.0, 1.0, true, true, 1 << 20),   // dropped by registers
      synthetic(1.0, 1.0, false, true),           // not saturated
      synthetic(1.0, 1.0, true, false),           // not compute-intensive
  };
  Candidate overflow = synthetic(1.0, 1.0, true, true);
  overflow.metrics.smem_bytes = hw.smem_per_core_bytes + 1;
  align.push_back(overflow);

  const auto cross = cross_pick(align, hw, SweepParams{});
  EXPECT_EQ(cross.size(), 4u);
  const auto filtered = set_bound(cross, hw);
  EXPECT_EQ(filtered.size(), 3u);
  const auto final = multi_axis_filter(filtered);
  ASSERT_EQ(final.size(), 1u);
  EXPECT_TRUE(same_tiles(final[0].kernel, align[0].kernel));
}

TEST(FilterTest, FallbackDropsIntensityFirst) {
  const ShapeResult r = filter_chain({synthetic(1.0, 1.0, true, false)},
                                     dense(53), v100_like(), FilterParams{});
  EXPECT_EQ(r.fallback, std::vector<std::string>{kDropIntensity});
  EXPECT_EQ(r.final.size(), 1u);
}

TEST(FilterTest, FallbackThenDropsSaturation) {
  const ShapeResult r = filter_chain({synthetic(1.0, 1.0, false, false)},
                                     dense(53), v100_like(), FilterParams{});
  EXPECT_EQ(r.fallback,
            (std::vector<std::string>{kDropIntensity, kDropSaturation}));
  EXPECT_EQ(r.final.size(), 1u);
}

TEST(FilterTest, FallbackWidensSweepByMinimalRounds) {
  const ShapeResult r = filter_chain({synthetic(0.45, 1.0, true, true),
                                      synthetic(0.40, 1.0, true, true)},
                                     dense(53), v100_like(), FilterParams{});
  ASSERT_EQ(r.fallback.size(), 3u);
  EXPECT_EQ(r.fallback[2], std::string(kWidenSweep) + ":5");
  EXPECT_EQ(r.final.size(), 1u);
  EXPECT_DOUBLE_EQ(r.effective_sweep.eps_min, 0.45);
}

TEST(FilterTest, WideningIgnoresRegisterInfeasibleCandidates) {
  const ShapeResult r = filter_chain(
      {synthetic(0.45, 1.0, true, true, 1 << 20),
       synthetic(0.30, 1.0, true, true)},
      dense(53), v100_like(), FilterParams{});
  EXPECT_EQ(r.fallback.back(), std::string(kWidenSweep) + ":20");
  ASSERT_EQ(r.final.size(), 1u);
  EXPECT_EQ(r.final[0].metrics.pad, 0.30);
}

TEST(FilterTest, EmptyRegisterBoundIsReported) {
  try {
    filter_chain({synthetic(1.0, 1.0, true, true, 1 << 20)}, dense(53),
                 v100_like(), FilterParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kEmptyResult);
    EXPECT_EQ(e.field(), "regs_per_core");
  }
}

// The widening round is the first round at which the walk retains.
TEST(FilterPropertyTest, WidenRoundMatchesWalk) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pad_d(0.05, 0.5), occ_d(0.3, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double pad = pad_d(rng), occ = occ_d(rng);
    const ShapeResult r = filter_chain({synthetic(pad, occ, true, true)},
                                       dense(53), v100_like(), FilterParams{});
    std::int64_t expect = 0;
    while (!oracle::walk_sweep(pad, occ, widen(SweepParams{}, expect))) {
      ++expect;
    }
    if (expect == 0) {
      EXPECT_TRUE(r.fallback.empty());
    } else {
      EXPECT_EQ(r.fallback.back(),
                std::string(kWidenSweep) + ":" + std::to_string(expect))
          << pad << ' ' << occ;
    }
  }
}

TEST(FilterTest, FinalCapKeepsDividingTilesThenBestScores) {
  // Main axis j = 2304: 64, 72 and 256 divide it.
  std::vector<Candidate> align;
  const std::int64_t tiles[] = {40, 64, 72, 80, 88, 256};
  double pad = 0.96;
  for (std::int64_t t : tiles) {
    align.push_back(synthetic(pad, 1.0, true, true, 1024, t));
    pad += 0.005;
  }
  FilterParams params;
  params.final_cap = 3;
  const ShapeResult r = filter_chain(align, dense(53), v100_like(), params);
  EXPECT_TRUE(r.capped);
  EXPECT_EQ(r.counts.final, 6u);
  ASSERT_EQ(r.final.size(), 3u);
  // Dividing: 64, 72, 256. Non-dividing 88 scores highest among the rest
  // but loses to every dividing tile.
  EXPECT_EQ(r.final[0].kernel.smem_tile[1], 64);
  EXPECT_EQ(r.final[1].kernel.smem_tile[1], 72);
  EXPECT_EQ(r.final[2].kernel.smem_tile[1], 256);

  params.final_cap = 1;
  const ShapeResult one = filter_chain(align, dense(53), v100_like(), params);
  ASSERT_EQ(one.final.size(), 1u);
  EXPECT_EQ(one.final[0].kernel.smem_tile[1], 256);
}

// final ⊆ K.Filter ⊆ K.Cross ⊆ K.Align on random shapes and descriptors,
// with every survivor meeting the thresholds recorded in its bundle.
TEST(FilterPropertyTest, ChainInclusion) {
  std::mt19937_64 rng(99);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  for (int trial = 0; trial < 12; ++trial) {
    const WorkloadInstance inst =
        dense(pick(1, 64), 8 * pick(1, 24), 8 * pick(1, 16));
    HardwareDescriptor hw = v100_like();
    hw.num_cores = pick(4, 100);
    hw.regs_per_core = 1024 * pick(8, 64);
    hw.smem_per_core_bytes = 1024 * pick(8, 96);
    FilterParams params;
    params.final_cap = 1 << 20;

    CandidateSet set;
    try {
      set = enumerate_ukernels(inst, hw);
    } catch (const Error&) {
      continue;
    }
    const auto align = evaluate_candidates(set.kernels, inst, hw);
    ShapeResult r;
    try {
      r = filter_chain(align, inst, hw, params);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kEmptyResult);
      continue;
    }
    const auto cross = cross_pick(align, hw, r.effective_sweep);
    const auto filtered = set_bound(cross, hw);
    EXPECT_EQ(r.counts.align, align.size());
    EXPECT_LE(r.counts.final, r.counts.filter);
    EXPECT_LE(r.counts.filter, r.counts.cross);
    EXPECT_LE(r.counts.cross, r.counts.align);
    EXPECT_EQ(r.counts.cross, cross.size());
    EXPECT_EQ(r.counts.filter, filtered.size());

    const bool drop_ci = !r.fallback.empty();
    const bool drop_sat = r.fallback.size() >= 2;
    for (const Candidate& c : r.final) {
      EXPECT_TRUE(contains(filtered, c.kernel));
      EXPECT_TRUE(contains(cross, c.kernel));
      EXPECT_TRUE(contains(align, c.kernel));
      EXPECT_TRUE(
          sweep_retention_step(c.metrics.pad, c.metrics.occ, r.effective_sweep));
      EXPECT_LE(c.metrics.smem_bytes, hw.smem_per_core_bytes);
      EXPECT_TRUE(passes_register_bound(c.metrics, hw));
      if (!drop_sat) {
        EXPECT_TRUE(c.metrics.saturated);
      }
      if (!drop_ci) {
        EXPECT_TRUE(c.metrics.compute_intensive);
      }
      EXPECT_EQ(c.metrics.pad, padding_metric(c.kernel, inst));
    }
  }
}

TEST(FilterTest, StreamingCompileMatchesMaterializedChain) {
  const HardwareDescriptor hw = v100_like();
  for (std::int64_t i : {1, 7, 53, 96}) {
    const WorkloadInstance inst = dense(i, 256, 128);
    const ShapeResult streamed = compile_shape(inst, hw, FilterParams{});
    const auto align = evaluate_candidates(
        enumerate_ukernels(inst, hw).kernels, inst, hw);
    const ShapeResult direct = filter_chain(align, inst, hw, FilterParams{});
    EXPECT_EQ(streamed.counts.align, direct.counts.align);
    EXPECT_EQ(streamed.counts.cross, direct.counts.cross);
    EXPECT_EQ(streamed.counts.filter, direct.counts.filter);
    EXPECT_EQ(streamed.counts.final, direct.counts.final);
    EXPECT_EQ(streamed.fallback, direct.fallback);
    ASSERT_EQ(streamed.final.size(), direct.final.size());
    for (std::size_t n = 0; n < direct.final.size(); ++n) {
      EXPECT_TRUE(same_tiles(streamed.final[n].kernel, direct.final[n].kernel));
      EXPECT_EQ(streamed.final[n].kernel.cached, direct.final[n].kernel.cached);
    }
  }
}

TEST(FilterTest, ExpandRanges) {
  const OperatorSpec spec = testing::dense_spec();
  const auto all = expand_ranges(spec, {});
  ASSERT_EQ(all.size(), 128u);
  EXPECT_EQ(all.front().at("i"), 1);
  EXPECT_EQ(all.back().at("i"), 128);
  const auto some = expand_ranges(spec, {{"i", 1, 10, 3}});
  ASSERT_EQ(some.size(), 4u);
  EXPECT_EQ(some[3].at("i"), 10);
  EXPECT_THROW(expand_ranges(spec, {{"j", 1, 2, 1}}), Error);
  EXPECT_THROW(expand_ranges(spec, {{"x", 1, 2, 1}}), Error);
  EXPECT_THROW(expand_ranges(spec, {{"i", 1, 129, 1}}), Error);
  EXPECT_THROW(expand_ranges(spec, {{"i", 5, 4, 1}}), Error);
  EXPECT_THROW(expand_ranges(spec, {{"i", 1, 4, 0}}), Error);
}

TEST(FilterTest, CompileStageIsOrderedAcrossJobCounts) {
  const OperatorSpec spec = testing::dense_spec(1, 128, 256, 128);
  const auto shapes = expand_ranges(spec, {{"i", 1, 40, 7}});
  const auto a = compile_stage(spec, v100_like(), FilterParams{}, shapes, 1);
  const auto b = compile_stage(spec, v100_like(), FilterParams{}, shapes, 3);
  ASSERT_EQ(a.size(), shapes.size());
  ASSERT_EQ(b.size(), shapes.size());
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    EXPECT_EQ(a[s].binding, shapes[s]);
    EXPECT_EQ(b[s].binding, shapes[s]);
    ASSERT_EQ(a[s].final.size(), b[s].final.size());
    for (std::size_t n = 0; n < a[s].final.size(); ++n) {
      EXPECT_TRUE(same_tiles(a[s].final[n].kernel, b[s].final[n].kernel));
    }
  }
}

}  // namespace
}  // namespace mixtile
