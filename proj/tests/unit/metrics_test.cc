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

#include "mixtile/metrics.h"

#include <gtest/gtest.h>

#include <random>

#include "mixtile/error.h"
#include "test_util.h"

namespace mixtile {
namespace {

using testing::dense;
using testing::dense_kernel;
using testing::v100_like;

TEST(MetricsTest, PaddingMetric) {
  EXPECT_EQ(padding_metric(dense_kernel(1, 8, 8, 64, 8), dense(64)), 1.0);
  EXPECT_DOUBLE_EQ(padding_metric(dense_kernel(1, 8, 8, 64, 8), dense(53)),
                   53.0 / 56.0);
  // Halving a dividing tile keeps the metric.
  EXPECT_EQ(padding_metric(dense_kernel(1, 8, 4, 64, 8), dense(64)), 1.0);
}

TEST(MetricsTest, OccupancyMetric) {
  EXPECT_EQ(occupancy_metric(80, 80), 1.0);
  EXPECT_EQ(occupancy_metric(160, 80), 1.0);
  EXPECT_EQ(occupancy_metric(81, 80), 0.50625);
  EXPECT_EQ(occupancy_metric(40, 80), 0.5);
  for (std::int64_t n = 1; n <= 400; ++n) {
    EXPECT_EQ(occupancy_metric(n, 80) == 1.0, n % 80 == 0) << n;
  }
}

TEST(MetricsTest, RegsInBlock) {
  const OperatorSpec spec = testing::dense_spec();
  // reg (4, 4) with an 8 x 8 thread grid.
  EXPECT_EQ(regs_in_block(dense_kernel(4, 4, 32, 32, 8), spec, 24), 2048);
  EXPECT_EQ(regs_in_block(dense_kernel(1, 1, 1, 1, 8), spec, 0), 2);
  EXPECT_EQ(threads_per_block(dense_kernel(4, 4, 32, 32, 8), spec), 64);
}

TEST(MetricsTest, BlockBoundAndRegisterCheck) {
  const HardwareDescriptor hw = v100_like();
  EXPECT_EQ(block_bound(80, hw), 1);
  EXPECT_EQ(block_bound(400, hw), 2);
  EXPECT_EQ(block_bound(1, hw), 1);
  EXPECT_TRUE(within_register_bound(32768, 2, hw));
  EXPECT_FALSE(within_register_bound(32769, 2, hw));
  EXPECT_TRUE(within_register_bound(65536, 1, hw));
}

TEST(MetricsTest, SpaceSaturation) {
  const HardwareDescriptor hw = v100_like();
  EXPECT_TRUE(space_saturation(160, hw));
  EXPECT_FALSE(space_saturation(159, hw));
  const UKernel k = dense_kernel(4, 4, 32, 64, 8);
  EXPECT_EQ(blocks_needed(k, dense(128)), 4 * 36);
  EXPECT_FALSE(space_saturation(k, dense(128), hw));
}

TEST(MetricsTest, MemoryLatencyArms) {
  HardwareDescriptor hw = v100_like();
  DataVolumes v{1000, 800, 0, 0};
  EXPECT_DOUBLE_EQ(memory_latency(v, hw), 1800.0 / 900e9);
  const double before = memory_latency(dense_kernel(2, 4, 16, 32, 8),
                                       dense(53), hw);
  hw.global_bw_bytes_per_s *= 2;
  hw.shared_bw_bytes_per_s *= 2;
  EXPECT_DOUBLE_EQ(memory_latency(dense_kernel(2, 4, 16, 32, 8), dense(53), hw),
                   before / 2);
}

TEST(MetricsTest, MemoryLatencyEqualBandwidthsTakesLargerSum) {
  HardwareDescriptor hw = v100_like();
  hw.shared_bw_bytes_per_s = hw.global_bw_bytes_per_s;
  const WorkloadInstance inst = dense(128, 128, 128);
  const UKernel k = dense_kernel(4, 4, 32, 32, 16);
  const DataVolumes v = data_volumes(inst, k.reg_tile, k.smem_tile);
  const double bw = static_cast<double>(hw.global_bw_bytes_per_s);
  const double expected =
      std::max(static_cast<double>(v.data_r + v.data_w),
               static_cast<double>(v.data_trans_r + v.data_trans_w)) /
      bw;
  EXPECT_DOUBLE_EQ(memory_latency(k, inst, hw), expected);
}

TEST(MetricsTest, ComputeIntensity) {
  HardwareDescriptor hw = v100_like();
  const UKernel k = dense_kernel(2, 4, 16, 32, 8);
  const WorkloadInstance inst = dense(53);
  const IntensityVerdict base = compute_intensity(k, inst, hw, 1.0);
  const double compute_s = static_cast<double>(flops(inst)) / 15.7e12;
  EXPECT_DOUBLE_EQ(base.cmr, compute_s / memory_latency(k, inst, hw));
  // Compute time equal to memory time gives ratio 1 exactly at the watershed.
  EXPECT_TRUE(compute_intensity(k, inst, hw, base.cmr).compute_intensive);
  hw.peak_flops /= 2;
  EXPECT_DOUBLE_EQ(compute_intensity(k, inst, hw, 1.0).cmr, 2 * base.cmr);
}

TEST(MetricsTest, LargerShapeIsMoreComputeIntensive) {
  const HardwareDescriptor hw = v100_like();
  const UKernel k = dense_kernel(1, 8, 8, 64, 32);
  EXPECT_GT(compute_intensity(k, dense(128), hw, 1.0).cmr,
            compute_intensity(k, dense(5), hw, 1.0).cmr);
}

TEST(MetricsTest, EvaluateFillsBundleAndCache) {
  const HardwareDescriptor hw = v100_like();
  UKernel k = dense_kernel(2, 8, 16, 64, 32);
  const WorkloadInstance inst = dense(53);
  const MetricBundle m = evaluate(k, inst, hw);
  EXPECT_EQ(m.blocks_needed, 4 * 36);
  EXPECT_DOUBLE_EQ(m.pad, 53.0 / 64.0);
  EXPECT_DOUBLE_EQ(m.occ, 144.0 / 160.0);
  EXPECT_EQ(m.regs_in_block, (2 + 8 + 24) * 8 * 8);
  EXPECT_FALSE(m.saturated);
  EXPECT_EQ(m.smem_bytes, (16 * 32 + 32 * 64) * 4);
  attach(k, m);
  ASSERT_TRUE(k.cached);
  EXPECT_EQ(k.cached->padding_threshold, m.pad);
  EXPECT_EQ(k.cached->usage_eff, m.occ);
  EXPECT_EQ(k.cached->compute_eff, m.cmr);
}

TEST(MetricsPropertyTest, RangesOverRandomTilings) {
  std::mt19937_64 rng(5);
  auto pick = [&](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  const HardwareDescriptor hw = v100_like();
  for (int trial = 0; trial < 500; ++trial) {
    const WorkloadInstance inst = dense(pick(1, 128), pick(1, 512), pick(1, 512));
    const std::int64_t ri = pick(1, 8), rj = pick(1, 8);
    const UKernel k =
        dense_kernel(ri, rj, ri * pick(1, 8), rj * pick(1, 8), pick(1, 64));
    const MetricBundle m = evaluate(k, inst, hw);
    EXPECT_GT(m.pad, 0);
    EXPECT_LE(m.pad, 1);
    EXPECT_GT(m.occ, 0);
    EXPECT_LE(m.occ, 1);
    EXPECT_GE(m.cmr, 0);
    EXPECT_GT(m.mem_latency_s, 0);
    EXPECT_GE(m.blocks_needed, 1);
    const bool divides = inst.extent(0) % k.smem_tile[0] == 0 &&
                         inst.extent(1) % k.smem_tile[1] == 0;
    EXPECT_EQ(m.pad == 1.0, divides);
  }
}

}  // namespace
}  // namespace mixtile
