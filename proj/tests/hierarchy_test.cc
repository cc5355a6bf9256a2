// Copyright 2026 The modl-cocluster Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modl/hierarchy.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "fixtures.h"
#include "modl/error.h"
#include "modl/optimizer.h"
#include "modl/synthgen.h"

namespace modl {
namespace {

Coclustering FittedBlockmodel(uint64_t seed) {
  const GeneratedGraph g = GenBlockmodel(DefaultBlockMatrix(), DefaultClusterSizes(), 2000, seed);
  FitConfig config;
  config.rounds = 3;
  config.seed = seed;
  return VnsFit(g.sample, config).best_model;
}

Coclustering FineModel(uint64_t seed) {
  const GeneratedGraph g = GenBlockDiagonal(60, 6, 0.2, 3000, seed);
  return InitialSolution(g.sample, 12, seed, InitialLayout::kBalanced);
}

TEST(DendrogramTest, ReplayReproducesCriteria) {
  const Coclustering start = FineModel(1);
  const Dendrogram d = BuildDendrogram(start);
  ASSERT_EQ(d.merges.size(), static_cast<size_t>(start.cluster_count(Side::kSource) - 1 +
                                                 start.cluster_count(Side::kTarget) - 1));
  Coclustering model = start;
  for (const MergeRecord& r : d.merges) {
    const double before = model.criterion().total;
    model.Merge(r.side, r.a, r.b);
    EXPECT_NEAR(model.criterion().total, r.criterion, 1e-9);
    EXPECT_NEAR(model.Recompute().total - before, r.delta, 1e-9);
    EXPECT_TRUE(std::isfinite(r.criterion));
    EXPECT_EQ(model.cluster_count(Side::kSource), r.source_clusters);
    EXPECT_EQ(model.cluster_count(Side::kTarget), r.target_clusters);
  }
  EXPECT_NEAR(d.merges.back().criterion, Coclustering::Null(start.sample_ptr()).criterion().total,
              1e-9);
}

TEST(DendrogramTest, EachStepIsMinimumDelta) {
  const Coclustering start = FineModel(2);
  const Dendrogram d = BuildDendrogram(start);
  Coclustering model = start;
  for (const MergeRecord& r : d.merges) {
    double best = std::numeric_limits<double>::infinity();
    for (Side side : {Side::kSource, Side::kTarget}) {
      for (int32_t a = 0; a < model.cluster_count(side); ++a) {
        for (int32_t b = a + 1; b < model.cluster_count(side); ++b) {
          best = std::min(best, model.MergeDelta(side, a, b));
        }
      }
    }
    EXPECT_NEAR(r.delta, best, 1e-8);
    model.Merge(r.side, r.a, r.b);
  }
}

TEST(DendrogramTest, FittedModelStartsNonNegative) {
  const Coclustering fitted = FittedBlockmodel(3);
  ASSERT_EQ(fitted.cluster_count(Side::kSource), 3);
  const Dendrogram d = BuildDendrogram(fitted);
  ASSERT_FALSE(d.merges.empty());
  EXPECT_GE(d.merges.front().delta, -kImprovementTolerance);
  EXPECT_NEAR(Replay(d, d.merges.size()).criterion().total,
              Coclustering::Null(fitted.sample_ptr()).criterion().total, 1e-9);
}

TEST(DendrogramTest, NullModelHasNoMerges) {
  const Dendrogram d = BuildDendrogram(Coclustering::Null(testing::Multigraph()));
  EXPECT_TRUE(d.merges.empty());
}

TEST(CutTest, ExtremesAndErrors) {
  const Coclustering start = FineModel(4);
  const Dendrogram d = BuildDendrogram(start);
  const CutResult root = Cut(d, 1, 1);
  EXPECT_EQ(root.model.cluster_count(Side::kSource), 1);
  EXPECT_EQ(root.model.cluster_count(Side::kTarget), 1);
  EXPECT_TRUE(root.exact);
  const CutResult same = Cut(d, 12, 12);
  EXPECT_EQ(same.steps, 0u);
  EXPECT_EQ(same.model.assignment(Side::kSource), start.assignment(Side::kSource));
  EXPECT_THROW(Cut(d, 0, 1), InputError);
  EXPECT_THROW(Cut(d, 13, 1), InputError);
}

TEST(CutTest, ReportsReachedCounts) {
  const Coclustering start = FineModel(5);
  const Dendrogram d = BuildDendrogram(start);
  for (int32_t ks = 1; ks <= 12; ++ks) {
    for (int32_t kt = 1; kt <= 12; ++kt) {
      const CutResult cut = Cut(d, ks, kt);
      EXPECT_LE(cut.source_clusters, ks);
      EXPECT_LE(cut.target_clusters, kt);
      EXPECT_EQ(cut.model.cluster_count(Side::kSource), cut.source_clusters);
      EXPECT_EQ(cut.exact, cut.source_clusters == ks && cut.target_clusters == kt);
      if (cut.steps > 0) {
        const MergeRecord& prev = cut.steps >= 2 ? d.merges[cut.steps - 2] : MergeRecord{};
        const int32_t pks = cut.steps >= 2 ? prev.source_clusters : 12;
        const int32_t pkt = cut.steps >= 2 ? prev.target_clusters : 12;
        EXPECT_TRUE(pks > ks || pkt > kt);
      }
    }
  }
}

TEST(CutTest, CoarserCutsNestInFinerOnes) {
  const Coclustering start = FineModel(6);
  const Dendrogram d = BuildDendrogram(start);
  const CutResult fine = Cut(d, 5, 5);
  const CutResult coarse = Cut(d, 3, 3);
  for (Side side : {Side::kSource, Side::kTarget}) {
    const auto& f = fine.model.assignment(side);
    const auto& c = coarse.model.assignment(side);
    std::vector<int32_t> parent(fine.model.cluster_count(side), -1);
    for (size_t v = 0; v < f.size(); ++v) {
      if (parent[f[v]] < 0) parent[f[v]] = c[v];
      EXPECT_EQ(parent[f[v]], c[v]);
    }
  }
}

TEST(CoclusterTableTest, PercentagesSumToHundred) {
  const Coclustering fitted = FittedBlockmodel(7);
  const CoclusterTable t = MakeCoclusterTable(fitted);
  EXPECT_EQ(t.rows, 3);
  EXPECT_NEAR(std::accumulate(t.percent.begin(), t.percent.end(), 0.0), 100.0, 1e-9);
  EXPECT_EQ(std::accumulate(t.counts.begin(), t.counts.end(), int64_t{0}), 2000);
  const CoclusterTable one = MakeCoclusterTable(Coclustering::Null(fitted.sample_ptr()));
  EXPECT_EQ(one.percent, std::vector<double>{100.0});
}

}  // namespace
}  // namespace modl
