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

#ifndef MODL_HIERARCHY_H_
#define MODL_HIERARCHY_H_

#include <cstdint>
#include <vector>

#include "modl/coclustering.h"

namespace modl {

struct MergeRecord {
  Side side = Side::kSource;
  // Cluster ids in the model state before the merge, a < b; the fused
  // cluster keeps id a.
  int32_t a = 0;
  int32_t b = 0;
  double delta = 0.0;  // c(after) - c(before)
  double criterion = 0.0;
  int32_t source_clusters = 0;  // after the merge
  int32_t target_clusters = 0;
};

struct Dendrogram {
  Coclustering initial;
  std::vector<MergeRecord> merges;  // down to one cluster per side
};

// Repeatedly applies the merge of least criterion increase over both sides
// until k_S = k_T = 1. No vertex moves are made between merges.
Dendrogram BuildDendrogram(const Coclustering& model);

// The initial model after the first `steps` merges.
Coclustering Replay(const Dendrogram& dendrogram, size_t steps);

struct CutResult {
  Coclustering model;
  size_t steps = 0;
  int32_t source_clusters = 0;
  int32_t target_clusters = 0;
  bool exact = false;  // both requested counts were hit
};

// Earliest state of the merge sequence with at most the requested number
// of clusters on each side. Throws InputError unless
// 1 <= target <= initial count on both sides.
CutResult Cut(const Dendrogram& dendrogram, int32_t source_clusters, int32_t target_clusters);

// Edge counts per cocluster with their share of all edges, in percent.
struct CoclusterTable {
  int32_t rows = 0;
  int32_t cols = 0;
  std::vector<int64_t> counts;  // row-major
  std::vector<double> percent;
  std::vector<int32_t> row_sizes;
  std::vector<int32_t> col_sizes;
};
CoclusterTable MakeCoclusterTable(const Coclustering& model);

}  // namespace modl

#endif  // MODL_HIERARCHY_H_
