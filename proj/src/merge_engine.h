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

#ifndef MODL_SRC_MERGE_ENGINE_H_
#define MODL_SRC_MERGE_ENGINE_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "modl/coclustering.h"

namespace modl::internal {

// Cluster-merge search state for greedy agglomeration over both sides.
//
// Clusters live in fixed slots (the clusters of the starting model); a merge
// retires the higher slot. For every live pair the engine caches the
// pair-specific part of the merge delta; the part that depends only on the
// cluster counts (partition and cocluster priors) is added when candidates
// are compared. After a merge of (a, b) on one side, pairs involving a are
// re-evaluated and pairs on the other side are shifted by the change in
// their row-fusion gain, which is nonzero only where rows a or b had edges.
class MergeEngine {
 public:
  explicit MergeEngine(const Coclustering& model);

  struct Candidate {
    bool valid = false;
    Side side = Side::kSource;
    int32_t a = 0;  // slot, a < b
    int32_t b = 0;
    double cached_delta = std::numeric_limits<double>::infinity();
  };

  // Minimum cached delta over both sides; ties resolve to the smallest
  // (side, a, b) with source before target.
  Candidate Best() const;

  // Delta of fusing slots a and b, evaluated from the current counts.
  double ExactDelta(Side side, int32_t a, int32_t b) const;

  // Fuses slot b into slot a (a < b). Returns the exact delta.
  double Apply(Side side, int32_t a, int32_t b);

  int32_t cluster_count(Side side) const { return live_[SideIndex(side)]; }
  // Rank of a live slot among live slots: its id in the compacted model.
  int32_t DenseId(Side side, int32_t slot) const;
  // Running criterion: starting total plus exact deltas applied so far.
  double total() const { return total_; }

  // Vertex assignment with compacted cluster ids.
  std::vector<int32_t> Assignment(Side side) const;
  Coclustering ToModel() const;

 private:
  struct SideState {
    int32_t capacity = 0;
    std::vector<char> alive;
    std::vector<int64_t> sizes;
    std::vector<int64_t> margins;
    std::vector<int32_t> parent;       // slot a retired slot was fused into
    std::vector<int64_t> lines;        // capacity x other capacity counts
    std::vector<double> pair;          // capacity x capacity, upper triangle
  };

  const int64_t* Line(int s, int32_t slot) const {
    return sides_[s].lines.data() + static_cast<size_t>(slot) * sides_[1 - s].capacity;
  }
  double& Pair(int s, int32_t a, int32_t b) {
    return sides_[s].pair[static_cast<size_t>(a) * sides_[s].capacity + b];
  }
  double Lf(int64_t n) const { return lf_[n]; }
  double DegreePrior(int64_t margin, int64_t size) const {
    return Lf(margin + size - 1) - Lf(size - 1) - Lf(margin);
  }
  double ClusterPart(int s, int32_t a, int32_t b) const;
  double PairPart(int s, int32_t a, int32_t b) const;
  double SideConstant(int s) const;
  void RefreshPairsOf(int s, int32_t a);
  void ShiftOtherSide(int s, int32_t a, int32_t b);

  Coclustering origin_;
  std::shared_ptr<const Combinatorics::Table> lf_table_;
  const double* lf_ = nullptr;
  SideState sides_[2];
  int32_t live_[2] = {0, 0};
  double total_ = 0.0;
  std::vector<int32_t> scratch_index_;
  std::vector<int64_t> scratch_a_, scratch_b_;
  std::vector<double> scratch_out_;
};

}  // namespace modl::internal

#endif  // MODL_SRC_MERGE_ENGINE_H_
