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

#include "merge_engine.h"

#include <algorithm>

#include "modl/kernels.h"

namespace modl::internal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

MergeEngine::MergeEngine(const Coclustering& model)
    : origin_(model), total_(model.criterion().total) {
  const MultigraphSample& g = model.sample();
  lf_table_ = model.combinatorics()->LogFactorialTable(
      g.edge_count() + std::max(g.source_count(), g.target_count()) + 2);
  lf_ = lf_table_->data();

  const int32_t ks = model.cluster_count(Side::kSource);
  const int32_t kt = model.cluster_count(Side::kTarget);
  for (int s = 0; s < 2; ++s) {
    SideState& st = sides_[s];
    const Side side = static_cast<Side>(s);
    st.capacity = s == 0 ? ks : kt;
    st.alive.assign(st.capacity, 1);
    st.sizes.resize(st.capacity);
    st.margins.resize(st.capacity);
    st.parent.resize(st.capacity);
    for (int32_t c = 0; c < st.capacity; ++c) {
      st.sizes[c] = model.cluster_size(side, c);
      st.margins[c] = model.margin(side, c);
      st.parent[c] = c;
    }
    live_[s] = st.capacity;
  }
  sides_[0].lines = model.cells();
  sides_[1].lines.resize(static_cast<size_t>(ks) * kt);
  for (int32_t i = 0; i < ks; ++i) {
    for (int32_t j = 0; j < kt; ++j) {
      sides_[1].lines[static_cast<size_t>(j) * ks + i] = model.cell(i, j);
    }
  }
  for (int s = 0; s < 2; ++s) {
    SideState& st = sides_[s];
    st.pair.assign(static_cast<size_t>(st.capacity) * st.capacity, kInf);
    for (int32_t a = 0; a < st.capacity; ++a) {
      for (int32_t b = a + 1; b < st.capacity; ++b) Pair(s, a, b) = PairPart(s, a, b);
    }
  }
}

double MergeEngine::ClusterPart(int s, int32_t a, int32_t b) const {
  const SideState& st = sides_[s];
  const int64_t ma = st.margins[a], mb = st.margins[b];
  const int64_t na = st.sizes[a], nb = st.sizes[b];
  return DegreePrior(ma + mb, na + nb) - DegreePrior(ma, na) - DegreePrior(mb, nb) +
         Lf(ma + mb) - Lf(ma) - Lf(mb);
}

double MergeEngine::PairPart(int s, int32_t a, int32_t b) const {
  const double gain = kernels::Active().fusion_gain(
      Line(s, a), Line(s, b), sides_[1 - s].capacity, lf_);
  return ClusterPart(s, a, b) - gain;
}

double MergeEngine::SideConstant(int s) const {
  const Side side = static_cast<Side>(s);
  Combinatorics& comb = *origin_.combinatorics();
  const MultigraphSample& g = origin_.sample();
  const int64_t k = live_[s], ko = live_[1 - s];
  const int64_t m = g.edge_count();
  const int64_t n = g.vertex_count(side);
  return comb.LogPartitionCount(n, k - 1) - comb.LogPartitionCount(n, k) +
         comb.LogBinomial(m + (k - 1) * ko - 1, (k - 1) * ko - 1) -
         comb.LogBinomial(m + k * ko - 1, k * ko - 1);
}

MergeEngine::Candidate MergeEngine::Best() const {
  const kernels::KernelSet& kern = kernels::Active();
  Candidate best;
  for (int s = 0; s < 2; ++s) {
    if (live_[s] < 2) continue;
    const SideState& st = sides_[s];
    double side_best = kInf;
    int32_t best_a = -1, best_b = -1;
    for (int32_t a = 0; a + 1 < st.capacity; ++a) {
      if (!st.alive[a]) continue;
      const double* row = st.pair.data() + static_cast<size_t>(a) * st.capacity;
      const size_t off = kern.argmin(row + a + 1, st.capacity - a - 1);
      const double v = row[a + 1 + off];
      if (v < side_best) {
        side_best = v;
        best_a = a;
        best_b = static_cast<int32_t>(a + 1 + off);
      }
    }
    if (best_a < 0) continue;
    const double delta = side_best + SideConstant(s);
    if (!best.valid || delta < best.cached_delta) {
      best = {true, static_cast<Side>(s), best_a, best_b, delta};
    }
  }
  return best;
}

double MergeEngine::ExactDelta(Side side, int32_t a, int32_t b) const {
  const int s = SideIndex(side);
  return PairPart(s, a, b) + SideConstant(s);
}

void MergeEngine::ShiftOtherSide(int s, int32_t a, int32_t b) {
  const int o = 1 - s;
  const int32_t width = sides_[o].capacity;
  const int64_t* la = Line(s, a);
  const int64_t* lb = Line(s, b);
  scratch_index_.clear();
  scratch_a_.clear();
  scratch_b_.clear();
  for (int32_t c = 0; c < width; ++c) {
    if (la[c] != 0 || lb[c] != 0) {
      scratch_index_.push_back(c);
      scratch_a_.push_back(la[c]);
      scratch_b_.push_back(lb[c]);
    }
  }
  const size_t n = scratch_index_.size();
  scratch_out_.resize(n);
  const kernels::KernelSet& kern = kernels::Active();
  for (size_t p = 0; p + 1 < n; ++p) {
    const size_t rest = n - p - 1;
    kern.pair_gain_shift(scratch_a_[p], scratch_b_[p], scratch_a_.data() + p + 1,
                         scratch_b_.data() + p + 1, rest, lf_, scratch_out_.data());
    double* row = sides_[o].pair.data() +
                  static_cast<size_t>(scratch_index_[p]) * sides_[o].capacity;
    for (size_t q = 0; q < rest; ++q) row[scratch_index_[p + 1 + q]] -= scratch_out_[q];
  }
}

void MergeEngine::RefreshPairsOf(int s, int32_t a) {
  const SideState& st = sides_[s];
  for (int32_t x = 0; x < st.capacity; ++x) {
    if (x == a || !st.alive[x]) continue;
    const int32_t lo = std::min(a, x), hi = std::max(a, x);
    Pair(s, lo, hi) = PairPart(s, lo, hi);
  }
}

double MergeEngine::Apply(Side side, int32_t a, int32_t b) {
  const int s = SideIndex(side);
  const int o = 1 - s;
  const double delta = ExactDelta(side, a, b);

  ShiftOtherSide(s, a, b);

  SideState& st = sides_[s];
  SideState& other = sides_[o];
  const int32_t width = other.capacity;
  int64_t* la = st.lines.data() + static_cast<size_t>(a) * width;
  int64_t* lb = st.lines.data() + static_cast<size_t>(b) * width;
  for (int32_t c = 0; c < width; ++c) {
    if (lb[c] == 0) continue;
    la[c] += lb[c];
    int64_t* col = other.lines.data() + static_cast<size_t>(c) * st.capacity;
    col[a] += col[b];
    col[b] = 0;
    lb[c] = 0;
  }
  st.sizes[a] += st.sizes[b];
  st.margins[a] += st.margins[b];
  st.sizes[b] = 0;
  st.margins[b] = 0;
  st.alive[b] = 0;
  st.parent[b] = a;
  for (int32_t x = 0; x < b; ++x) Pair(s, x, b) = kInf;
  for (int32_t y = b + 1; y < st.capacity; ++y) Pair(s, b, y) = kInf;
  --live_[s];
  RefreshPairsOf(s, a);
  total_ += delta;
  return delta;
}

int32_t MergeEngine::DenseId(Side side, int32_t slot) const {
  const SideState& st = sides_[SideIndex(side)];
  int32_t rank = 0;
  for (int32_t x = 0; x < slot; ++x) rank += st.alive[x] ? 1 : 0;
  return rank;
}

std::vector<int32_t> MergeEngine::Assignment(Side side) const {
  const SideState& st = sides_[SideIndex(side)];
  std::vector<int32_t> dense(st.capacity, -1);
  int32_t next = 0;
  for (int32_t x = 0; x < st.capacity; ++x) {
    if (st.alive[x]) dense[x] = next++;
  }
  std::vector<int32_t> out = origin_.assignment(side);
  for (int32_t& c : out) {
    int32_t slot = c;
    while (st.parent[slot] != slot) slot = st.parent[slot];
    c = dense[slot];
  }
  return out;
}

Coclustering MergeEngine::ToModel() const {
  return Coclustering::FromPartitions(origin_.sample_ptr(), Assignment(Side::kSource),
                                      Assignment(Side::kTarget),
                                      origin_.combinatorics());
}

}  // namespace modl::internal
