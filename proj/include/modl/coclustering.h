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

#ifndef MODL_COCLUSTERING_H_
#define MODL_COCLUSTERING_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "modl/combinatorics.h"
#include "modl/graph.h"

namespace modl {

// The eight additive terms of the coclustering criterion c(M), the negative
// log posterior of a model consistent with the sample, in nats.
struct CriterionBreakdown {
  double cluster_count_prior = 0.0;       // ln n_S + ln n_T
  double partition_prior = 0.0;           // ln B(n_S, k_S) + ln B(n_T, k_T)
  double cocluster_prior = 0.0;           // ln C(m + k_E - 1, k_E - 1)
  double source_degree_prior = 0.0;       // sum ln C(m_i.^S + n_i^S - 1, n_i^S - 1)
  double target_degree_prior = 0.0;       // sum ln C(m_.j^T + n_j^T - 1, n_j^T - 1)
  double cocluster_likelihood = 0.0;      // ln m! - sum ln m_ij^ST!
  double source_degree_likelihood = 0.0;  // sum ln m_i.^S! - sum ln m_i.!
  double target_degree_likelihood = 0.0;  // sum ln m_.j^T! - sum ln m_.j!
  double total = 0.0;

  double prior() const {
    return cluster_count_prior + partition_prior + cocluster_prior +
           source_degree_prior + target_degree_prior;
  }
  double likelihood() const {
    return cocluster_likelihood + source_degree_likelihood +
           target_degree_likelihood;
  }
  double Sum() const { return prior() + likelihood(); }
};

// A coclustering model M of a sample: a partition of the source vertices and
// a partition of the target vertices, with the cocluster counts m_ij^ST,
// cluster sizes and cluster margins they induce. Cluster ids are dense
// (0..k-1); removing a cluster shifts higher ids down by one, so surviving
// clusters keep their relative order.
//
// Copies are independent values; the sample and lookup tables are shared
// read-only.
class Coclustering {
 public:
  // Destination for Move() that opens a new cluster (appended last).
  static constexpr int32_t kFreshCluster = -1;

  // Throws InputError unless both assignments cover every vertex with labels
  // forming a contiguous range 0..k-1 without empty cluster.
  static Coclustering FromPartitions(
      std::shared_ptr<const MultigraphSample> sample,
      std::vector<int32_t> source_assignment,
      std::vector<int32_t> target_assignment,
      std::shared_ptr<Combinatorics> combinatorics = nullptr);

  // One cluster per side.
  static Coclustering Null(std::shared_ptr<const MultigraphSample> sample,
                           std::shared_ptr<Combinatorics> combinatorics = nullptr);
  // One cluster per vertex.
  static Coclustering Maximal(std::shared_ptr<const MultigraphSample> sample,
                              std::shared_ptr<Combinatorics> combinatorics = nullptr);

  const MultigraphSample& sample() const { return *sample_; }
  const std::shared_ptr<const MultigraphSample>& sample_ptr() const {
    return sample_;
  }
  const SparseContingency& contingency() const { return *contingency_; }
  const std::shared_ptr<Combinatorics>& combinatorics() const { return comb_; }

  int32_t cluster_count(Side side) const {
    return static_cast<int32_t>(sides_[SideIndex(side)].sizes.size());
  }
  const std::vector<int32_t>& assignment(Side side) const {
    return sides_[SideIndex(side)].assignment;
  }
  int32_t cluster_of(Side side, int32_t vertex) const {
    return sides_[SideIndex(side)].assignment[vertex];
  }
  int32_t cluster_size(Side side, int32_t cluster) const {
    return sides_[SideIndex(side)].sizes[cluster];
  }
  // m_i.^S for the source side, m_.j^T for the target side.
  int64_t margin(Side side, int32_t cluster) const {
    return sides_[SideIndex(side)].margins[cluster];
  }
  // m_ij^ST.
  int64_t cell(int32_t source_cluster, int32_t target_cluster) const {
    return cells_[static_cast<size_t>(source_cluster) * cluster_count(Side::kTarget) +
                  target_cluster];
  }
  // Row-major k_S x k_T cocluster counts.
  const std::vector<int64_t>& cells() const { return cells_; }

  // Vertex indices per cluster, ascending.
  std::vector<std::vector<int32_t>> Members(Side side) const;

  // Cached criterion, maintained incrementally by Merge() and Move().
  const CriterionBreakdown& criterion() const { return criterion_; }

  // Full evaluation from the cached counts, term by term.
  CriterionBreakdown Recompute() const;

  // c(M with clusters a and b of `side` fused) - c(M), evaluated locally.
  double MergeDelta(Side side, int32_t a, int32_t b) const;
  // Fuses b into a; the fused cluster takes id min(a, b). Returns the delta.
  double Merge(Side side, int32_t a, int32_t b);

  // c(M with `vertex` moved to `dest`) - c(M). dest may be kFreshCluster.
  double MoveDelta(Side side, int32_t vertex, int32_t dest) const;
  // Applies the move; an emptied cluster is removed. Returns the delta.
  double Move(Side side, int32_t vertex, int32_t dest);

  struct MoveChoice {
    int32_t dest;
    double delta;
  };
  // Best existing destination other than the vertex's own cluster (first
  // minimum by cluster id); dest = own cluster with delta 0 when k = 1.
  MoveChoice BestMove(Side side, int32_t vertex) const;

  // Checks the cached counts against the sample under the assignments.
  // Returns an empty string when consistent, else a description.
  std::string AuditConsistency() const;

 private:
  struct Partition {
    std::vector<int32_t> assignment;
    std::vector<int32_t> sizes;
    std::vector<int64_t> margins;
    double sum_degree_prior = 0.0;   // sum over clusters of ln C(M + n - 1, n - 1)
    double sum_margin_lf = 0.0;      // sum over clusters of ln M!
    double sum_vertex_lf = 0.0;      // sum over vertices of ln degree!
  };

  // Sparse per-cluster aggregation of one vertex's edges.
  struct VertexEdges {
    std::vector<int64_t> offsets;  // cell offsets relative to the row/column base
    std::vector<int64_t> counts;
    std::vector<int64_t> negated;
    int64_t degree = 0;
  };

  Coclustering() = default;

  void Initialize();
  void EnsureLogFactorials(int64_t max_index);
  double Lf(int64_t n) const { return (*lf_)[n]; }
  // ln C(M + n - 1, n - 1); 0 for an absent cluster (n = 0).
  double DegreePrior(int64_t margin, int64_t size) const {
    return size == 0 ? 0.0 : Lf(margin + size - 1) - Lf(size - 1) - Lf(margin);
  }
  double PartitionTerm(Side side, int64_t k) const;
  double CoclusterPrior(int64_t k_source, int64_t k_target) const;
  void RefreshCriterion();
  // Column `c` of the target side (or row of the source side) as a dense vector.
  void CopyLine(Side side, int32_t cluster, std::vector<int64_t>& out) const;
  VertexEdges CollectEdges(Side side, int32_t vertex) const;
  int64_t CellBase(Side side, int32_t cluster) const;
  // Factorial change of taking the vertex's edges out of cluster `from`.
  double RemovalGain(Side side, int32_t from, const VertexEdges& edges) const;
  double MoveDeltaWith(Side side, int32_t from, int32_t dest,
                       const VertexEdges& edges, double removal_gain) const;
  void RemoveCluster(Side side, int32_t cluster);
  void AppendCluster(Side side);

  std::shared_ptr<const MultigraphSample> sample_;
  std::shared_ptr<const SparseContingency> contingency_;
  std::shared_ptr<Combinatorics> comb_;
  std::shared_ptr<const Combinatorics::Table> lf_;
  Partition sides_[2];
  std::vector<int64_t> cells_;
  double sum_cell_lf_ = 0.0;
  CriterionBreakdown criterion_;
};

struct MergeResult {
  Coclustering model;
  double delta;
};
struct MoveResult {
  Coclustering model;
  double delta;
};

// Functional forms: the input model is left unchanged.
MergeResult Merge(const Coclustering& model, Side side, int32_t a, int32_t b);
MoveResult Move(const Coclustering& model, Side side, int32_t vertex, int32_t dest);
CriterionBreakdown Criterion(const Coclustering& model);

}  // namespace modl

#endif  // MODL_COCLUSTERING_H_
