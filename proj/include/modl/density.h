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

#ifndef MODL_DENSITY_H_
#define MODL_DENSITY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "modl/coclustering.h"

namespace modl {

struct FitResult;

// Joint distribution over a rows x cols grid: listed cells (distinct
// coordinates) plus a common value for every unlisted cell.
struct SparseJoint {
  struct Cell {
    int32_t row;
    int32_t col;
    double p;
  };
  int32_t rows = 0;
  int32_t cols = 0;
  std::vector<Cell> cells;
  double background = 0.0;
};

// Information quantities in nats.
struct MetricsReport {
  double entropy_source = 0.0;
  double entropy_target = 0.0;
  double joint_entropy = 0.0;
  double mutual_information = 0.0;
  std::optional<double> modularity;
  std::optional<double> modl_mi_full;
  std::optional<double> modl_mi_likelihood;
};

// Entropies and mutual information with 0 log 0 = 0. Throws InputError on a
// negative probability or a total further than 1e-6 from one; totals within
// that distance are rescaled.
MetricsReport InformationMetrics(const SparseJoint& joint);
// Row-major dense grid.
MetricsReport InformationMetrics(const std::vector<double>& grid, int32_t rows, int32_t cols);

// Piecewise-constant edge probabilities of a model:
// p_ij = (m_kl / m) (m_i. / m_k.) (m_.j / m_.l) for i in source cluster k and
// j in target cluster l.
class DensityEstimate {
 public:
  explicit DensityEstimate(Coclustering model);

  const Coclustering& model() const { return model_; }

  // Throws InputError for indices out of range.
  double Probability(int32_t source, int32_t target) const;
  double CoclusterProbability(int32_t source_cluster, int32_t target_cluster) const;
  // p_k,i. for the source side, p_l,.j for the target side; 0 when the
  // vertex's cluster has no edges.
  double VertexProbability(Side side, int32_t vertex) const;

  // Metrics of p_ij in closed form; the marginals are the degree
  // distributions and the mutual information is that of the clusters.
  MetricsReport Metrics() const;

  // Every nonzero p_ij. Size is the sum of n_k n_l over nonempty coclusters.
  SparseJoint Materialize() const;

 private:
  Coclustering model_;
};

enum class BaselineKind { kEmpirical, kLaplace };

// Empirical: m_ij / m. Laplace: (m_ij + 1) / (m + n_S n_T).
SparseJoint BaselineEstimate(const MultigraphSample& sample, BaselineKind kind);

// Mutual information between the source and target cluster variables,
// I(V_S^M; V_T^M), from the cocluster counts.
double ClusterMutualInformation(const Coclustering& model);

// Entropy of the sample's out-degree (source) or in-degree (target)
// distribution.
double DegreeEntropy(const MultigraphSample& sample, Side side);

// Newman modularity of one partition of a graph whose source and target
// vertices coincide. Cluster ids are arbitrary non-negative integers. Throws
// InputError if the sides differ in size or the partition does not cover
// every vertex.
double Modularity(const MultigraphSample& sample, const std::vector<int32_t>& partition);

struct ModlMiEstimate {
  double full = 0.0;             // (c(null) - c(best)) / m
  double likelihood_only = 0.0;  // same over the likelihood terms only
};
ModlMiEstimate EstimateModlMi(const Coclustering& best);
ModlMiEstimate EstimateModlMi(const FitResult& fit);

}  // namespace modl

#endif  // MODL_DENSITY_H_
