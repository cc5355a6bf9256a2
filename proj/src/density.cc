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

#include "modl/density.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <unordered_map>

#include "modl/error.h"
#include "modl/optimizer.h"

namespace modl {
namespace {

double XLogX(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

}  // namespace

MetricsReport InformationMetrics(const SparseJoint& joint) {
  if (joint.rows < 1 || joint.cols < 1) throw InputError("empty probability grid");
  if (joint.background < 0.0) throw InputError("negative probability");
  const double grid = static_cast<double>(joint.rows) * joint.cols;
  if (static_cast<double>(joint.cells.size()) > grid) throw InputError("too many cells");

  std::vector<double> row_listed(joint.rows, 0.0), col_listed(joint.cols, 0.0);
  std::vector<int64_t> row_n(joint.rows, 0), col_n(joint.cols, 0);
  double total = 0.0;
  for (const SparseJoint::Cell& c : joint.cells) {
    if (c.row < 0 || c.row >= joint.rows || c.col < 0 || c.col >= joint.cols) {
      throw InputError("cell outside the grid");
    }
    if (!(c.p >= 0.0)) throw InputError("negative probability");
    row_listed[c.row] += c.p;
    col_listed[c.col] += c.p;
    ++row_n[c.row];
    ++col_n[c.col];
    total += c.p;
  }
  const double unlisted = grid - static_cast<double>(joint.cells.size());
  total += unlisted * joint.background;
  if (std::fabs(total - 1.0) > 1e-6) {
    throw InputError("probabilities sum to " + std::to_string(total));
  }
  const double scale = 1.0 / total;
  const double b = joint.background * scale;

  std::vector<double> r(joint.rows), c(joint.cols);
  MetricsReport out;
  for (int32_t i = 0; i < joint.rows; ++i) {
    r[i] = row_listed[i] * scale + b * static_cast<double>(joint.cols - row_n[i]);
    out.entropy_source -= XLogX(r[i]);
  }
  for (int32_t j = 0; j < joint.cols; ++j) {
    c[j] = col_listed[j] * scale + b * static_cast<double>(joint.rows - col_n[j]);
    out.entropy_target -= XLogX(c[j]);
  }

  double mi = 0.0;
  double joint_entropy = -unlisted * XLogX(b);
  for (const SparseJoint::Cell& cell : joint.cells) {
    const double p = cell.p * scale;
    if (p <= 0.0) continue;
    joint_entropy -= p * std::log(p);
    mi += p * (std::log(p) - std::log(r[cell.row]) - std::log(c[cell.col]));
  }
  if (b > 0.0) {
    double sum_log_r = 0.0, sum_log_c = 0.0;
    for (int32_t i = 0; i < joint.rows; ++i) {
      sum_log_r += static_cast<double>(joint.cols - row_n[i]) * std::log(r[i]);
    }
    for (int32_t j = 0; j < joint.cols; ++j) {
      sum_log_c += static_cast<double>(joint.rows - col_n[j]) * std::log(c[j]);
    }
    mi += b * (unlisted * std::log(b) - sum_log_r - sum_log_c);
  }
  out.mutual_information =
      std::clamp(mi, 0.0, std::min(out.entropy_source, out.entropy_target));
  out.joint_entropy = joint_entropy;
  return out;
}

MetricsReport InformationMetrics(const std::vector<double>& grid, int32_t rows, int32_t cols) {
  if (grid.size() != static_cast<size_t>(rows) * cols) {
    throw InputError("grid size does not match its shape");
  }
  SparseJoint joint;
  joint.rows = rows;
  joint.cols = cols;
  for (int32_t i = 0; i < rows; ++i) {
    for (int32_t j = 0; j < cols; ++j) {
      const double p = grid[static_cast<size_t>(i) * cols + j];
      if (p != 0.0) joint.cells.push_back({i, j, p});
    }
  }
  return InformationMetrics(joint);
}

DensityEstimate::DensityEstimate(Coclustering model) : model_(std::move(model)) {}

double DensityEstimate::CoclusterProbability(int32_t a, int32_t b) const {
  if (a < 0 || a >= model_.cluster_count(Side::kSource) || b < 0 ||
      b >= model_.cluster_count(Side::kTarget)) {
    throw InputError("cocluster index out of range");
  }
  return static_cast<double>(model_.cell(a, b)) / model_.sample().edge_count();
}

double DensityEstimate::VertexProbability(Side side, int32_t vertex) const {
  const MultigraphSample& g = model_.sample();
  if (vertex < 0 || vertex >= g.vertex_count(side)) throw InputError("vertex out of range");
  const int64_t margin = model_.margin(side, model_.cluster_of(side, vertex));
  if (margin == 0) return 0.0;
  return static_cast<double>(g.degrees(side)[vertex]) / margin;
}

double DensityEstimate::Probability(int32_t i, int32_t j) const {
  const int32_t a = model_.cluster_of(Side::kSource, i);
  if (j < 0 || j >= model_.sample().target_count()) throw InputError("vertex out of range");
  const double pi = VertexProbability(Side::kSource, i);
  const int32_t b = model_.cluster_of(Side::kTarget, j);
  return CoclusterProbability(a, b) * pi * VertexProbability(Side::kTarget, j);
}

MetricsReport DensityEstimate::Metrics() const {
  MetricsReport out;
  out.entropy_source = DegreeEntropy(model_.sample(), Side::kSource);
  out.entropy_target = DegreeEntropy(model_.sample(), Side::kTarget);
  out.mutual_information = std::clamp(ClusterMutualInformation(model_), 0.0,
                                      std::min(out.entropy_source, out.entropy_target));
  out.joint_entropy = out.entropy_source + out.entropy_target - out.mutual_information;
  return out;
}

SparseJoint DensityEstimate::Materialize() const {
  const MultigraphSample& g = model_.sample();
  SparseJoint joint;
  joint.rows = g.source_count();
  joint.cols = g.target_count();
  const auto src = model_.Members(Side::kSource);
  const auto tgt = model_.Members(Side::kTarget);
  for (int32_t a = 0; a < model_.cluster_count(Side::kSource); ++a) {
    for (int32_t b = 0; b < model_.cluster_count(Side::kTarget); ++b) {
      if (model_.cell(a, b) == 0) continue;
      const double pab = CoclusterProbability(a, b);
      for (int32_t i : src[a]) {
        const double pi = VertexProbability(Side::kSource, i);
        if (pi == 0.0) continue;
        for (int32_t j : tgt[b]) {
          const double pj = VertexProbability(Side::kTarget, j);
          if (pj != 0.0) joint.cells.push_back({i, j, pab * pi * pj});
        }
      }
    }
  }
  return joint;
}

SparseJoint BaselineEstimate(const MultigraphSample& sample, BaselineKind kind) {
  SparseJoint joint;
  joint.rows = sample.source_count();
  joint.cols = sample.target_count();
  const double m = static_cast<double>(sample.edge_count());
  const double denom =
      kind == BaselineKind::kEmpirical ? m : m + static_cast<double>(joint.rows) * joint.cols;
  const int64_t shift = kind == BaselineKind::kEmpirical ? 0 : 1;
  joint.cells.reserve(sample.edges().size());
  for (const Edge& e : sample.edges()) {
    joint.cells.push_back({e.source, e.target, static_cast<double>(e.count + shift) / denom});
  }
  joint.background = static_cast<double>(shift) / denom;
  return joint;
}

double ClusterMutualInformation(const Coclustering& model) {
  const double m = static_cast<double>(model.sample().edge_count());
  const int32_t ks = model.cluster_count(Side::kSource);
  const int32_t kt = model.cluster_count(Side::kTarget);
  double mi = 0.0;
  for (int32_t a = 0; a < ks; ++a) {
    const double ma = static_cast<double>(model.margin(Side::kSource, a));
    for (int32_t b = 0; b < kt; ++b) {
      const int64_t c = model.cell(a, b);
      if (c == 0) continue;
      const double mb = static_cast<double>(model.margin(Side::kTarget, b));
      mi += c / m * std::log(c * m / (ma * mb));
    }
  }
  return std::max(0.0, mi);
}

double DegreeEntropy(const MultigraphSample& sample, Side side) {
  const double m = static_cast<double>(sample.edge_count());
  double h = 0.0;
  for (int64_t d : sample.degrees(side)) h -= XLogX(d / m);
  return h;
}

double Modularity(const MultigraphSample& sample, const std::vector<int32_t>& partition) {
  const int32_t n = sample.source_count();
  if (sample.target_count() != n) {
    throw InputError("modularity needs one vertex set for sources and targets");
  }
  if (static_cast<int32_t>(partition.size()) != n) {
    throw InputError("partition covers " + std::to_string(partition.size()) + " of " +
                     std::to_string(n) + " vertices");
  }
  std::unordered_map<int32_t, std::array<double, 3>> clusters;  // inner, out, in
  for (int32_t v = 0; v < n; ++v) {
    if (partition[v] < 0) throw InputError("negative cluster id");
    auto& c = clusters[partition[v]];
    c[1] += static_cast<double>(sample.out_degrees()[v]);
    c[2] += static_cast<double>(sample.in_degrees()[v]);
  }
  for (const Edge& e : sample.edges()) {
    if (partition[e.source] == partition[e.target]) {
      clusters[partition[e.source]][0] += static_cast<double>(e.count);
    }
  }
  const double m = static_cast<double>(sample.edge_count());
  double q = 0.0;
  for (const auto& [id, c] : clusters) q += c[0] / m - (c[1] / m) * (c[2] / m);
  return q;
}

ModlMiEstimate EstimateModlMi(const Coclustering& best) {
  const Coclustering null_model = Coclustering::Null(best.sample_ptr(), best.combinatorics());
  const CriterionBreakdown& c0 = null_model.criterion();
  const CriterionBreakdown& c1 = best.criterion();
  const double m = static_cast<double>(best.sample().edge_count());
  return {(c0.total - c1.total) / m, (c0.likelihood() - c1.likelihood()) / m};
}

ModlMiEstimate EstimateModlMi(const FitResult& fit) { return EstimateModlMi(fit.best_model); }

}  // namespace modl
