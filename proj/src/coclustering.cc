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

#include "modl/coclustering.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "modl/error.h"
#include "modl/kernels.h"

namespace modl {
namespace {

constexpr int64_t kMaxDenseCells = int64_t{1} << 27;

int32_t ValidateAssignment(const std::vector<int32_t>& assignment,
                           int32_t vertex_count, Side side) {
  if (static_cast<int32_t>(assignment.size()) != vertex_count) {
    throw InputError(std::string(SideName(side)) + " assignment covers " +
                     std::to_string(assignment.size()) + " of " +
                     std::to_string(vertex_count) + " vertices");
  }
  int32_t k = 0;
  for (int32_t c : assignment) {
    if (c < 0) throw InputError(std::string(SideName(side)) + " cluster id < 0");
    k = std::max(k, c + 1);
  }
  std::vector<char> used(k, 0);
  for (int32_t c : assignment) used[c] = 1;
  for (int32_t c = 0; c < k; ++c) {
    if (!used[c]) {
      throw InputError(std::string(SideName(side)) + " cluster " +
                       std::to_string(c) + " is empty");
    }
  }
  return k;
}

}  // namespace

Coclustering Coclustering::FromPartitions(
    std::shared_ptr<const MultigraphSample> sample,
    std::vector<int32_t> source_assignment,
    std::vector<int32_t> target_assignment,
    std::shared_ptr<Combinatorics> combinatorics) {
  if (!sample) throw InputError("null sample");
  if (sample->source_count() < 1 || sample->target_count() < 1) {
    throw InputError("sample needs at least one vertex per side");
  }
  Coclustering model;
  model.sides_[0].assignment = std::move(source_assignment);
  model.sides_[1].assignment = std::move(target_assignment);
  const int32_t ks = ValidateAssignment(model.sides_[0].assignment,
                                        sample->source_count(), Side::kSource);
  const int32_t kt = ValidateAssignment(model.sides_[1].assignment,
                                        sample->target_count(), Side::kTarget);
  if (static_cast<int64_t>(ks) * kt > kMaxDenseCells) {
    throw InputError("model has too many coclusters for dense storage");
  }
  model.sides_[0].sizes.assign(ks, 0);
  model.sides_[1].sizes.assign(kt, 0);
  model.sample_ = std::move(sample);
  model.contingency_ = std::make_shared<SparseContingency>(*model.sample_);
  model.comb_ = combinatorics ? std::move(combinatorics) : Combinatorics::Shared();
  model.Initialize();
  return model;
}

Coclustering Coclustering::Null(std::shared_ptr<const MultigraphSample> sample,
                                std::shared_ptr<Combinatorics> combinatorics) {
  std::vector<int32_t> s(sample->source_count(), 0);
  std::vector<int32_t> t(sample->target_count(), 0);
  return FromPartitions(std::move(sample), std::move(s), std::move(t),
                        std::move(combinatorics));
}

Coclustering Coclustering::Maximal(std::shared_ptr<const MultigraphSample> sample,
                                   std::shared_ptr<Combinatorics> combinatorics) {
  std::vector<int32_t> s(sample->source_count());
  std::vector<int32_t> t(sample->target_count());
  for (size_t i = 0; i < s.size(); ++i) s[i] = static_cast<int32_t>(i);
  for (size_t j = 0; j < t.size(); ++j) t[j] = static_cast<int32_t>(j);
  return FromPartitions(std::move(sample), std::move(s), std::move(t),
                        std::move(combinatorics));
}

void Coclustering::EnsureLogFactorials(int64_t max_index) {
  if (!lf_ || static_cast<int64_t>(lf_->size()) <= max_index) {
    lf_ = comb_->LogFactorialTable(max_index + 1);
  }
}

void Coclustering::Initialize() {
  const MultigraphSample& g = *sample_;
  EnsureLogFactorials(g.edge_count() +
                      std::max(g.source_count(), g.target_count()) + 1);
  for (int s = 0; s < 2; ++s) {
    Partition& p = sides_[s];
    const auto& degrees = g.degrees(static_cast<Side>(s));
    p.margins.assign(p.sizes.size(), 0);
    p.sum_vertex_lf = 0.0;
    for (size_t v = 0; v < p.assignment.size(); ++v) {
      ++p.sizes[p.assignment[v]];
      p.margins[p.assignment[v]] += degrees[v];
      p.sum_vertex_lf += Lf(degrees[v]);
    }
    p.sum_degree_prior = 0.0;
    p.sum_margin_lf = 0.0;
    for (size_t c = 0; c < p.sizes.size(); ++c) {
      p.sum_degree_prior += DegreePrior(p.margins[c], p.sizes[c]);
      p.sum_margin_lf += Lf(p.margins[c]);
    }
  }
  const size_t kt = sides_[1].sizes.size();
  cells_.assign(sides_[0].sizes.size() * kt, 0);
  for (const Edge& e : g.edges()) {
    cells_[static_cast<size_t>(sides_[0].assignment[e.source]) * kt +
           sides_[1].assignment[e.target]] += e.count;
  }
  sum_cell_lf_ = kernels::Active().sum_log_factorial(cells_.data(), cells_.size(),
                                                     lf_->data());
  RefreshCriterion();
}

double Coclustering::PartitionTerm(Side side, int64_t k) const {
  return comb_->LogPartitionCount(sample_->vertex_count(side), k);
}

double Coclustering::CoclusterPrior(int64_t k_source, int64_t k_target) const {
  const int64_t ke = k_source * k_target;
  return comb_->LogBinomial(sample_->edge_count() + ke - 1, ke - 1);
}

void Coclustering::RefreshCriterion() {
  const MultigraphSample& g = *sample_;
  CriterionBreakdown& b = criterion_;
  const int32_t ks = cluster_count(Side::kSource);
  const int32_t kt = cluster_count(Side::kTarget);
  b.cluster_count_prior = std::log(static_cast<double>(g.source_count())) +
                          std::log(static_cast<double>(g.target_count()));
  b.partition_prior = PartitionTerm(Side::kSource, ks) + PartitionTerm(Side::kTarget, kt);
  b.cocluster_prior = CoclusterPrior(ks, kt);
  b.source_degree_prior = sides_[0].sum_degree_prior;
  b.target_degree_prior = sides_[1].sum_degree_prior;
  b.cocluster_likelihood = Lf(g.edge_count()) - sum_cell_lf_;
  b.source_degree_likelihood = sides_[0].sum_margin_lf - sides_[0].sum_vertex_lf;
  b.target_degree_likelihood = sides_[1].sum_margin_lf - sides_[1].sum_vertex_lf;
  b.total = b.Sum();
}

CriterionBreakdown Coclustering::Recompute() const {
  const MultigraphSample& g = *sample_;
  Combinatorics& comb = *comb_;
  CriterionBreakdown b;
  const int64_t ns = g.source_count(), nt = g.target_count();
  const int64_t ks = cluster_count(Side::kSource), kt = cluster_count(Side::kTarget);
  const int64_t m = g.edge_count();
  b.cluster_count_prior = std::log(static_cast<double>(ns)) +
                          std::log(static_cast<double>(nt));
  b.partition_prior = comb.LogPartitionCount(ns, ks) + comb.LogPartitionCount(nt, kt);
  b.cocluster_prior = comb.LogBinomial(m + ks * kt - 1, ks * kt - 1);
  double* degree_prior[2] = {&b.source_degree_prior, &b.target_degree_prior};
  double* degree_lh[2] = {&b.source_degree_likelihood, &b.target_degree_likelihood};
  for (int s = 0; s < 2; ++s) {
    const Partition& p = sides_[s];
    for (size_t c = 0; c < p.sizes.size(); ++c) {
      *degree_prior[s] += comb.LogBinomial(p.margins[c] + p.sizes[c] - 1, p.sizes[c] - 1);
      *degree_lh[s] += comb.LogFactorial(p.margins[c]);
    }
    for (int64_t d : g.degrees(static_cast<Side>(s))) {
      *degree_lh[s] -= comb.LogFactorial(d);
    }
  }
  b.cocluster_likelihood = comb.LogFactorial(m);
  for (int64_t c : cells_) b.cocluster_likelihood -= comb.LogFactorial(c);
  b.total = b.Sum();
  return b;
}

std::vector<std::vector<int32_t>> Coclustering::Members(Side side) const {
  const Partition& p = sides_[SideIndex(side)];
  std::vector<std::vector<int32_t>> members(p.sizes.size());
  for (size_t c = 0; c < members.size(); ++c) members[c].reserve(p.sizes[c]);
  for (size_t v = 0; v < p.assignment.size(); ++v) {
    members[p.assignment[v]].push_back(static_cast<int32_t>(v));
  }
  return members;
}

void Coclustering::CopyLine(Side side, int32_t cluster,
                            std::vector<int64_t>& out) const {
  const size_t ks = sides_[0].sizes.size(), kt = sides_[1].sizes.size();
  if (side == Side::kSource) {
    out.assign(cells_.begin() + cluster * kt, cells_.begin() + (cluster + 1) * kt);
  } else {
    out.resize(ks);
    for (size_t r = 0; r < ks; ++r) out[r] = cells_[r * kt + cluster];
  }
}

int64_t Coclustering::CellBase(Side side, int32_t cluster) const {
  return side == Side::kSource
             ? static_cast<int64_t>(cluster) * cluster_count(Side::kTarget)
             : cluster;
}

double Coclustering::MergeDelta(Side side, int32_t a, int32_t b) const {
  const Partition& p = sides_[SideIndex(side)];
  const auto k = static_cast<int32_t>(p.sizes.size());
  if (a < 0 || b < 0 || a >= k || b >= k || a == b) {
    throw InputError("invalid clusters for merge: " + std::to_string(a) + ", " +
                     std::to_string(b));
  }
  std::vector<int64_t> la, lb;
  CopyLine(side, a, la);
  CopyLine(side, b, lb);
  const double gain =
      kernels::Active().fusion_gain(la.data(), lb.data(), la.size(), lf_->data());
  const int64_t ma = p.margins[a], mb = p.margins[b];
  const int64_t na = p.sizes[a], nb = p.sizes[b];
  double delta = -gain;
  delta += DegreePrior(ma + mb, na + nb) - DegreePrior(ma, na) - DegreePrior(mb, nb);
  delta += Lf(ma + mb) - Lf(ma) - Lf(mb);
  delta += PartitionTerm(side, k - 1) - PartitionTerm(side, k);
  const int64_t ko = cluster_count(Other(side));
  delta += CoclusterPrior(k - 1, ko) - CoclusterPrior(k, ko);
  return delta;
}

double Coclustering::Merge(Side side, int32_t a, int32_t b) {
  const double delta = MergeDelta(side, a, b);
  const int32_t lo = std::min(a, b), hi = std::max(a, b);
  Partition& p = sides_[SideIndex(side)];
  std::vector<int64_t> llo, lhi;
  CopyLine(side, lo, llo);
  CopyLine(side, hi, lhi);
  sum_cell_lf_ +=
      kernels::Active().fusion_gain(llo.data(), lhi.data(), llo.size(), lf_->data());
  const size_t kt = sides_[1].sizes.size();
  for (size_t x = 0; x < llo.size(); ++x) {
    const size_t at_lo = side == Side::kSource ? lo * kt + x : x * kt + lo;
    const size_t at_hi = side == Side::kSource ? hi * kt + x : x * kt + hi;
    cells_[at_lo] += cells_[at_hi];
    cells_[at_hi] = 0;
  }
  const int64_t m_lo = p.margins[lo], m_hi = p.margins[hi];
  const int64_t n_lo = p.sizes[lo], n_hi = p.sizes[hi];
  p.sum_degree_prior += DegreePrior(m_lo + m_hi, n_lo + n_hi) -
                        DegreePrior(m_lo, n_lo) - DegreePrior(m_hi, n_hi);
  p.sum_margin_lf += Lf(m_lo + m_hi) - Lf(m_lo) - Lf(m_hi);
  p.margins[lo] += m_hi;
  p.sizes[lo] += n_hi;
  p.margins[hi] = 0;
  p.sizes[hi] = 0;
  for (int32_t& c : p.assignment) {
    if (c == hi) c = lo;
  }
  RemoveCluster(side, hi);
  RefreshCriterion();
  return delta;
}

Coclustering::VertexEdges Coclustering::CollectEdges(Side side,
                                                     int32_t vertex) const {
  const Side other = Other(side);
  const auto& other_assignment = sides_[SideIndex(other)].assignment;
  const int64_t stride = side == Side::kSource ? 1 : cluster_count(Side::kTarget);
  std::vector<int64_t> per_cluster(cluster_count(other), 0);
  std::vector<int32_t> touched;
  VertexEdges out;
  for (const auto& entry : contingency_->Adjacent(side, vertex)) {
    const int32_t c = other_assignment[entry.index];
    if (per_cluster[c] == 0) touched.push_back(c);
    per_cluster[c] += entry.count;
    out.degree += entry.count;
  }
  std::sort(touched.begin(), touched.end());
  out.offsets.reserve(touched.size());
  out.counts.reserve(touched.size());
  out.negated.reserve(touched.size());
  for (int32_t c : touched) {
    out.offsets.push_back(c * stride);
    out.counts.push_back(per_cluster[c]);
    out.negated.push_back(-per_cluster[c]);
  }
  return out;
}

double Coclustering::RemovalGain(Side side, int32_t from,
                                 const VertexEdges& edges) const {
  return kernels::Active().scatter_gain(cells_.data(), CellBase(side, from),
                                        edges.offsets.data(), edges.negated.data(),
                                        edges.negated.size(), lf_->data());
}

double Coclustering::MoveDeltaWith(Side side, int32_t from, int32_t dest,
                                   const VertexEdges& edges,
                                   double removal_gain) const {
  const Partition& p = sides_[SideIndex(side)];
  const kernels::KernelSet& kern = kernels::Active();
  const double* lf = lf_->data();
  const size_t n = edges.counts.size();
  const bool fresh = dest == kFreshCluster;

  const double removed = removal_gain;
  const double added =
      fresh ? kern.sum_log_factorial(edges.counts.data(), n, lf)
            : kern.scatter_gain(cells_.data(), CellBase(side, dest),
                                edges.offsets.data(), edges.counts.data(), n, lf);
  double delta = -(removed + added);

  const int64_t d = edges.degree;
  const int64_t ma = p.margins[from], na = p.sizes[from];
  const int64_t mb = fresh ? 0 : p.margins[dest], nb = fresh ? 0 : p.sizes[dest];
  delta += DegreePrior(ma - d, na - 1) + DegreePrior(mb + d, nb + 1) -
           DegreePrior(ma, na) - DegreePrior(mb, nb);
  delta += Lf(ma - d) + Lf(mb + d) - Lf(ma) - Lf(mb);

  const int64_t k = static_cast<int64_t>(p.sizes.size());
  const int64_t k_new = k - (na == 1 ? 1 : 0) + (fresh ? 1 : 0);
  if (k_new != k) {
    const int64_t ko = cluster_count(Other(side));
    delta += PartitionTerm(side, k_new) - PartitionTerm(side, k);
    delta += CoclusterPrior(k_new, ko) - CoclusterPrior(k, ko);
  }
  return delta;
}

double Coclustering::MoveDelta(Side side, int32_t vertex, int32_t dest) const {
  const Partition& p = sides_[SideIndex(side)];
  if (vertex < 0 || vertex >= static_cast<int32_t>(p.assignment.size())) {
    throw InputError("invalid vertex for move: " + std::to_string(vertex));
  }
  if (dest != kFreshCluster &&
      (dest < 0 || dest >= static_cast<int32_t>(p.sizes.size()))) {
    throw InputError("invalid destination cluster: " + std::to_string(dest));
  }
  const int32_t from = p.assignment[vertex];
  if (dest == from) return 0.0;
  const VertexEdges edges = CollectEdges(side, vertex);
  return MoveDeltaWith(side, from, dest, edges, RemovalGain(side, from, edges));
}

Coclustering::MoveChoice Coclustering::BestMove(Side side, int32_t vertex) const {
  const Partition& p = sides_[SideIndex(side)];
  const int32_t from = p.assignment[vertex];
  MoveChoice best{from, 0.0};
  const auto k = static_cast<int32_t>(p.sizes.size());
  if (k == 1) return best;
  const VertexEdges edges = CollectEdges(side, vertex);
  const double removal = RemovalGain(side, from, edges);
  bool have = false;
  for (int32_t dest = 0; dest < k; ++dest) {
    if (dest == from) continue;
    const double delta = MoveDeltaWith(side, from, dest, edges, removal);
    if (!have || delta < best.delta) {
      best = {dest, delta};
      have = true;
    }
  }
  return best;
}

double Coclustering::Move(Side side, int32_t vertex, int32_t dest) {
  const double delta = MoveDelta(side, vertex, dest);
  Partition& p = sides_[SideIndex(side)];
  const int32_t from = p.assignment[vertex];
  if (dest == from) return 0.0;
  if (dest == kFreshCluster) {
    AppendCluster(side);
    dest = static_cast<int32_t>(p.sizes.size()) - 1;
  }
  // Offsets depend on the target-side stride, so collect after any append.
  const VertexEdges edges = CollectEdges(side, vertex);
  const double* lf = lf_->data();
  const int64_t base_from = CellBase(side, from), base_dest = CellBase(side, dest);
  for (size_t i = 0; i < edges.counts.size(); ++i) {
    int64_t& src = cells_[base_from + edges.offsets[i]];
    int64_t& dst = cells_[base_dest + edges.offsets[i]];
    const int64_t c = edges.counts[i];
    sum_cell_lf_ += lf[src - c] - lf[src] + lf[dst + c] - lf[dst];
    src -= c;
    dst += c;
  }
  const int64_t d = edges.degree;
  for (int32_t c : {from, dest}) {
    p.sum_degree_prior -= DegreePrior(p.margins[c], p.sizes[c]);
    p.sum_margin_lf -= Lf(p.margins[c]);
  }
  p.margins[from] -= d;
  p.sizes[from] -= 1;
  p.margins[dest] += d;
  p.sizes[dest] += 1;
  for (int32_t c : {from, dest}) {
    p.sum_degree_prior += DegreePrior(p.margins[c], p.sizes[c]);
    p.sum_margin_lf += Lf(p.margins[c]);
  }
  p.assignment[vertex] = dest;
  if (p.sizes[from] == 0) RemoveCluster(side, from);
  RefreshCriterion();
  return delta;
}

void Coclustering::AppendCluster(Side side) {
  Partition& p = sides_[SideIndex(side)];
  const size_t ks = sides_[0].sizes.size(), kt = sides_[1].sizes.size();
  if (side == Side::kSource) {
    cells_.resize((ks + 1) * kt, 0);
  } else {
    std::vector<int64_t> grown(ks * (kt + 1), 0);
    for (size_t r = 0; r < ks; ++r) {
      std::copy_n(cells_.begin() + r * kt, kt, grown.begin() + r * (kt + 1));
    }
    cells_ = std::move(grown);
  }
  p.sizes.push_back(0);
  p.margins.push_back(0);
}

void Coclustering::RemoveCluster(Side side, int32_t cluster) {
  Partition& p = sides_[SideIndex(side)];
  const size_t ks = sides_[0].sizes.size(), kt = sides_[1].sizes.size();
  if (side == Side::kSource) {
    cells_.erase(cells_.begin() + cluster * kt, cells_.begin() + (cluster + 1) * kt);
  } else {
    std::vector<int64_t> shrunk;
    shrunk.reserve(ks * (kt - 1));
    for (size_t r = 0; r < ks; ++r) {
      for (size_t c = 0; c < kt; ++c) {
        if (static_cast<int32_t>(c) != cluster) shrunk.push_back(cells_[r * kt + c]);
      }
    }
    cells_ = std::move(shrunk);
  }
  p.sizes.erase(p.sizes.begin() + cluster);
  p.margins.erase(p.margins.begin() + cluster);
  for (int32_t& c : p.assignment) {
    if (c > cluster) --c;
  }
}

std::string Coclustering::AuditConsistency() const {
  const MultigraphSample& g = *sample_;
  std::ostringstream why;
  for (int s = 0; s < 2; ++s) {
    const Side side = static_cast<Side>(s);
    const Partition& p = sides_[s];
    if (static_cast<int32_t>(p.assignment.size()) != g.vertex_count(side)) {
      return std::string(SideName(side)) + " assignment has wrong length";
    }
    std::vector<int32_t> sizes(p.sizes.size(), 0);
    std::vector<int64_t> margins(p.sizes.size(), 0);
    for (size_t v = 0; v < p.assignment.size(); ++v) {
      const int32_t c = p.assignment[v];
      if (c < 0 || c >= static_cast<int32_t>(p.sizes.size())) {
        return std::string(SideName(side)) + " vertex " + std::to_string(v) +
               " has invalid cluster";
      }
      ++sizes[c];
      margins[c] += g.degrees(side)[v];
    }
    for (size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] == 0) {
        why << SideName(side) << " cluster " << c << " is empty";
        return why.str();
      }
      if (sizes[c] != p.sizes[c] || margins[c] != p.margins[c]) {
        why << SideName(side) << " cluster " << c << " counts differ from sample";
        return why.str();
      }
    }
  }
  const size_t kt = sides_[1].sizes.size();
  std::vector<int64_t> cells(sides_[0].sizes.size() * kt, 0);
  for (const Edge& e : g.edges()) {
    cells[sides_[0].assignment[e.source] * kt + sides_[1].assignment[e.target]] +=
        e.count;
  }
  if (cells != cells_) return "cocluster counts differ from sample";
  return "";
}

MergeResult Merge(const Coclustering& model, Side side, int32_t a, int32_t b) {
  Coclustering next = model;
  const double delta = next.Merge(side, a, b);
  return {std::move(next), delta};
}

MoveResult Move(const Coclustering& model, Side side, int32_t vertex, int32_t dest) {
  Coclustering next = model;
  const double delta = next.Move(side, vertex, dest);
  return {std::move(next), delta};
}

CriterionBreakdown Criterion(const Coclustering& model) { return model.criterion(); }

}  // namespace modl
