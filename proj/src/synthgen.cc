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

#include "modl/synthgen.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "modl/error.h"
#include "modl/rng.h"

namespace modl {
namespace {

std::vector<std::string> VertexLabels(int32_t n) {
  std::vector<std::string> labels(n);
  for (int32_t i = 0; i < n; ++i) labels[i] = "v" + std::to_string(i);
  return labels;
}

std::shared_ptr<const MultigraphSample> UnifiedSample(int32_t n, const std::vector<Edge>& draws) {
  auto labels = VertexLabels(n);
  return std::make_shared<const MultigraphSample>(labels, labels, draws, true);
}

// Index drawn from a cumulative distribution by inversion. upper_bound picks
// the first step strictly above u, so zero-probability entries are never drawn.
size_t DrawIndex(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.Uniform01() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return std::min(static_cast<size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

std::vector<double> Cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size());
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) c[i] = acc += p[i];
  return c;
}

void RequireEdges(int64_t m) {
  if (m < 1) throw InputError("m must be at least 1");
}

void RequireProbability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

const char* FamilyName(Family family) {
  switch (family) {
    case Family::kCircular:
      return "circular";
    case Family::kBlockDiagonal:
      return "block-diagonal";
    case Family::kBlockmodel:
      return "blockmodel";
    case Family::kUndirectedPattern:
      return "undirected-pattern";
  }
  return "?";
}

Family ParseFamily(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '_', '-');
  for (Family f : {Family::kCircular, Family::kBlockDiagonal, Family::kBlockmodel,
                   Family::kUndirectedPattern}) {
    if (key == FamilyName(f)) return f;
  }
  throw InputError("unknown generator family: " + name);
}

std::vector<double> DefaultBlockMatrix() {
  return {0.3, 0.0, 0.0, 0.0, 0.1, 0.3, 0.0, 0.3, 0.0};
}

std::vector<int32_t> DefaultClusterSizes() { return {30, 40, 30}; }

std::vector<double> CircularProbabilities(int32_t n) {
  if (n < 2) throw InputError("circular graph needs n >= 2");
  std::vector<double> p(static_cast<size_t>(n) * n);
  double total = 0.0;
  for (int32_t i = 0; i < n; ++i) {
    for (int32_t j = 0; j < n; ++j) {
      double d;
      if (i == j) {
        d = 2.0 / n;
      } else {
        const double a = 2.0 * std::numbers::pi * i / n, b = 2.0 * std::numbers::pi * j / n;
        d = std::hypot(std::cos(a) - std::cos(b), std::sin(a) - std::sin(b));
      }
      total += p[static_cast<size_t>(i) * n + j] = 1.0 / d;
    }
  }
  for (double& x : p) x /= total;
  return p;
}

double CircularMutualInformation(int32_t n) {
  const std::vector<double> p = CircularProbabilities(n);
  std::vector<double> row(n, 0.0), col(n, 0.0);
  for (int32_t i = 0; i < n; ++i) {
    for (int32_t j = 0; j < n; ++j) {
      row[i] += p[static_cast<size_t>(i) * n + j];
      col[j] += p[static_cast<size_t>(i) * n + j];
    }
  }
  double mi = 0.0;
  for (int32_t i = 0; i < n; ++i) {
    for (int32_t j = 0; j < n; ++j) {
      const double pij = p[static_cast<size_t>(i) * n + j];
      mi += pij * std::log(pij / (row[i] * col[j]));
    }
  }
  return mi;
}

GeneratedGraph GenCircular(int32_t n, int64_t m, uint64_t seed) {
  RequireEdges(m);
  GeneratedGraph out;
  out.true_probabilities = CircularProbabilities(n);
  const std::vector<double> cumulative = Cumulative(out.true_probabilities);
  Rng rng(seed);
  out.draws.reserve(m);
  for (int64_t e = 0; e < m; ++e) {
    const size_t cell = DrawIndex(rng, cumulative);
    out.draws.push_back({static_cast<int32_t>(cell / n), static_cast<int32_t>(cell % n), 1});
  }
  out.blocks.assign(n, 0);
  out.sample = UnifiedSample(n, out.draws);
  return out;
}

std::vector<int32_t> NearEqualBlocks(int32_t n, int32_t blocks) {
  if (blocks < 1 || blocks > n) throw InputError("block count must lie in [1, n]");
  std::vector<int32_t> assign(n);
  const int32_t base = n / blocks, extra = n % blocks;
  int32_t v = 0;
  for (int32_t b = 0; b < blocks; ++b) {
    const int32_t size = base + (b < extra ? 1 : 0);
    for (int32_t i = 0; i < size; ++i) assign[v++] = b;
  }
  return assign;
}

GeneratedGraph GenBlockDiagonal(int32_t n, int32_t blocks, double noise_rate, int64_t m,
                                uint64_t seed) {
  RequireEdges(m);
  if (n < 1) throw InputError("n must be at least 1");
  RequireProbability(noise_rate, "noise rate");
  GeneratedGraph out;
  out.blocks = NearEqualBlocks(n, blocks);
  out.block_count = blocks;
  std::vector<int32_t> first(blocks + 1, 0);
  for (int32_t v = 0; v < n; ++v) first[out.blocks[v] + 1] = v + 1;
  Rng rng(seed);
  out.draws.reserve(m);
  for (int64_t e = 0; e < m; ++e) {
    int32_t i, j;
    if (rng.Bernoulli(noise_rate)) {
      i = static_cast<int32_t>(rng.Uniform(n));
      j = static_cast<int32_t>(rng.Uniform(n));
    } else {
      i = static_cast<int32_t>(rng.Uniform(n));
      const int32_t b = out.blocks[i];
      j = first[b] + static_cast<int32_t>(rng.Uniform(first[b + 1] - first[b]));
    }
    out.draws.push_back({i, j, 1});
  }
  out.sample = UnifiedSample(n, out.draws);
  return out;
}

GeneratedGraph GenBlockmodel(const std::vector<double>& matrix, const std::vector<int32_t>& sizes,
                             int64_t m, uint64_t seed) {
  RequireEdges(m);
  const size_t k = sizes.size();
  if (k == 0) throw InputError("blockmodel needs at least one cluster");
  if (matrix.size() != k * k) throw InputError("block matrix must be k x k for k cluster sizes");
  double total = 0.0;
  for (double p : matrix) {
    if (!(p >= 0.0)) throw InputError("block matrix entries must be non-negative");
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    throw InputError("block matrix must sum to 1, got " + std::to_string(total));
  }
  GeneratedGraph out;
  std::vector<int32_t> first(k + 1, 0);
  for (size_t c = 0; c < k; ++c) {
    if (sizes[c] < 1) throw InputError("cluster sizes must be positive");
    first[c + 1] = first[c] + sizes[c];
    for (int32_t i = 0; i < sizes[c]; ++i) out.blocks.push_back(static_cast<int32_t>(c));
  }
  out.block_count = static_cast<int32_t>(k);
  const std::vector<double> cumulative = Cumulative(matrix);
  Rng rng(seed);
  out.draws.reserve(m);
  for (int64_t e = 0; e < m; ++e) {
    const size_t cell = DrawIndex(rng, cumulative);
    const size_t a = cell / k, b = cell % k;
    const int32_t i = first[a] + static_cast<int32_t>(rng.Uniform(sizes[a]));
    const int32_t j = first[b] + static_cast<int32_t>(rng.Uniform(sizes[b]));
    out.draws.push_back({i, j, 1});
  }
  out.sample = UnifiedSample(first[k], out.draws);
  return out;
}

GeneratedGraph GenUndirectedPattern(int32_t clusters, int32_t cluster_size, double intra,
                                    double inter, uint64_t seed) {
  if (clusters < 1 || cluster_size < 1) throw InputError("cluster count and size must be positive");
  RequireProbability(intra, "intra proportion");
  RequireProbability(inter, "inter proportion");
  GeneratedGraph out;
  const int32_t n = clusters * cluster_size;
  out.blocks.resize(n);
  for (int32_t v = 0; v < n; ++v) out.blocks[v] = v / cluster_size;
  out.block_count = clusters;
  Rng rng(seed);
  for (int32_t u = 0; u < n; ++u) {
    for (int32_t v = u + 1; v < n; ++v) {
      if (rng.Bernoulli(out.blocks[u] == out.blocks[v] ? intra : inter)) {
        out.draws.push_back({u, v, 1});
        out.draws.push_back({v, u, 1});
      }
    }
  }
  if (out.draws.empty()) throw InputError("no edges");
  out.sample = UnifiedSample(n, out.draws);
  return out;
}

GeneratedGraph Generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case Family::kCircular:
      return GenCircular(spec.n, spec.m, spec.seed);
    case Family::kBlockDiagonal:
      return GenBlockDiagonal(spec.n, spec.blocks, spec.noise_rate, spec.m, spec.seed);
    case Family::kBlockmodel:
      return GenBlockmodel(spec.block_matrix.empty() ? DefaultBlockMatrix() : spec.block_matrix,
                           spec.cluster_sizes.empty() ? DefaultClusterSizes() : spec.cluster_sizes,
                           spec.m, spec.seed);
    case Family::kUndirectedPattern:
      return GenUndirectedPattern(spec.pattern_clusters, spec.pattern_cluster_size, spec.intra,
                                  spec.inter, spec.seed);
  }
  throw InputError("unknown generator family");
}

void WriteDraws(std::ostream& out, const GeneratedGraph& graph) {
  const auto& labels = graph.sample->labels(Side::kSource);
  std::string line;
  for (const Edge& e : graph.draws) {
    line.clear();
    line.append(labels[e.source]).push_back('\t');
    line.append(labels[e.target]).push_back('\n');
    out << line;
  }
}

void WriteBlockLabels(std::ostream& out, const GeneratedGraph& graph) {
  const auto& labels = graph.sample->labels(Side::kSource);
  out << "# vertex\tblock\n";
  for (size_t v = 0; v < graph.blocks.size(); ++v) {
    out << labels[v] << '\t' << graph.blocks[v] << '\n';
  }
}

}  // namespace modl
