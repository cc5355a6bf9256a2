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

#ifndef MODL_SYNTHGEN_H_
#define MODL_SYNTHGEN_H_

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "modl/graph.h"

namespace modl {

enum class Family { kCircular, kBlockDiagonal, kBlockmodel, kUndirectedPattern };

const char* FamilyName(Family family);
// Accepts "circular", "block-diagonal", "blockmodel", "undirected-pattern"
// (underscores allowed). Throws InputError.
Family ParseFamily(const std::string& name);

struct GeneratorSpec {
  Family family = Family::kCircular;
  int64_t m = 1000;
  uint64_t seed = 0;

  // circular, block-diagonal
  int32_t n = 100;
  // block-diagonal
  int32_t blocks = 2;
  double noise_rate = 0.0;
  // blockmodel: row-major k x k cluster-pair probabilities and cluster
  // sizes; empty means the three-cluster default.
  std::vector<double> block_matrix;
  std::vector<int32_t> cluster_sizes;
  // undirected-pattern
  int32_t pattern_clusters = 4;
  int32_t pattern_cluster_size = 10;
  double intra = 0.8;
  double inter = 0.1;
};

// Three clusters of 30, 40 and 30 vertices with edge mass A->A 0.3,
// B->B 0.1, B->C 0.3 and C->B 0.3.
std::vector<double> DefaultBlockMatrix();
std::vector<int32_t> DefaultClusterSizes();

struct GeneratedGraph {
  std::shared_ptr<const MultigraphSample> sample;  // unified, labels v0..v{n-1}
  std::vector<Edge> draws;                         // edges in draw order, count 1
  std::vector<int32_t> blocks;                     // ground-truth block per vertex
  int32_t block_count = 1;
  // Circular family: n x n row-major edge probabilities.
  std::vector<double> true_probabilities;
};

// m edges with p_ij proportional to 1 / d_ij on n points of the unit circle,
// d_ii = 2 / n. Requires n >= 2, m >= 1.
GeneratedGraph GenCircular(int32_t n, int64_t m, uint64_t seed);
std::vector<double> CircularProbabilities(int32_t n);
// Mutual information of the circular edge distribution, in nats.
double CircularMutualInformation(int32_t n);

// With probability noise_rate an edge is uniform over the n x n grid,
// otherwise a uniform source and a uniform target in the source's block.
// Blocks split n near-equally, the first n mod K one vertex larger.
GeneratedGraph GenBlockDiagonal(int32_t n, int32_t blocks, double noise_rate, int64_t m,
                                uint64_t seed);
std::vector<int32_t> NearEqualBlocks(int32_t n, int32_t blocks);

// Cluster pair drawn from the matrix, then uniform endpoints within the
// clusters. Throws InputError unless the matrix sums to 1 within 1e-9.
GeneratedGraph GenBlockmodel(const std::vector<double>& matrix,
                             const std::vector<int32_t>& sizes, int64_t m, uint64_t seed);

// Simple undirected graph: each vertex pair is an edge with probability
// intra (same cluster) or inter, emitted in both directions. Throws
// InputError("no edges") if nothing is drawn.
GeneratedGraph GenUndirectedPattern(int32_t clusters, int32_t cluster_size, double intra,
                                    double inter, uint64_t seed);

// Validates the generator parameters and dispatches on the family.
GeneratedGraph Generate(const GeneratorSpec& spec);

// One `v<TAB>w` line per draw.
void WriteDraws(std::ostream& out, const GeneratedGraph& graph);
// `# vertex<TAB>block` header, then one line per vertex.
void WriteBlockLabels(std::ostream& out, const GeneratedGraph& graph);

}  // namespace modl

#endif  // MODL_SYNTHGEN_H_
