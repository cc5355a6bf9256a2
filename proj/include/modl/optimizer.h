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

#ifndef MODL_OPTIMIZER_H_
#define MODL_OPTIMIZER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "modl/coclustering.h"

namespace modl {

// Merges and moves are accepted only when they lower the criterion by more
// than this (nats); smaller deltas are within evaluation rounding.
inline constexpr double kImprovementTolerance = 1e-9;

struct RoundLog {
  int32_t round = 0;
  uint64_t seed = 0;
  int32_t initial_source_clusters = 0;
  int32_t initial_target_clusters = 0;
  int32_t final_source_clusters = 0;
  int32_t final_target_clusters = 0;
  double criterion = 0.0;
  double seconds = 0.0;
};

struct FitConfig {
  int32_t rounds = 10;
  uint64_t seed = 0;
  // Defaults to DefaultInitialClusters(m).
  std::optional<int32_t> max_initial_clusters;
  int32_t post_opt_passes = 2;
  // Worker threads for rounds; results do not depend on this.
  int32_t threads = 1;
  // Called once per finished round, serialized, in completion order.
  std::function<void(const RoundLog&)> progress;
};

struct FitResult {
  // best_round value when no round beat the null model.
  static constexpr int32_t kNullRound = -1;

  Coclustering best_model;
  CriterionBreakdown best_criterion;
  int32_t best_round = 0;
  std::vector<RoundLog> rounds;  // indexed by round
};

// ceil(sqrt(m)), or 0 when that is below 2, meaning one cluster per vertex.
int32_t DefaultInitialClusters(int64_t edge_count);

enum class InitialLayout {
  // Each vertex draws one of min(max_clusters, n) labels uniformly; labels
  // nobody drew are dropped, so fewer clusters may remain.
  kUniform,
  // Shuffled vertices dealt round-robin: exactly min(max_clusters, n)
  // clusters of near-equal size.
  kBalanced,
};

// max_clusters = 0 means one label per vertex (with kBalanced, the maximal
// model).
Coclustering InitialSolution(std::shared_ptr<const MultigraphSample> sample,
                             int32_t max_clusters, uint64_t seed,
                             InitialLayout layout = InitialLayout::kUniform,
                             std::shared_ptr<Combinatorics> combinatorics = nullptr);

// Greedy bottom-up merging: applies the best strictly improving cluster
// merge over both sides until none improves. When `trace` is given, the
// criterion after each accepted merge is appended to it.
Coclustering Gbum(const Coclustering& model, std::vector<double>* trace = nullptr);

// Up to `passes` sweeps, each moving every source vertex and then every
// target vertex to its best existing cluster when that strictly improves
// the criterion. Stops early after a sweep without moves.
Coclustering PostOptimize(Coclustering model, int32_t passes,
                          std::vector<double>* trace = nullptr);

// One pipeline: initial solution, post-optimization, merging,
// post-optimization.
Coclustering FitRound(std::shared_ptr<const MultigraphSample> sample,
                      int32_t max_clusters, uint64_t seed, int32_t passes,
                      InitialLayout layout = InitialLayout::kUniform,
                      std::shared_ptr<Combinatorics> combinatorics = nullptr);

// Runs config.rounds pipelines with seeds config.seed + round and keeps the
// lowest criterion. Round 0 starts from the balanced layout, the others from
// the uniform one (lowest round index on ties). The null model is returned
// instead if it is strictly better than every round.
FitResult VnsFit(std::shared_ptr<const MultigraphSample> sample, const FitConfig& config);

}  // namespace modl

#endif  // MODL_OPTIMIZER_H_
