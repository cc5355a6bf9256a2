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

#include "modl/optimizer.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "merge_engine.h"
#include "modl/error.h"
#include "modl/rng.h"

namespace modl {

int32_t DefaultInitialClusters(int64_t edge_count) {
  auto k = static_cast<int64_t>(std::ceil(std::sqrt(static_cast<double>(edge_count))));
  while (k * k < edge_count) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= edge_count) --k;
  return k < 2 ? 0 : static_cast<int32_t>(k);
}

Coclustering InitialSolution(std::shared_ptr<const MultigraphSample> sample,
                             int32_t max_clusters, uint64_t seed, InitialLayout layout,
                             std::shared_ptr<Combinatorics> combinatorics) {
  if (max_clusters < 0) throw InputError("max_clusters must be non-negative");
  Rng rng(seed);
  std::vector<int32_t> assign[2];
  for (int s = 0; s < 2; ++s) {
    const int32_t n = sample->vertex_count(static_cast<Side>(s));
    const int32_t k = max_clusters == 0 ? n : std::min(max_clusters, n);
    assign[s].resize(n);
    if (layout == InitialLayout::kBalanced) {
      std::vector<int32_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      rng.Shuffle(order.begin(), order.end());
      for (int32_t i = 0; i < n; ++i) assign[s][order[i]] = i % k;
      continue;
    }
    // Relabel in order of first use so the drawn labels are contiguous.
    std::vector<int32_t> relabel(k, -1);
    int32_t used = 0;
    for (int32_t v = 0; v < n; ++v) {
      int32_t& label = relabel[rng.Uniform(k)];
      if (label < 0) label = used++;
      assign[s][v] = label;
    }
  }
  return Coclustering::FromPartitions(std::move(sample), std::move(assign[0]),
                                      std::move(assign[1]), std::move(combinatorics));
}

Coclustering Gbum(const Coclustering& model, std::vector<double>* trace) {
  internal::MergeEngine engine(model);
  bool merged = false;
  for (;;) {
    const internal::MergeEngine::Candidate best = engine.Best();
    if (!best.valid) break;
    if (!(engine.ExactDelta(best.side, best.a, best.b) < -kImprovementTolerance)) break;
    engine.Apply(best.side, best.a, best.b);
    merged = true;
    if (trace) trace->push_back(engine.total());
  }
  return merged ? engine.ToModel() : model;
}

Coclustering PostOptimize(Coclustering model, int32_t passes, std::vector<double>* trace) {
  for (int32_t pass = 0; pass < passes; ++pass) {
    bool moved = false;
    for (Side side : {Side::kSource, Side::kTarget}) {
      const int32_t n = model.sample().vertex_count(side);
      for (int32_t v = 0; v < n; ++v) {
        if (model.cluster_count(side) < 2) break;
        const Coclustering::MoveChoice choice = model.BestMove(side, v);
        if (choice.delta < -kImprovementTolerance) {
          model.Move(side, v, choice.dest);
          moved = true;
          if (trace) trace->push_back(model.criterion().total);
        }
      }
    }
    if (!moved) break;
  }
  return model;
}

Coclustering FitRound(std::shared_ptr<const MultigraphSample> sample,
                      int32_t max_clusters, uint64_t seed, int32_t passes,
                      InitialLayout layout, std::shared_ptr<Combinatorics> combinatorics) {
  Coclustering model =
      InitialSolution(std::move(sample), max_clusters, seed, layout, std::move(combinatorics));
  model = PostOptimize(std::move(model), passes);
  model = Gbum(model);
  return PostOptimize(std::move(model), passes);
}

FitResult VnsFit(std::shared_ptr<const MultigraphSample> sample, const FitConfig& config) {
  if (config.rounds < 1) throw InputError("rounds must be at least 1");
  if (config.post_opt_passes < 0) throw InputError("post_opt_passes must be non-negative");
  const int32_t max_clusters = config.max_initial_clusters
                                   ? *config.max_initial_clusters
                                   : DefaultInitialClusters(sample->edge_count());
  if (max_clusters < 0) throw InputError("max_initial_clusters must be non-negative");
  auto comb = Combinatorics::Shared();

  std::vector<std::optional<Coclustering>> models(config.rounds);
  std::vector<RoundLog> logs(config.rounds);
  std::mutex progress_mutex;
  auto run = [&](int32_t r) {
    const auto start = std::chrono::steady_clock::now();
    RoundLog& log = logs[r];
    log.round = r;
    log.seed = config.seed + static_cast<uint64_t>(r);
    const InitialLayout layout = r == 0 ? InitialLayout::kBalanced : InitialLayout::kUniform;
    Coclustering model = InitialSolution(sample, max_clusters, log.seed, layout, comb);
    log.initial_source_clusters = model.cluster_count(Side::kSource);
    log.initial_target_clusters = model.cluster_count(Side::kTarget);
    model = PostOptimize(std::move(model), config.post_opt_passes);
    model = Gbum(model);
    model = PostOptimize(std::move(model), config.post_opt_passes);
    log.final_source_clusters = model.cluster_count(Side::kSource);
    log.final_target_clusters = model.cluster_count(Side::kTarget);
    log.criterion = model.criterion().total;
    log.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    models[r].emplace(std::move(model));
    if (config.progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      config.progress(log);
    }
  };

  const int32_t workers = std::max(1, std::min(config.threads, config.rounds));
  if (workers == 1) {
    for (int32_t r = 0; r < config.rounds; ++r) run(r);
  } else {
    std::atomic<int32_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int32_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int32_t r; (r = next.fetch_add(1)) < config.rounds;) {
          try {
            run(r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  int32_t best = 0;
  for (int32_t r = 1; r < config.rounds; ++r) {
    if (logs[r].criterion < logs[best].criterion) best = r;
  }
  Coclustering null_model = Coclustering::Null(sample, comb);
  if (null_model.criterion().total < logs[best].criterion) {
    CriterionBreakdown crit = null_model.criterion();
    return FitResult{std::move(null_model), crit, FitResult::kNullRound, std::move(logs)};
  }
  Coclustering& chosen = *models[best];
  CriterionBreakdown crit = chosen.criterion();
  return FitResult{std::move(chosen), crit, best, std::move(logs)};
}

}  // namespace modl
