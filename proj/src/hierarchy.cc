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

#include "modl/hierarchy.h"

#include "merge_engine.h"
#include "modl/error.h"

namespace modl {

Dendrogram BuildDendrogram(const Coclustering& model) {
  Dendrogram out{model, {}};
  internal::MergeEngine engine(model);
  for (;;) {
    const internal::MergeEngine::Candidate best = engine.Best();
    if (!best.valid) break;
    MergeRecord record;
    record.side = best.side;
    record.a = engine.DenseId(best.side, best.a);
    record.b = engine.DenseId(best.side, best.b);
    record.delta = engine.Apply(best.side, best.a, best.b);
    record.criterion = engine.total();
    record.source_clusters = engine.cluster_count(Side::kSource);
    record.target_clusters = engine.cluster_count(Side::kTarget);
    out.merges.push_back(record);
  }
  return out;
}

Coclustering Replay(const Dendrogram& dendrogram, size_t steps) {
  if (steps > dendrogram.merges.size()) throw InputError("replay past the root");
  Coclustering model = dendrogram.initial;
  for (size_t s = 0; s < steps; ++s) {
    const MergeRecord& r = dendrogram.merges[s];
    model.Merge(r.side, r.a, r.b);
  }
  return model;
}

CutResult Cut(const Dendrogram& dendrogram, int32_t source_clusters, int32_t target_clusters) {
  const Coclustering& init = dendrogram.initial;
  if (source_clusters < 1 || source_clusters > init.cluster_count(Side::kSource) ||
      target_clusters < 1 || target_clusters > init.cluster_count(Side::kTarget)) {
    throw InputError("cut targets must lie between 1 and the initial cluster counts (" +
                     std::to_string(init.cluster_count(Side::kSource)) + ", " +
                     std::to_string(init.cluster_count(Side::kTarget)) + ")");
  }
  int32_t ks = init.cluster_count(Side::kSource);
  int32_t kt = init.cluster_count(Side::kTarget);
  size_t steps = 0;
  while ((ks > source_clusters || kt > target_clusters) && steps < dendrogram.merges.size()) {
    ks = dendrogram.merges[steps].source_clusters;
    kt = dendrogram.merges[steps].target_clusters;
    ++steps;
  }
  CutResult out{Replay(dendrogram, steps), steps, ks, kt, false};
  out.exact = ks == source_clusters && kt == target_clusters;
  return out;
}

CoclusterTable MakeCoclusterTable(const Coclustering& model) {
  CoclusterTable t;
  t.rows = model.cluster_count(Side::kSource);
  t.cols = model.cluster_count(Side::kTarget);
  t.counts = model.cells();
  const double m = static_cast<double>(model.sample().edge_count());
  t.percent.reserve(t.counts.size());
  for (int64_t c : t.counts) t.percent.push_back(m > 0 ? 100.0 * c / m : 0.0);
  for (int32_t a = 0; a < t.rows; ++a) t.row_sizes.push_back(model.cluster_size(Side::kSource, a));
  for (int32_t b = 0; b < t.cols; ++b) t.col_sizes.push_back(model.cluster_size(Side::kTarget, b));
  return t;
}

}  // namespace modl
