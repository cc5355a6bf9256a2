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

#ifndef MODL_MODEL_IO_H_
#define MODL_MODEL_IO_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modl/coclustering.h"
#include "modl/density.h"
#include "modl/hierarchy.h"
#include "modl/optimizer.h"

namespace modl {

inline constexpr const char* kModelSchema = "modl-coclustering/1";
inline constexpr const char* kDendrogramSchema = "modl-dendrogram/1";

struct ModelMetadata {
  std::optional<uint64_t> seed;
  // Ingestion emitted each input line in both directions.
  bool undirected = false;
  // Present for fitted models.
  std::optional<int32_t> best_round;
  std::vector<RoundLog> rounds;
};

// Model document: schema, tool version, seed, graph sizes, per-side labels,
// assignments and cluster compositions, nonzero cocluster counts, criterion
// breakdown and fit log. Output is deterministic: round wall times are
// left out.
std::string ModelToJson(const Coclustering& model, const ModelMetadata& metadata = {});

// Rebuilds a model of `sample` from a model document. Throws ParseError for
// malformed JSON or schema mismatch, and ConsistencyError when the labels,
// assignments or stored counts disagree with the sample.
Coclustering ModelFromJson(const std::string& text,
                           std::shared_ptr<const MultigraphSample> sample,
                           ModelMetadata* metadata = nullptr);

std::string CriterionToJson(const CriterionBreakdown& criterion);
std::string MetricsToJson(const MetricsReport& report, bool bits = false);
std::string DendrogramToJson(const Dendrogram& dendrogram);
std::string CoclusterTableToJson(const CoclusterTable& table, const CutResult* cut = nullptr);

// Tab-separated table with counts and two-decimal percentages, row and
// column totals.
std::string CoclusterTableToText(const CoclusterTable& table);

}  // namespace modl

#endif  // MODL_MODEL_IO_H_
