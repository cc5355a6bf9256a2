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

#ifndef MODL_BENCH_H_
#define MODL_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "modl/optimizer.h"
#include "modl/synthgen.h"

namespace modl {

struct ExperimentSpec {
  std::string name;
  GeneratorSpec generator;  // m and seed are set per cell
  std::vector<int64_t> sizes;
  int32_t repetitions = 10;
  FitConfig fit;  // seed is set per cell
  uint64_t seed = 0;
  // Cells fitted concurrently; rows do not depend on it.
  int32_t threads = 1;
};

// Named grids: circular, blockmodel, pure-10-2, noisy-10-2, pure-100-10,
// noisy-100-10, pure-1000-5, noisy-1000-5, random-100, random-1000. The
// paper-scale flag restores 100 repetitions and the full size ranges.
ExperimentSpec PresetExperiment(const std::string& name, bool paper_scale);
std::vector<std::string> PresetNames();

struct ConvergenceRow {
  int64_t size = 0;
  int32_t rep = 0;
  int32_t source_clusters = 0;
  int32_t target_clusters = 0;
  double mi_modl = 0.0;
  double mi_modl_lh = 0.0;
  double mi_empirical = 0.0;
  double mi_laplace = 0.0;
  double mi_true = 0.0;
  double seconds = 0.0;
  double criterion_null = 0.0;
  double criterion_best = 0.0;
};

struct CurveRow {
  int64_t size = 0;
  int32_t rep = 0;
  int32_t source_clusters = 0;
  int32_t target_clusters = 0;
  double seconds = 0.0;
  bool recovered = false;  // both sides equal the generator's block count
};

// Generator and fit seeds of one (size index, rep) cell.
uint64_t CellSeed(uint64_t master, size_t size_index, int32_t rep);

// Requires the circular family. Rows in (size, rep) order. Errors are
// rethrown with the failing cell in the message.
std::vector<ConvergenceRow> RunConvergenceExperiment(const ExperimentSpec& spec);
std::vector<CurveRow> RunClusterCurve(const ExperimentSpec& spec);

// Fixed header, one line per row, then `mean` and `std` lines per size in
// the rep column.
void WriteConvergenceCsv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void WriteCurveCsv(std::ostream& out, const std::vector<CurveRow>& rows);

std::string ConvergenceSummaryJson(const ExperimentSpec& spec,
                                   const std::vector<ConvergenceRow>& rows);
std::string CurveSummaryJson(const ExperimentSpec& spec, const std::vector<CurveRow>& rows);

}  // namespace modl

#endif  // MODL_BENCH_H_
