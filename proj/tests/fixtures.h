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

#ifndef MODL_TESTS_FIXTURES_H_
#define MODL_TESTS_FIXTURES_H_

#include <memory>
#include <string>
#include <vector>

#include "modl/graph.h"

namespace modl::testing {

// Eight-edge simple directed graph over A..G.
inline constexpr const char* kSimpleGraph =
    "A\tD\nA\tF\nB\tA\nB\tC\nB\tD\nD\tG\nF\tG\nG\tE\n";

// Thirteen-edge multigraph over A..G with unified labels.
inline constexpr const char* kMultigraph =
    "source\ttarget\tcount\n"
    "A\tB\t1\n"
    "B\tC\t1\nB\tG\t1\n"
    "C\tC\t1\nC\tG\t1\n"
    "D\tB\t1\nD\tE\t1\n"
    "E\tC\t1\nE\tG\t1\n"
    "F\tE\t2\n"
    "G\tC\t1\nG\tG\t1\n";

inline std::shared_ptr<const MultigraphSample> Multigraph() {
  ParseOptions options;
  options.unify_vertices = true;
  options.vocabulary = {"A", "B", "C", "D", "E", "F", "G"};
  return std::make_shared<const MultigraphSample>(ParseEdgeList(kMultigraph, options));
}

// Source clusters {A,D,F},{B,C,E,G}; target clusters {A,D,F},{B,E},{C,G}.
inline std::vector<int32_t> MultigraphSourcePartition() { return {0, 1, 1, 0, 1, 0, 1}; }
inline std::vector<int32_t> MultigraphTargetPartition() { return {0, 1, 2, 0, 1, 0, 2}; }

}  // namespace modl::testing

#endif  // MODL_TESTS_FIXTURES_H_
