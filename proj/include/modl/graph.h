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

#ifndef MODL_GRAPH_H_
#define MODL_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace modl {

enum class Side { kSource = 0, kTarget = 1 };

inline constexpr int SideIndex(Side s) { return static_cast<int>(s); }
inline constexpr Side Other(Side s) {
  return s == Side::kSource ? Side::kTarget : Side::kSource;
}
const char* SideName(Side s);

struct Edge {
  int32_t source = 0;
  int32_t target = 0;
  int64_t count = 1;
};

// Observed directed multigraph: two vertex universes (source, target), the
// sparse table of edge counts m_ij and the degree vectors. Immutable.
class MultigraphSample {
 public:
  MultigraphSample() = default;

  // Duplicate (source, target) entries are accumulated. Counts must be
  // positive and indices in range. When `unified` is set the two label
  // lists must be identical.
  MultigraphSample(std::vector<std::string> source_labels,
                   std::vector<std::string> target_labels,
                   std::vector<Edge> edges, bool unified = false);

  int32_t vertex_count(Side side) const {
    return static_cast<int32_t>(labels_[SideIndex(side)].size());
  }
  int32_t source_count() const { return vertex_count(Side::kSource); }
  int32_t target_count() const { return vertex_count(Side::kTarget); }

  // Total number of edges m.
  int64_t edge_count() const { return edge_count_; }

  // Nonzero cells sorted by (source, target).
  const std::vector<Edge>& edges() const { return edges_; }

  const std::vector<std::string>& labels(Side side) const {
    return labels_[SideIndex(side)];
  }
  const std::vector<int64_t>& degrees(Side side) const {
    return degrees_[SideIndex(side)];
  }
  const std::vector<int64_t>& out_degrees() const { return degrees_[0]; }
  const std::vector<int64_t>& in_degrees() const { return degrees_[1]; }

  bool unified() const { return unified_; }

  std::optional<int32_t> FindVertex(Side side, std::string_view label) const;

 private:
  std::vector<std::string> labels_[2];
  std::vector<Edge> edges_;
  std::vector<int64_t> degrees_[2];
  int64_t edge_count_ = 0;
  bool unified_ = false;
};

// Row and column adjacency views of the sample plus a hashed cell index.
class SparseContingency {
 public:
  struct Entry {
    int32_t index;
    int64_t count;
  };

  explicit SparseContingency(const MultigraphSample& sample);

  // Out-edges of a source vertex sorted by target index.
  std::span<const Entry> Row(int32_t source) const;
  // In-edges of a target vertex sorted by source index.
  std::span<const Entry> Column(int32_t target) const;
  std::span<const Entry> Adjacent(Side side, int32_t vertex) const {
    return side == Side::kSource ? Row(vertex) : Column(vertex);
  }

  // m_ij, or nullopt for an empty cell.
  std::optional<int64_t> Lookup(int32_t source, int32_t target) const;

  int64_t Total() const { return total_; }
  size_t NonzeroCount() const { return row_entries_.size(); }

 private:
  std::vector<size_t> row_offsets_, col_offsets_;
  std::vector<Entry> row_entries_, col_entries_;
  std::unordered_map<uint64_t, int64_t> cells_;
  int64_t total_ = 0;
};

SparseContingency BuildContingency(const MultigraphSample& sample);

struct ParseOptions {
  // Use one label space for both sides.
  bool unify_vertices = false;
  // Emit every line in both directions; implies unify_vertices.
  bool undirected = false;
  // Vertices declared up front (indices follow this order, then unseen
  // labels in first-appearance order). Applies to both sides.
  std::vector<std::string> vocabulary;
};

// Tab-separated `source<TAB>target[<TAB>count]`, `#` comments, an optional
// `source<TAB>target[<TAB>count]` header line. Throws ParseError.
MultigraphSample ParseEdgeList(std::istream& in, const ParseOptions& options = {});
MultigraphSample ParseEdgeList(std::string_view text, const ParseOptions& options = {});
MultigraphSample ReadEdgeListFile(const std::string& path,
                                  const ParseOptions& options = {});

// One `source<TAB>target<TAB>count` line per nonzero cell.
void WriteEdgeList(std::ostream& out, const MultigraphSample& sample);

// First tab-separated column of each non-comment line.
std::vector<std::string> ReadVocabularyFile(const std::string& path);

}  // namespace modl

#endif  // MODL_GRAPH_H_
