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

#include "modl/graph.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "modl/error.h"

namespace modl {
namespace {

uint64_t CellKey(int32_t i, int32_t j) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
         static_cast<uint32_t>(j);
}

class LabelIndex {
 public:
  int32_t Intern(const std::string& label) {
    auto [it, inserted] =
        index_.try_emplace(label, static_cast<int32_t>(labels_.size()));
    if (inserted) labels_.push_back(label);
    return it->second;
  }
  std::vector<std::string> Release() { return std::move(labels_); }

 private:
  std::unordered_map<std::string, int32_t> index_;
  std::vector<std::string> labels_;
};

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

bool IsHeader(const std::vector<std::string_view>& fields) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
  };
  if (fields.size() < 2 || lower(fields[0]) != "source" ||
      lower(fields[1]) != "target") {
    return false;
  }
  return fields.size() == 2 || lower(fields[2]) == "count";
}

}  // namespace

const char* SideName(Side s) { return s == Side::kSource ? "source" : "target"; }

MultigraphSample::MultigraphSample(std::vector<std::string> source_labels,
                                   std::vector<std::string> target_labels,
                                   std::vector<Edge> edges, bool unified)
    : unified_(unified) {
  if (unified && source_labels != target_labels) {
    throw InputError("unified sample requires identical label lists");
  }
  labels_[0] = std::move(source_labels);
  labels_[1] = std::move(target_labels);
  const auto ns = static_cast<int64_t>(labels_[0].size());
  const auto nt = static_cast<int64_t>(labels_[1].size());
  for (const Edge& e : edges) {
    if (e.source < 0 || e.source >= ns || e.target < 0 || e.target >= nt) {
      throw InputError("edge endpoint out of range");
    }
    if (e.count <= 0) throw InputError("edge count must be positive");
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (const Edge& e : edges) {
    if (!edges_.empty() && edges_.back().source == e.source &&
        edges_.back().target == e.target) {
      edges_.back().count += e.count;
    } else {
      edges_.push_back(e);
    }
  }
  degrees_[0].assign(ns, 0);
  degrees_[1].assign(nt, 0);
  for (const Edge& e : edges_) {
    degrees_[0][e.source] += e.count;
    degrees_[1][e.target] += e.count;
    edge_count_ += e.count;
  }
}

std::optional<int32_t> MultigraphSample::FindVertex(Side side,
                                                    std::string_view label) const {
  const auto& labels = labels_[SideIndex(side)];
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int32_t>(it - labels.begin());
}

SparseContingency::SparseContingency(const MultigraphSample& sample)
    : total_(sample.edge_count()) {
  const int32_t ns = sample.source_count();
  const int32_t nt = sample.target_count();
  const auto& edges = sample.edges();
  row_offsets_.assign(ns + 1, 0);
  col_offsets_.assign(nt + 1, 0);
  for (const Edge& e : edges) {
    ++row_offsets_[e.source + 1];
    ++col_offsets_[e.target + 1];
  }
  for (int32_t i = 0; i < ns; ++i) row_offsets_[i + 1] += row_offsets_[i];
  for (int32_t j = 0; j < nt; ++j) col_offsets_[j + 1] += col_offsets_[j];
  row_entries_.resize(edges.size());
  col_entries_.resize(edges.size());
  std::vector<size_t> col_fill(col_offsets_.begin(), col_offsets_.end() - 1);
  cells_.reserve(edges.size());
  // Edges are sorted by (source, target), so rows come out sorted by target
  // and columns sorted by source.
  for (size_t k = 0; k < edges.size(); ++k) {
    const Edge& e = edges[k];
    row_entries_[k] = {e.target, e.count};
    col_entries_[col_fill[e.target]++] = {e.source, e.count};
    cells_.emplace(CellKey(e.source, e.target), e.count);
  }
}

std::span<const SparseContingency::Entry> SparseContingency::Row(
    int32_t source) const {
  return {row_entries_.data() + row_offsets_[source],
          row_offsets_[source + 1] - row_offsets_[source]};
}

std::span<const SparseContingency::Entry> SparseContingency::Column(
    int32_t target) const {
  return {col_entries_.data() + col_offsets_[target],
          col_offsets_[target + 1] - col_offsets_[target]};
}

std::optional<int64_t> SparseContingency::Lookup(int32_t source,
                                                 int32_t target) const {
  auto it = cells_.find(CellKey(source, target));
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

SparseContingency BuildContingency(const MultigraphSample& sample) {
  return SparseContingency(sample);
}

MultigraphSample ParseEdgeList(std::istream& in, const ParseOptions& options) {
  const bool unify = options.unify_vertices || options.undirected;
  LabelIndex sources, targets;
  for (const auto& label : options.vocabulary) {
    sources.Intern(label);
    if (!unify) targets.Intern(label);
  }
  LabelIndex& target_index = unify ? sources : targets;

  std::vector<Edge> edges;
  std::string line;
  long line_number = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = SplitTabs(line);
    if (!seen_content) {
      seen_content = true;
      if (IsHeader(fields)) continue;
    }
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected 2 or 3 tab-separated columns, got " +
                           std::to_string(fields.size()),
                       line_number);
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError("empty vertex label", line_number);
    }
    int64_t count = 1;
    if (fields.size() == 3) {
      const auto f = fields[2];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), count);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError("count is not an integer: '" + std::string(f) + "'",
                         line_number);
      }
      if (count <= 0) {
        throw ParseError("count must be positive: " + std::to_string(count),
                         line_number);
      }
    }
    const int32_t s = sources.Intern(std::string(fields[0]));
    const int32_t t = target_index.Intern(std::string(fields[1]));
    edges.push_back({s, t, count});
    if (options.undirected) edges.push_back({t, s, count});
  }
  if (edges.empty()) throw ParseError("no edges", 0);

  auto source_labels = sources.Release();
  std::vector<std::string> target_labels =
      unify ? source_labels : targets.Release();
  return MultigraphSample(std::move(source_labels), std::move(target_labels),
                          std::move(edges), unify);
}

MultigraphSample ParseEdgeList(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return ParseEdgeList(in, options);
}

MultigraphSample ReadEdgeListFile(const std::string& path,
                                  const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list '" + path + "'");
  return ParseEdgeList(in, options);
}

void WriteEdgeList(std::ostream& out, const MultigraphSample& sample) {
  const auto& src = sample.labels(Side::kSource);
  const auto& dst = sample.labels(Side::kTarget);
  for (const Edge& e : sample.edges()) {
    out << src[e.source] << '\t' << dst[e.target] << '\t' << e.count << '\n';
  }
}

std::vector<std::string> ReadVocabularyFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary '" + path + "'");
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    labels.push_back(line.substr(0, line.find('\t')));
  }
  return labels;
}

}  // namespace modl
