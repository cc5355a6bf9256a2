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

#include "modl/model_io.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "modl/error.h"
#include "modl/version.h"

namespace modl {
namespace {

using Json = nlohmann::ordered_json;

Json CriterionJson(const CriterionBreakdown& c) {
  return Json{{"cluster_count_prior", c.cluster_count_prior},
              {"partition_prior", c.partition_prior},
              {"cocluster_prior", c.cocluster_prior},
              {"source_degree_prior", c.source_degree_prior},
              {"target_degree_prior", c.target_degree_prior},
              {"cocluster_likelihood", c.cocluster_likelihood},
              {"source_degree_likelihood", c.source_degree_likelihood},
              {"target_degree_likelihood", c.target_degree_likelihood},
              {"total", c.total}};
}

Json SideJson(const Coclustering& model, Side side) {
  const auto& labels = model.sample().labels(side);
  Json clusters = Json::array();
  const auto members = model.Members(side);
  for (int32_t c = 0; c < model.cluster_count(side); ++c) {
    Json names = Json::array();
    for (int32_t v : members[c]) names.push_back(labels[v]);
    clusters.push_back({{"id", c},
                        {"size", model.cluster_size(side, c)},
                        {"margin", model.margin(side, c)},
                        {"members", names}});
  }
  return Json{{"cluster_count", model.cluster_count(side)},
              {"labels", labels},
              {"assignment", model.assignment(side)},
              {"clusters", clusters}};
}

Json RoundJson(const RoundLog& r) {
  return Json{{"round", r.round},
              {"seed", r.seed},
              {"initial_source_clusters", r.initial_source_clusters},
              {"initial_target_clusters", r.initial_target_clusters},
              {"final_source_clusters", r.final_source_clusters},
              {"final_target_clusters", r.final_target_clusters},
              {"criterion", r.criterion}};
}

std::vector<int32_t> ReadAssignment(const Json& side_doc, const MultigraphSample& sample,
                                    Side side) {
  const int32_t n = sample.vertex_count(side);
  const auto& labels = side_doc.at("labels");
  const auto& assignment = side_doc.at("assignment");
  if (!labels.is_array() || !assignment.is_array() || labels.size() != assignment.size()) {
    throw ParseError(std::string(SideName(side)) + " labels and assignment must be equal-length arrays");
  }
  if (static_cast<int64_t>(labels.size()) != n) {
    throw ConsistencyError(std::string(SideName(side)) + " side has " +
                           std::to_string(labels.size()) + " vertices in the model but " +
                           std::to_string(n) + " in the graph");
  }
  std::unordered_map<std::string, int32_t> index;
  index.reserve(n);
  for (int32_t v = 0; v < n; ++v) index.emplace(sample.labels(side)[v], v);
  std::vector<int32_t> out(n, -1);
  for (size_t k = 0; k < labels.size(); ++k) {
    const auto it = index.find(labels[k].get<std::string>());
    if (it == index.end()) {
      throw ConsistencyError("vertex " + labels[k].get<std::string>() + " is not in the graph");
    }
    if (out[it->second] >= 0) {
      throw ConsistencyError("vertex " + labels[k].get<std::string>() + " listed twice");
    }
    out[it->second] = assignment[k].get<int32_t>();
  }
  return out;
}

std::string Fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

std::string ModelToJson(const Coclustering& model, const ModelMetadata& metadata) {
  const MultigraphSample& g = model.sample();
  Json j;
  j["schema"] = kModelSchema;
  j["tool_version"] = kVersion;
  j["seed"] = metadata.seed ? Json(*metadata.seed) : Json(nullptr);
  j["graph"] = {{"source_vertices", g.source_count()},
                {"target_vertices", g.target_count()},
                {"edges", g.edge_count()},
                {"unified", g.unified()},
                {"undirected", metadata.undirected}};
  j["source"] = SideJson(model, Side::kSource);
  j["target"] = SideJson(model, Side::kTarget);
  Json cells = Json::array();
  for (int32_t a = 0; a < model.cluster_count(Side::kSource); ++a) {
    for (int32_t b = 0; b < model.cluster_count(Side::kTarget); ++b) {
      if (const int64_t c = model.cell(a, b)) cells.push_back({a, b, c});
    }
  }
  j["coclusters"] = cells;
  j["criterion"] = CriterionJson(model.criterion());
  if (metadata.best_round) {
    Json rounds = Json::array();
    for (const RoundLog& r : metadata.rounds) rounds.push_back(RoundJson(r));
    j["fit_log"] = {{"best_round", *metadata.best_round}, {"rounds", rounds}};
  }
  return j.dump(2) + "\n";
}

Coclustering ModelFromJson(const std::string& text, std::shared_ptr<const MultigraphSample> sample,
                           ModelMetadata* metadata) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  try {
    if (j.value("schema", std::string()) != kModelSchema) {
      throw ParseError(std::string("model JSON must declare schema ") + kModelSchema);
    }
    std::vector<int32_t> src = ReadAssignment(j.at("source"), *sample, Side::kSource);
    std::vector<int32_t> tgt = ReadAssignment(j.at("target"), *sample, Side::kTarget);
    std::optional<Coclustering> model;
    try {
      model.emplace(Coclustering::FromPartitions(sample, std::move(src), std::move(tgt)));
    } catch (const InputError& e) {
      throw ConsistencyError(e.what());
    }
    const Json& graph = j.at("graph");
    if (graph.at("edges").get<int64_t>() != sample->edge_count()) {
      throw ConsistencyError("model was fitted on " + std::to_string(graph.at("edges").get<int64_t>()) +
                             " edges, graph has " + std::to_string(sample->edge_count()));
    }
    std::vector<int64_t> stored(model->cells().size(), 0);
    for (const Json& cell : j.at("coclusters")) {
      const int32_t a = cell.at(0).get<int32_t>(), b = cell.at(1).get<int32_t>();
      if (a < 0 || a >= model->cluster_count(Side::kSource) || b < 0 ||
          b >= model->cluster_count(Side::kTarget)) {
        throw ConsistencyError("cocluster index out of range");
      }
      stored[static_cast<size_t>(a) * model->cluster_count(Side::kTarget) + b] =
          cell.at(2).get<int64_t>();
    }
    if (stored != model->cells()) {
      throw ConsistencyError("stored cocluster counts differ from the graph's edge counts");
    }
    for (Side side : {Side::kSource, Side::kTarget}) {
      for (const Json& c : j.at(side == Side::kSource ? "source" : "target").at("clusters")) {
        const int32_t id = c.at("id").get<int32_t>();
        if (id < 0 || id >= model->cluster_count(side) ||
            c.at("size").get<int32_t>() != model->cluster_size(side, id) ||
            c.at("margin").get<int64_t>() != model->margin(side, id)) {
          throw ConsistencyError(std::string("stored ") + SideName(side) +
                                 " cluster sizes or margins differ from the graph");
        }
      }
    }
    const double total = j.at("criterion").at("total").get<double>();
    if (std::fabs(total - model->criterion().total) > 1e-6 * std::max(1.0, std::fabs(total))) {
      throw ConsistencyError("stored criterion differs from the recomputed value");
    }
    const std::string audit = model->AuditConsistency();
    if (!audit.empty()) throw ConsistencyError(audit);
    if (metadata) {
      *metadata = {};
      if (j.contains("seed") && !j["seed"].is_null()) metadata->seed = j["seed"].get<uint64_t>();
      metadata->undirected = graph.value("undirected", false);
      if (j.contains("fit_log")) {
        metadata->best_round = j["fit_log"].at("best_round").get<int32_t>();
        for (const Json& r : j["fit_log"].at("rounds")) {
          RoundLog log;
          log.round = r.at("round").get<int32_t>();
          log.seed = r.at("seed").get<uint64_t>();
          log.initial_source_clusters = r.at("initial_source_clusters").get<int32_t>();
          log.initial_target_clusters = r.at("initial_target_clusters").get<int32_t>();
          log.final_source_clusters = r.at("final_source_clusters").get<int32_t>();
          log.final_target_clusters = r.at("final_target_clusters").get<int32_t>();
          log.criterion = r.at("criterion").get<double>();
          metadata->rounds.push_back(log);
        }
      }
    }
    return std::move(*model);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
}

std::string CriterionToJson(const CriterionBreakdown& criterion) {
  return CriterionJson(criterion).dump(2) + "\n";
}

std::string MetricsToJson(const MetricsReport& report, bool bits) {
  const double unit = bits ? 1.0 / std::log(2.0) : 1.0;
  Json j;
  j["tool_version"] = kVersion;
  j["unit"] = bits ? "bits" : "nats";
  j["entropy_source"] = report.entropy_source * unit;
  j["entropy_target"] = report.entropy_target * unit;
  j["joint_entropy"] = report.joint_entropy * unit;
  j["mutual_information"] = report.mutual_information * unit;
  if (report.modularity) j["modularity"] = *report.modularity;
  if (report.modl_mi_full) j["modl_mi_full"] = *report.modl_mi_full * unit;
  if (report.modl_mi_likelihood) j["modl_mi_likelihood"] = *report.modl_mi_likelihood * unit;
  return j.dump(2) + "\n";
}

std::string DendrogramToJson(const Dendrogram& dendrogram) {
  Json merges = Json::array();
  for (const MergeRecord& r : dendrogram.merges) {
    merges.push_back({{"side", SideName(r.side)},
                      {"a", r.a},
                      {"b", r.b},
                      {"delta", r.delta},
                      {"criterion", r.criterion},
                      {"source_clusters", r.source_clusters},
                      {"target_clusters", r.target_clusters}});
  }
  Json j;
  j["schema"] = kDendrogramSchema;
  j["tool_version"] = kVersion;
  j["initial_source_clusters"] = dendrogram.initial.cluster_count(Side::kSource);
  j["initial_target_clusters"] = dendrogram.initial.cluster_count(Side::kTarget);
  j["initial_criterion"] = dendrogram.initial.criterion().total;
  j["merges"] = merges;
  return j.dump(2) + "\n";
}

std::string CoclusterTableToJson(const CoclusterTable& table, const CutResult* cut) {
  Json j;
  j["tool_version"] = kVersion;
  if (cut) {
    j["requested_exact"] = cut->exact;
    j["merges_applied"] = cut->steps;
  }
  j["source_clusters"] = table.rows;
  j["target_clusters"] = table.cols;
  j["source_cluster_sizes"] = table.row_sizes;
  j["target_cluster_sizes"] = table.col_sizes;
  Json counts = Json::array(), percent = Json::array();
  for (int32_t a = 0; a < table.rows; ++a) {
    Json crow = Json::array(), prow = Json::array();
    for (int32_t b = 0; b < table.cols; ++b) {
      crow.push_back(table.counts[static_cast<size_t>(a) * table.cols + b]);
      prow.push_back(std::round(table.percent[static_cast<size_t>(a) * table.cols + b] * 100.0) / 100.0);
    }
    counts.push_back(crow);
    percent.push_back(prow);
  }
  j["counts"] = counts;
  j["percent"] = percent;
  return j.dump(2) + "\n";
}

std::string CoclusterTableToText(const CoclusterTable& table) {
  std::string out = "source\\target";
  for (int32_t b = 0; b < table.cols; ++b) out += "\tT" + std::to_string(b + 1);
  out += "\ttotal\n";
  std::vector<double> col_pct(table.cols, 0.0);
  std::vector<int64_t> col_cnt(table.cols, 0);
  for (int32_t a = 0; a < table.rows; ++a) {
    out += "S" + std::to_string(a + 1);
    double row_pct = 0.0;
    int64_t row_cnt = 0;
    for (int32_t b = 0; b < table.cols; ++b) {
      const size_t k = static_cast<size_t>(a) * table.cols + b;
      out += "\t" + Fixed2(table.percent[k]) + "% (" + std::to_string(table.counts[k]) + ")";
      row_pct += table.percent[k];
      row_cnt += table.counts[k];
      col_pct[b] += table.percent[k];
      col_cnt[b] += table.counts[k];
    }
    out += "\t" + Fixed2(row_pct) + "% (" + std::to_string(row_cnt) + ")\n";
  }
  out += "total";
  int64_t all = 0;
  for (int32_t b = 0; b < table.cols; ++b) {
    out += "\t" + Fixed2(col_pct[b]) + "% (" + std::to_string(col_cnt[b]) + ")";
    all += col_cnt[b];
  }
  out += "\t100.00% (" + std::to_string(all) + ")\n";
  return out;
}

}  // namespace modl
