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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modl/bench.h"
#include "modl/density.h"
#include "modl/error.h"
#include "modl/graph.h"
#include "modl/hierarchy.h"
#include "modl/kernels.h"
#include "modl/model_io.h"
#include "modl/optimizer.h"
#include "modl/synthgen.h"
#include "modl/version.h"

namespace {

using modl::Side;
using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInternalError = 1, kInputError = 2, kIoError = 3, kConsistencyError = 4 };

struct IngestFlags {
  bool unify = false;
  bool undirected = false;
  std::string vocabulary;

  void Add(CLI::App* app) {
    app->add_flag("--unify-vertices", unify, "Use one label space for sources and targets");
    app->add_flag("--undirected", undirected,
                  "Read each line as an undirected edge (implies --unify-vertices)");
    app->add_option("--vocabulary", vocabulary,
                    "File whose first column lists every vertex, including isolated ones");
  }

  std::shared_ptr<const modl::MultigraphSample> Load(const std::string& path) const {
    modl::ParseOptions options;
    options.unify_vertices = unify;
    options.undirected = undirected;
    if (!vocabulary.empty()) options.vocabulary = modl::ReadVocabularyFile(vocabulary);
    return std::make_shared<const modl::MultigraphSample>(modl::ReadEdgeListFile(path, options));
  }
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw modl::IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw modl::IoError("cannot read '" + path + "'");
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw modl::IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw modl::IoError("cannot write '" + path + "'");
}

// Model and the graph it describes; ingestion flags recorded in the model
// are applied on top of the command line ones.
struct LoadedModel {
  std::shared_ptr<const modl::MultigraphSample> sample;
  std::optional<modl::Coclustering> model;
  modl::ModelMetadata metadata;
};

LoadedModel LoadModel(const std::string& model_path, const std::string& edges_path,
                      IngestFlags ingest) {
  const std::string text = ReadFile(model_path);
  try {
    const Json doc = Json::parse(text);
    if (doc.contains("graph")) {
      ingest.unify = ingest.unify || doc["graph"].value("unified", false);
      ingest.undirected = ingest.undirected || doc["graph"].value("undirected", false);
    }
  } catch (const nlohmann::json::exception& e) {
    throw modl::ParseError(std::string("model JSON: ") + e.what());
  }
  LoadedModel out;
  out.sample = ingest.Load(edges_path);
  try {
    out.model.emplace(modl::ModelFromJson(text, out.sample, &out.metadata));
  } catch (const modl::ConsistencyError& e) {
    throw modl::ConsistencyError(std::string("consistency audit failed: ") + e.what());
  }
  return out;
}

std::pair<int32_t, int32_t> ParsePair(const std::string& text, const char* what) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw modl::InputError(std::string(what) + " expects two comma-separated values");
  }
  try {
    size_t used_a = 0, used_b = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const int32_t x = std::stoi(a, &used_a), y = std::stoi(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument("trailing");
    return {x, y};
  } catch (const std::logic_error&) {
    throw modl::InputError(std::string(what) + " expects two integers, got '" + text + "'");
  }
}

int32_t ResolveThreads(int32_t threads) {
  if (threads > 0) return threads;
  return static_cast<int32_t>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string Header(const std::optional<uint64_t>& seed) {
  std::string h = std::string("# modl ") + modl::kVersion;
  if (seed) h += " seed=" + std::to_string(*seed);
  return h + "\n";
}

// --- generate --------------------------------------------------------------

struct GenerateArgs {
  std::string family;
  modl::GeneratorSpec spec;
  std::string output, labels, spec_path;
  std::string matrix, sizes;
};

std::vector<double> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
      throw modl::InputError("not a number: '" + item + "'");
    }
  }
  return out;
}

int RunGenerate(GenerateArgs& args) {
  args.spec.family = modl::ParseFamily(args.family);
  if (!args.matrix.empty()) args.spec.block_matrix = ParseDoubles(args.matrix);
  if (!args.sizes.empty()) {
    for (double s : ParseDoubles(args.sizes)) {
      if (s != std::floor(s)) throw modl::InputError("cluster sizes must be integers");
      args.spec.cluster_sizes.push_back(static_cast<int32_t>(s));
    }
  }
  const modl::GeneratedGraph graph = modl::Generate(args.spec);

  std::ostringstream edges;
  edges << Header(args.spec.seed);
  modl::WriteDraws(edges, graph);
  WriteFile(args.output, edges.str());

  std::ostringstream labels;
  labels << Header(args.spec.seed);
  modl::WriteBlockLabels(labels, graph);
  WriteFile(args.labels.empty() ? args.output + ".labels.tsv" : args.labels, labels.str());

  const modl::GeneratorSpec& s = args.spec;
  Json j;
  j["tool_version"] = modl::kVersion;
  j["family"] = modl::FamilyName(s.family);
  j["seed"] = s.seed;
  switch (s.family) {
    case modl::Family::kCircular:
      j["n"] = s.n;
      j["m"] = s.m;
      j["true_mutual_information"] = modl::CircularMutualInformation(s.n);
      break;
    case modl::Family::kBlockDiagonal:
      j["n"] = s.n;
      j["blocks"] = s.blocks;
      j["noise_rate"] = s.noise_rate;
      j["m"] = s.m;
      break;
    case modl::Family::kBlockmodel:
      j["block_matrix"] = s.block_matrix.empty() ? modl::DefaultBlockMatrix() : s.block_matrix;
      j["cluster_sizes"] = s.cluster_sizes.empty() ? modl::DefaultClusterSizes() : s.cluster_sizes;
      j["m"] = s.m;
      break;
    case modl::Family::kUndirectedPattern:
      j["clusters"] = s.pattern_clusters;
      j["cluster_size"] = s.pattern_cluster_size;
      j["intra"] = s.intra;
      j["inter"] = s.inter;
      j["directed_edges"] = graph.draws.size();
      break;
  }
  j["vertices"] = graph.sample->source_count();
  j["block_count"] = graph.block_count;
  WriteFile(args.spec_path.empty() ? args.output + ".spec.json" : args.spec_path, j.dump(2) + "\n");
  std::cerr << "generated " << graph.draws.size() << " edges over "
            << graph.sample->source_count() << " vertices\n";
  return kOk;
}

// --- fit -------------------------------------------------------------------

struct FitArgs {
  std::string edges, output = "model.json";
  IngestFlags ingest;
  modl::FitConfig config;
  int32_t max_clusters = -1;
  int32_t threads = 1;
  bool quiet = false;
  bool bits = false;
};

int RunFit(FitArgs& args) {
  auto sample = args.ingest.Load(args.edges);
  modl::FitConfig config = args.config;
  if (args.max_clusters >= 0) config.max_initial_clusters = args.max_clusters;
  config.threads = ResolveThreads(args.threads);
  if (!args.quiet) {
    config.progress = [](const modl::RoundLog& r) {
      std::fprintf(stderr, "round %d: k_s=%d k_t=%d criterion=%.6f (%.3fs)\n", r.round,
                   r.final_source_clusters, r.final_target_clusters, r.criterion, r.seconds);
    };
  }
  const auto start = std::chrono::steady_clock::now();
  const modl::FitResult fit = modl::VnsFit(sample, config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  modl::ModelMetadata metadata;
  metadata.seed = config.seed;
  metadata.undirected = args.ingest.undirected;
  metadata.best_round = fit.best_round;
  metadata.rounds = fit.rounds;
  WriteFile(args.output, modl::ModelToJson(fit.best_model, metadata));

  const modl::ModlMiEstimate mi = modl::EstimateModlMi(fit);
  const double unit = args.bits ? 1.0 / std::log(2.0) : 1.0;
  const char* unit_name = args.bits ? "bits" : "nats";
  std::printf("vertices: %d source, %d target; edges: %lld\n", sample->source_count(),
              sample->target_count(), static_cast<long long>(sample->edge_count()));
  std::printf("clusters: k_s=%d k_t=%d\n", fit.best_model.cluster_count(Side::kSource),
              fit.best_model.cluster_count(Side::kTarget));
  std::printf("criterion: %.6f nats (round %d of %d)\n", fit.best_criterion.total,
              fit.best_round, config.rounds);
  std::printf("mutual information estimate: %.6f %s per edge (likelihood only %.6f)\n",
              mi.full * unit, unit_name, mi.likelihood_only * unit);
  std::printf("time: %.3f s\n", seconds);
  return kOk;
}

// --- report family ---------------------------------------------------------

struct ReportArgs {
  std::string model, edges, output;
  IngestFlags ingest;
  std::string coarsen;
  std::string density;
  bool metrics = false;
  bool bits = false;
  std::string dendrogram;
  std::string modularity_side = "source";
};

int EmitCoarsen(const LoadedModel& loaded, const ReportArgs& args) {
  const auto [ks, kt] = ParsePair(args.coarsen, "--coarsen");
  const modl::Dendrogram dendrogram = modl::BuildDendrogram(*loaded.model);
  if (!args.dendrogram.empty()) WriteFile(args.dendrogram, modl::DendrogramToJson(dendrogram));
  const modl::CutResult cut = modl::Cut(dendrogram, ks, kt);
  const modl::CoclusterTable table = modl::MakeCoclusterTable(cut.model);
  modl::ModelMetadata metadata;
  metadata.seed = loaded.metadata.seed;
  metadata.undirected = loaded.metadata.undirected;
  if (!args.output.empty()) WriteFile(args.output, modl::ModelToJson(cut.model, metadata));
  if (!cut.exact) {
    std::fprintf(stderr, "requested (%d, %d) is not on the merge path; cut at (%d, %d)\n", ks, kt,
                 cut.source_clusters, cut.target_clusters);
  }
  std::cout << Header(loaded.metadata.seed);
  std::cout << "# clusters: " << cut.source_clusters << " x " << cut.target_clusters
            << "; criterion " << cut.model.criterion().total << "\n";
  std::cout << modl::CoclusterTableToText(table);
  return kOk;
}

int EmitDensity(const LoadedModel& loaded, const ReportArgs& args) {
  const modl::DensityEstimate estimate(*loaded.model);
  const modl::MultigraphSample& g = *loaded.sample;
  std::ostringstream out;
  out << Header(loaded.metadata.seed);
  out << "source\ttarget\tprobability\n";
  char buf[64];
  if (args.density == "full") {
    for (int32_t i = 0; i < g.source_count(); ++i) {
      for (int32_t j = 0; j < g.target_count(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", estimate.Probability(i, j));
        out << g.labels(Side::kSource)[i] << '\t' << g.labels(Side::kTarget)[j] << '\t' << buf
            << '\n';
      }
    }
  } else {
    const auto comma = args.density.find(',');
    if (comma == std::string::npos) throw modl::InputError("--density expects i,j or full");
    const std::string a = args.density.substr(0, comma), b = args.density.substr(comma + 1);
    const auto i = g.FindVertex(Side::kSource, a);
    const auto j = g.FindVertex(Side::kTarget, b);
    if (!i) throw modl::InputError("unknown source vertex '" + a + "'");
    if (!j) throw modl::InputError("unknown target vertex '" + b + "'");
    std::snprintf(buf, sizeof buf, "%.17g", estimate.Probability(*i, *j));
    out << a << '\t' << b << '\t' << buf << '\n';
  }
  WriteFile(args.output, out.str());
  return kOk;
}

int EmitMetrics(const LoadedModel& loaded, const ReportArgs& args) {
  modl::MetricsReport report = modl::DensityEstimate(*loaded.model).Metrics();
  const modl::MultigraphSample& g = *loaded.sample;
  if (g.source_count() == g.target_count() && g.unified()) {
    const Side side = args.modularity_side == "target" ? Side::kTarget : Side::kSource;
    report.modularity = modl::Modularity(g, loaded.model->assignment(side));
  }
  const modl::ModlMiEstimate mi = modl::EstimateModlMi(*loaded.model);
  report.modl_mi_full = mi.full;
  report.modl_mi_likelihood = mi.likelihood_only;
  std::string text = modl::MetricsToJson(report, args.bits);
  if (loaded.metadata.seed) {
    Json j = Json::parse(text);
    j["seed"] = *loaded.metadata.seed;
    text = j.dump(2) + "\n";
  }
  WriteFile(args.output, text);
  return kOk;
}

int RunReport(const ReportArgs& args) {
  const int modes = (args.coarsen.empty() ? 0 : 1) + (args.density.empty() ? 0 : 1) +
                    (args.metrics ? 1 : 0);
  if (modes != 1) throw modl::InputError("choose exactly one of --coarsen, --density, --metrics");
  const LoadedModel loaded = LoadModel(args.model, args.edges, args.ingest);
  if (!args.coarsen.empty()) return EmitCoarsen(loaded, args);
  if (!args.density.empty()) return EmitDensity(loaded, args);
  return EmitMetrics(loaded, args);
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
  std::string preset;
  std::string kind;
  bool paper_scale = false;
  int32_t reps = 0;
  int32_t rounds = 10;
  uint64_t seed = 0;
  int32_t threads = 1;
  std::vector<int64_t> sizes;
  std::string output = "-";
  std::string summary;
};

int RunBench(const BenchArgs& args) {
  modl::ExperimentSpec spec = modl::PresetExperiment(args.preset, args.paper_scale);
  if (args.reps > 0) spec.repetitions = args.reps;
  if (!args.sizes.empty()) spec.sizes = args.sizes;
  spec.fit.rounds = args.rounds;
  spec.seed = args.seed;
  spec.threads = ResolveThreads(args.threads);
  const std::string kind =
      args.kind.empty() ? (spec.generator.family == modl::Family::kCircular ? "convergence" : "curve")
                        : args.kind;
  std::ostringstream csv;
  csv << Header(spec.seed);
  std::string summary;
  if (kind == "convergence") {
    const auto rows = modl::RunConvergenceExperiment(spec);
    modl::WriteConvergenceCsv(csv, rows);
    summary = modl::ConvergenceSummaryJson(spec, rows);
  } else if (kind == "curve") {
    const auto rows = modl::RunClusterCurve(spec);
    modl::WriteCurveCsv(csv, rows);
    summary = modl::CurveSummaryJson(spec, rows);
  } else {
    throw modl::InputError("--kind must be convergence or curve");
  }
  WriteFile(args.output, csv.str());
  if (!args.summary.empty()) WriteFile(args.summary, summary + "\n");
  return kOk;
}

void AddKernelOption(CLI::App& app, std::string& kernel) {
  app.add_option("--kernel", kernel, "Inner-loop kernels: auto or scalar")
      ->check(CLI::IsMember({"auto", "scalar"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MODL graph coclustering"};
  app.set_version_flag("--version", modl::kVersion);
  app.require_subcommand(1);
  std::string kernel = "auto";
  AddKernelOption(app, kernel);

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Draw a synthetic graph");
  generate->add_option("family", gen.family,
                       "circular, block-diagonal, blockmodel or undirected-pattern")
      ->required();
  generate->add_option("-o,--output", gen.output, "Edge list TSV")->required();
  generate->add_option("--labels", gen.labels, "Block labels TSV (default <output>.labels.tsv)");
  generate->add_option("--spec", gen.spec_path, "Spec JSON (default <output>.spec.json)");
  generate->add_option("--n", gen.spec.n, "Vertices (circular, block-diagonal)");
  generate->add_option("--m", gen.spec.m, "Edges to draw");
  generate->add_option("--seed", gen.spec.seed, "Random seed");
  generate->add_option("--blocks", gen.spec.blocks, "Diagonal blocks (block-diagonal)");
  generate->add_option("--noise", gen.spec.noise_rate, "Noise rate in [0, 1] (block-diagonal)");
  generate->add_option("--matrix", gen.matrix, "Row-major cluster-pair probabilities (blockmodel)");
  generate->add_option("--sizes", gen.sizes, "Comma-separated cluster sizes (blockmodel)");
  generate->add_option("--clusters", gen.spec.pattern_clusters, "Clusters (undirected-pattern)");
  generate->add_option("--cluster-size", gen.spec.pattern_cluster_size,
                       "Vertices per cluster (undirected-pattern)");
  generate->add_option("--intra", gen.spec.intra, "Intra-cluster edge proportion");
  generate->add_option("--inter", gen.spec.inter, "Inter-cluster edge proportion");

  FitArgs fit;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a coclustering to an edge list");
  fit_cmd->add_option("edges", fit.edges, "Edge list TSV")->required();
  fit_cmd->add_option("-o,--output", fit.output, "Model JSON");
  fit_cmd->add_option("--seed", fit.config.seed, "Random seed");
  fit_cmd->add_option("--rounds", fit.config.rounds, "Optimization rounds")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--max-clusters", fit.max_clusters,
                      "Initial clusters per side (default ceil(sqrt(m)); 0 = one per vertex)");
  fit_cmd->add_option("--passes", fit.config.post_opt_passes, "Vertex-move sweeps");
  fit_cmd->add_option("--threads", fit.threads, "Worker threads (0 = all cores)");
  fit_cmd->add_flag("--quiet", fit.quiet, "No per-round progress");
  fit_cmd->add_flag("--bits", fit.bits, "Show information in bits");
  fit.ingest.Add(fit_cmd);

  ReportArgs report;
  CLI::App* report_cmd = app.add_subcommand("report", "Report on a fitted model");
  auto add_model_inputs = [](CLI::App* cmd, ReportArgs& r) {
    cmd->add_option("model", r.model, "Model JSON")->required();
    cmd->add_option("edges", r.edges, "Edge list TSV the model was fitted on")->required();
    cmd->add_option("-o,--output", r.output, "Output file (default stdout)");
    cmd->add_flag("--bits", r.bits, "Show information in bits");
    r.ingest.Add(cmd);
  };
  add_model_inputs(report_cmd, report);
  report_cmd->add_option("--coarsen", report.coarsen, "Cut to kS,kT clusters");
  report_cmd->add_option("--density", report.density, "Edge probability of i,j or 'full'");
  report_cmd->add_flag("--metrics", report.metrics, "Entropies, mutual information, modularity");
  report_cmd->add_option("--dendrogram", report.dendrogram, "Also write the merge sequence JSON");
  report_cmd->add_option("--modularity-side", report.modularity_side,
                         "Partition used for modularity")
      ->check(CLI::IsMember({"source", "target"}));

  ReportArgs coarsen;
  CLI::App* coarsen_cmd = app.add_subcommand("coarsen", "Agglomerate a model to fewer clusters");
  add_model_inputs(coarsen_cmd, coarsen);
  coarsen_cmd->add_option("--clusters", coarsen.coarsen, "Target kS,kT")->required();
  coarsen_cmd->add_option("--dendrogram", coarsen.dendrogram, "Also write the merge sequence JSON");

  ReportArgs density;
  CLI::App* density_cmd = app.add_subcommand("density", "Edge probabilities of a model");
  add_model_inputs(density_cmd, density);
  density_cmd->add_option("--cell", density.density, "source,target labels or 'full'")
      ->default_val("full");

  ReportArgs evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Information metrics of a model");
  add_model_inputs(evaluate_cmd, evaluate);
  evaluate_cmd->add_option("--modularity-side", evaluate.modularity_side,
                           "Partition used for modularity")
      ->check(CLI::IsMember({"source", "target"}));

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run an experiment grid");
  bench_cmd->add_option("preset", bench.preset, "Experiment preset")
      ->required()
      ->check(CLI::IsMember(modl::PresetNames()));
  bench_cmd->add_option("--kind", bench.kind, "convergence or curve");
  bench_cmd->add_flag("--paper-scale", bench.paper_scale, "Full size grid and 100 repetitions");
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per size");
  bench_cmd->add_option("--sizes", bench.sizes, "Sample sizes (strictly increasing)")
      ->delimiter(',');
  bench_cmd->add_option("--rounds", bench.rounds, "Optimization rounds per fit")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "Master seed");
  bench_cmd->add_option("--threads", bench.threads, "Cells fitted in parallel (0 = all cores)");
  bench_cmd->add_option("-o,--output", bench.output, "CSV output (default stdout)");
  bench_cmd->add_option("--summary", bench.summary, "JSON summary output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (kernel == "scalar") modl::kernels::SetMode(modl::kernels::Mode::kScalar);
    if (generate->parsed()) return RunGenerate(gen);
    if (fit_cmd->parsed()) return RunFit(fit);
    if (report_cmd->parsed()) return RunReport(report);
    if (coarsen_cmd->parsed()) return RunReport(coarsen);
    if (density_cmd->parsed()) return RunReport(density);
    if (evaluate_cmd->parsed()) {
      evaluate.metrics = true;
      return RunReport(evaluate);
    }
    if (bench_cmd->parsed()) return RunBench(bench);
  } catch (const modl::ConsistencyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConsistencyError;
  } catch (const modl::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const modl::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInputError;
}
