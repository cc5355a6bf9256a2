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

#include "modl/bench.h"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "modl/density.h"
#include "modl/error.h"
#include "modl/rng.h"
#include "modl/version.h"

namespace modl {
namespace {

using Json = nlohmann::ordered_json;

void Validate(const ExperimentSpec& spec) {
  if (spec.repetitions < 1) throw InputError("repetitions must be at least 1");
  if (spec.sizes.empty()) throw InputError("experiment needs at least one sample size");
  for (size_t i = 0; i < spec.sizes.size(); ++i) {
    if (spec.sizes[i] < 1) throw InputError("sample sizes must be positive");
    if (i > 0 && spec.sizes[i] <= spec.sizes[i - 1]) {
      throw InputError("sample sizes must be strictly increasing");
    }
  }
}

// Runs cell(index) for every (size, rep) cell, parallel when asked, and
// rethrows the first failure (in cell order) with its coordinates.
void ForEachCell(const ExperimentSpec& spec, const std::function<void(size_t, size_t, int32_t)>& cell) {
  const size_t reps = static_cast<size_t>(spec.repetitions);
  const size_t total = spec.sizes.size() * reps;
  std::vector<std::exception_ptr> failures(total);
  auto run = [&](size_t index) {
    try {
      cell(index, index / reps, static_cast<int32_t>(index % reps));
    } catch (...) {
      failures[index] = std::current_exception();
    }
  };
  const size_t workers = std::max<size_t>(1, std::min<size_t>(spec.threads, total));
  if (workers == 1) {
    for (size_t i = 0; i < total; ++i) run(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (size_t i; (i = next.fetch_add(1)) < total;) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < total; ++i) {
    if (!failures[i]) continue;
    const std::string where = "size " + std::to_string(spec.sizes[i / reps]) + ", rep " +
                              std::to_string(i % reps) + ": ";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error(where + e.what());
    }
  }
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments Summarize(const std::vector<double>& v) {
  Moments out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

// Rows grouped by size, preserving order.
template <typename Row>
std::vector<std::pair<int64_t, std::vector<const Row*>>> BySize(const std::vector<Row>& rows) {
  std::vector<std::pair<int64_t, std::vector<const Row*>>> groups;
  for (const Row& r : rows) {
    if (groups.empty() || groups.back().first != r.size) groups.push_back({r.size, {}});
    groups.back().second.push_back(&r);
  }
  return groups;
}

std::string Num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <typename Row, size_t N>
void WriteAggregates(std::ostream& out, const std::vector<Row>& rows,
                     const std::array<std::function<double(const Row&)>, N>& columns) {
  for (const auto& [size, group] : BySize(rows)) {
    std::array<Moments, N> m;
    for (size_t c = 0; c < N; ++c) {
      std::vector<double> v;
      for (const Row* r : group) v.push_back(columns[c](*r));
      m[c] = Summarize(v);
    }
    for (int which = 0; which < 2; ++which) {
      out << size << ',' << (which == 0 ? "mean" : "std");
      for (size_t c = 0; c < N; ++c) out << ',' << Num(which == 0 ? m[c].mean : m[c].std);
      out << '\n';
    }
  }
}

Json SpecJson(const ExperimentSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["family"] = FamilyName(spec.generator.family);
  j["sizes"] = spec.sizes;
  j["repetitions"] = spec.repetitions;
  j["rounds"] = spec.fit.rounds;
  j["seed"] = spec.seed;
  return j;
}

}  // namespace

uint64_t CellSeed(uint64_t master, size_t size_index, int32_t rep) {
  return MixSeed(MixSeed(master) ^ (static_cast<uint64_t>(size_index) << 32) ^
                 static_cast<uint64_t>(rep));
}

std::vector<std::string> PresetNames() {
  return {"circular",     "blockmodel",   "pure-10-2",    "noisy-10-2",  "pure-100-10",
          "noisy-100-10", "pure-1000-5",  "noisy-1000-5", "random-100",  "random-1000"};
}

ExperimentSpec PresetExperiment(const std::string& name, bool paper_scale) {
  ExperimentSpec spec;
  spec.name = name;
  spec.repetitions = paper_scale ? 100 : 10;
  auto decades = [](int64_t lo, int64_t hi, bool halves) {
    std::vector<int64_t> v;
    for (int64_t s = lo; s <= hi; s *= 10) {
      v.push_back(s);
      if (halves && s * 2 <= hi) v.push_back(s * 2);
      if (halves && s * 5 <= hi) v.push_back(s * 5);
    }
    return v;
  };
  if (name == "circular") {
    spec.generator.family = Family::kCircular;
    spec.generator.n = 100;
    spec.sizes = paper_scale ? decades(100, 1000000, true) : decades(100, 100000, false);
    return spec;
  }
  if (name == "blockmodel") {
    spec.generator.family = Family::kBlockmodel;
    spec.sizes = paper_scale ? decades(10, 100000, true)
                             : std::vector<int64_t>{100, 200, 500, 1000, 2000};
    return spec;
  }
  struct Diagonal {
    const char* name;
    int32_t n, k;
    double noise;
  };
  static constexpr Diagonal kDiagonal[] = {
      {"pure-10-2", 10, 2, 0.0},       {"noisy-10-2", 10, 2, 0.5},
      {"pure-100-10", 100, 10, 0.0},   {"noisy-100-10", 100, 10, 0.5},
      {"pure-1000-5", 1000, 5, 0.0},   {"noisy-1000-5", 1000, 5, 0.5},
      {"random-100", 100, 1, 1.0},     {"random-1000", 1000, 1, 1.0},
  };
  for (const Diagonal& d : kDiagonal) {
    if (name != d.name) continue;
    spec.generator.family = Family::kBlockDiagonal;
    spec.generator.n = d.n;
    spec.generator.blocks = d.k;
    spec.generator.noise_rate = d.noise;
    const int64_t hi = paper_scale ? 1000000 : (d.n <= 10 ? 10000 : 100000);
    spec.sizes = decades(10, hi, true);
    return spec;
  }
  throw InputError("unknown experiment preset: " + name);
}

std::vector<ConvergenceRow> RunConvergenceExperiment(const ExperimentSpec& spec) {
  Validate(spec);
  if (spec.generator.family != Family::kCircular) {
    throw InputError("convergence experiment needs the circular family");
  }
  const double mi_true = CircularMutualInformation(spec.generator.n);
  std::vector<ConvergenceRow> rows(spec.sizes.size() * spec.repetitions);
  ForEachCell(spec, [&](size_t index, size_t size_index, int32_t rep) {
    GeneratorSpec gen = spec.generator;
    gen.m = spec.sizes[size_index];
    gen.seed = CellSeed(spec.seed, size_index, rep);
    const GeneratedGraph graph = Generate(gen);
    FitConfig fit = spec.fit;
    fit.seed = gen.seed + 1;
    fit.threads = 1;
    fit.progress = nullptr;
    const auto start = std::chrono::steady_clock::now();
    const FitResult result = VnsFit(graph.sample, fit);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    ConvergenceRow& row = rows[index];
    row.size = gen.m;
    row.rep = rep;
    row.source_clusters = result.best_model.cluster_count(Side::kSource);
    row.target_clusters = result.best_model.cluster_count(Side::kTarget);
    const ModlMiEstimate mi = EstimateModlMi(result);
    row.mi_modl = mi.full;
    row.mi_modl_lh = mi.likelihood_only;
    row.mi_empirical =
        InformationMetrics(BaselineEstimate(*graph.sample, BaselineKind::kEmpirical)).mutual_information;
    row.mi_laplace =
        InformationMetrics(BaselineEstimate(*graph.sample, BaselineKind::kLaplace)).mutual_information;
    row.mi_true = mi_true;
    row.seconds = seconds;
    row.criterion_null = Coclustering::Null(graph.sample).criterion().total;
    row.criterion_best = result.best_criterion.total;
  });
  return rows;
}

std::vector<CurveRow> RunClusterCurve(const ExperimentSpec& spec) {
  Validate(spec);
  std::vector<CurveRow> rows(spec.sizes.size() * spec.repetitions);
  ForEachCell(spec, [&](size_t index, size_t size_index, int32_t rep) {
    GeneratorSpec gen = spec.generator;
    gen.m = spec.sizes[size_index];
    gen.seed = CellSeed(spec.seed, size_index, rep);
    const GeneratedGraph graph = Generate(gen);
    FitConfig fit = spec.fit;
    fit.seed = gen.seed + 1;
    fit.threads = 1;
    fit.progress = nullptr;
    const auto start = std::chrono::steady_clock::now();
    const FitResult result = VnsFit(graph.sample, fit);
    CurveRow& row = rows[index];
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.size = gen.m;
    row.rep = rep;
    row.source_clusters = result.best_model.cluster_count(Side::kSource);
    row.target_clusters = result.best_model.cluster_count(Side::kTarget);
    row.recovered =
        row.source_clusters == graph.block_count && row.target_clusters == graph.block_count;
  });
  return rows;
}

void WriteConvergenceCsv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "size,rep,k_s,k_t,mi_modl,mi_modl_lh,mi_empirical,mi_laplace,mi_true,seconds\n";
  for (const ConvergenceRow& r : rows) {
    out << r.size << ',' << r.rep << ',' << r.source_clusters << ',' << r.target_clusters << ','
        << Num(r.mi_modl) << ',' << Num(r.mi_modl_lh) << ',' << Num(r.mi_empirical) << ','
        << Num(r.mi_laplace) << ',' << Num(r.mi_true) << ',' << Num(r.seconds) << '\n';
  }
  using R = ConvergenceRow;
  WriteAggregates<R, 8>(out, rows,
                        {[](const R& r) { return double(r.source_clusters); },
                         [](const R& r) { return double(r.target_clusters); },
                         [](const R& r) { return r.mi_modl; },
                         [](const R& r) { return r.mi_modl_lh; },
                         [](const R& r) { return r.mi_empirical; },
                         [](const R& r) { return r.mi_laplace; },
                         [](const R& r) { return r.mi_true; },
                         [](const R& r) { return r.seconds; }});
}

void WriteCurveCsv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << "size,rep,k_s,k_t,seconds,recovered\n";
  for (const CurveRow& r : rows) {
    out << r.size << ',' << r.rep << ',' << r.source_clusters << ',' << r.target_clusters << ','
        << Num(r.seconds) << ',' << (r.recovered ? 1 : 0) << '\n';
  }
  using R = CurveRow;
  WriteAggregates<R, 4>(out, rows,
                        {[](const R& r) { return double(r.source_clusters); },
                         [](const R& r) { return double(r.target_clusters); },
                         [](const R& r) { return r.seconds; },
                         [](const R& r) { return r.recovered ? 1.0 : 0.0; }});
}

std::string ConvergenceSummaryJson(const ExperimentSpec& spec,
                                   const std::vector<ConvergenceRow>& rows) {
  Json j;
  j["tool_version"] = kVersion;
  j["experiment"] = SpecJson(spec);
  Json sizes = Json::array();
  for (const auto& [size, group] : BySize(rows)) {
    std::vector<double> ks, err, err_lh;
    for (const ConvergenceRow* r : group) {
      ks.push_back(r->source_clusters);
      err.push_back(std::fabs(r->mi_modl - r->mi_true));
      err_lh.push_back(std::fabs(r->mi_modl_lh - r->mi_true));
    }
    sizes.push_back({{"size", size},
                     {"mean_k_s", Summarize(ks).mean},
                     {"mean_abs_error_modl", Summarize(err).mean},
                     {"mean_abs_error_modl_lh", Summarize(err_lh).mean}});
  }
  j["sizes"] = sizes;
  return j.dump(2);
}

std::string CurveSummaryJson(const ExperimentSpec& spec, const std::vector<CurveRow>& rows) {
  Json j;
  j["tool_version"] = kVersion;
  j["experiment"] = SpecJson(spec);
  Json sizes = Json::array();
  for (const auto& [size, group] : BySize(rows)) {
    std::vector<double> ks, kt, rec, secs;
    for (const CurveRow* r : group) {
      ks.push_back(r->source_clusters);
      kt.push_back(r->target_clusters);
      rec.push_back(r->recovered ? 1.0 : 0.0);
      secs.push_back(r->seconds);
    }
    sizes.push_back({{"size", size},
                     {"mean_k_s", Summarize(ks).mean},
                     {"mean_k_t", Summarize(kt).mean},
                     {"recovery_fraction", Summarize(rec).mean},
                     {"mean_seconds", Summarize(secs).mean}});
  }
  j["sizes"] = sizes;
  return j.dump(2);
}

}  // namespace modl
