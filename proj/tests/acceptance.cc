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

// Acceptance driver: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "modl/bench.h"
#include "modl/coclustering.h"
#include "modl/combinatorics.h"
#include "modl/density.h"
#include "modl/optimizer.h"
#include "modl/synthgen.h"
#include "oracles.h"

namespace modl {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string Format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Format(const char* fmt, ...) {
  char buf[1024];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

std::shared_ptr<const MultigraphSample> RandomSample(std::mt19937_64& gen, int32_t ns, int32_t nt,
                                                     int64_t m) {
  std::vector<Edge> edges;
  for (int64_t e = 0; e < m; ++e) {
    edges.push_back({static_cast<int32_t>(gen() % ns), static_cast<int32_t>(gen() % nt), 1});
  }
  std::vector<std::string> s(ns), t(nt);
  for (int32_t i = 0; i < ns; ++i) s[i] = "s" + std::to_string(i);
  for (int32_t i = 0; i < nt; ++i) t[i] = "t" + std::to_string(i);
  return std::make_shared<const MultigraphSample>(s, t, edges);
}

// Uniformly drawn restricted growth string, capped at k_max clusters.
std::vector<int32_t> RandomPartition(std::mt19937_64& gen, int32_t n, int32_t k_max) {
  std::vector<int32_t> a(n, 0);
  int32_t top = 0;
  for (int32_t i = 1; i < n; ++i) {
    a[i] = static_cast<int32_t>(gen() % std::min(top + 2, k_max));
    top = std::max(top, a[i]);
  }
  return a;
}

double RelErr(double got, long double want) {
  const long double scale = std::max<long double>(1.0L, std::fabs(want));
  return static_cast<double>(std::fabs(static_cast<long double>(got) - want) / scale);
}

Outcome CriterionExactness() {
  std::mt19937_64 gen(101);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int32_t ns = 1 + gen() % 5, nt = 1 + gen() % 5;
    auto g = RandomSample(gen, ns, nt, 1 + gen() % 8);
    const auto src = RandomPartition(gen, ns, ns), tgt = RandomPartition(gen, nt, nt);
    const CriterionBreakdown c = Coclustering::FromPartitions(g, src, tgt).criterion();
    const testing::OracleTerms o = testing::OracleCriterion(*g, src, tgt);
    const std::pair<double, long double> terms[] = {
        {c.cluster_count_prior, o.cluster_count_prior},
        {c.partition_prior, o.partition_prior},
        {c.cocluster_prior, o.cocluster_prior},
        {c.source_degree_prior, o.source_degree_prior},
        {c.target_degree_prior, o.target_degree_prior},
        {c.cocluster_likelihood, o.cocluster_likelihood},
        {c.source_degree_likelihood, o.source_degree_likelihood},
        {c.target_degree_likelihood, o.target_degree_likelihood},
        {c.total, o.total()}};
    for (auto [got, want] : terms) worst = std::max(worst, RelErr(got, want));
  }

  // Partition counts by enumeration of restricted growth strings.
  Combinatorics comb;
  double worst_partition = 0.0;
  for (int32_t n = 1; n <= 12; ++n) {
    std::vector<int64_t> exactly(n + 1, 0);
    testing::ForEachPartition(n, [&](const std::vector<int32_t>&, int32_t k) { ++exactly[k]; });
    int64_t prefix = 0;
    for (int32_t k = 1; k <= n; ++k) {
      prefix += exactly[k];
      worst_partition = std::max(
          worst_partition, RelErr(comb.LogPartitionCount(n, k), std::log((long double)prefix)));
    }
  }

  // Multinomial coefficients: every composition of m <= 8 into at most 4 parts.
  double worst_multinomial = 0.0;
  for (int64_t m = 1; m <= 8; ++m) {
    for (int64_t a = 0; a <= m; ++a) {
      for (int64_t b = 0; a + b <= m; ++b) {
        for (int64_t c = 0; a + b + c <= m; ++c) {
          const std::vector<int64_t> parts = {a, b, c, m - a - b - c};
          double got = comb.LogFactorial(m);
          for (int64_t p : parts) got -= comb.LogFactorial(p);
          const int64_t count = testing::CountOrderings(parts);
          worst_multinomial =
              std::max(worst_multinomial, RelErr(got, std::log((long double)count)));
        }
      }
    }
  }
  const double all = std::max({worst, worst_partition, worst_multinomial});
  return {all <= 1e-9, Format("max rel err: criterion %.2e, partition counts %.2e, "
                              "multinomials %.2e (tol 1e-9)",
                              worst, worst_partition, worst_multinomial)};
}

Outcome IncrementalDeltas() {
  std::mt19937_64 gen(202);
  double worst = 0.0;
  int ops = 0, merges = 0;
  while (ops < 1000) {
    const int32_t ns = 3 + gen() % 28, nt = 3 + gen() % 28;
    auto g = RandomSample(gen, ns, nt, 10 + gen() % 400);
    Coclustering model = Coclustering::FromPartitions(g, RandomPartition(gen, ns, 1 + gen() % ns),
                                                      RandomPartition(gen, nt, 1 + gen() % nt));
    for (int step = 0; step < 20 && ops < 1000; ++step, ++ops) {
      const Side side = gen() % 2 ? Side::kSource : Side::kTarget;
      const int32_t k = model.cluster_count(side);
      const double before = model.Recompute().total;
      double predicted, applied;
      if (k >= 2 && gen() % 2) {
        const int32_t a = gen() % k;
        int32_t b = gen() % (k - 1);
        if (b >= a) ++b;
        predicted = model.MergeDelta(side, a, b);
        applied = model.Merge(side, a, b);
        ++merges;
      } else {
        const int32_t n = side == Side::kSource ? ns : nt;
        const int32_t v = gen() % n;
        int32_t dest = static_cast<int32_t>(gen() % (k + 1)) - 1;  // -1 opens a cluster
        if (dest == model.cluster_of(side, v)) dest = Coclustering::kFreshCluster;
        predicted = model.MoveDelta(side, v, dest);
        applied = model.Move(side, v, dest);
      }
      const double after = model.Recompute().total;
      worst = std::max({worst, std::fabs(predicted - (after - before)),
                        std::fabs(applied - (after - before)),
                        std::fabs(model.criterion().total - after)});
    }
  }
  return {worst <= 1e-9, Format("%d operations (%d merges, %d moves), max |delta - recompute| "
                                "%.2e (tol 1e-9)",
                                ops, merges, ops - merges, worst)};
}

Outcome TinyMapRecovery() {
  const auto start = Clock::now();
  std::mt19937_64 gen(303);
  int hits = 0;
  const int instances = 50;
  for (int t = 0; t < instances; ++t) {
    auto g = RandomSample(gen, 2 + gen() % 4, 2 + gen() % 4, 1 + gen() % 12);
    long double best = std::numeric_limits<long double>::infinity();
    testing::ForEachPartition(g->source_count(), [&](const std::vector<int32_t>& s, int32_t) {
      testing::ForEachPartition(g->target_count(), [&](const std::vector<int32_t>& tp, int32_t) {
        best = std::min(best, testing::OracleCriterion(*g, s, tp).total());
      });
    });
    FitConfig config;
    config.rounds = 10;
    config.seed = 1000 + t;
    if (VnsFit(g, config).best_criterion.total <= best + 1e-9) ++hits;
  }
  const double seconds = Since(start);
  return {hits >= 48 && seconds < 60.0,
          Format("%d/%d instances at the enumerated minimum (need >= 95%%), %.1f s (need < 60 s)",
                 hits, instances, seconds)};
}

int CountSingle(const std::vector<CurveRow>& rows, int64_t size) {
  int count = 0;
  for (const CurveRow& r : rows) {
    if (r.size == size && r.source_clusters == 1 && r.target_clusters == 1) ++count;
  }
  return count;
}

int CountRecovered(const std::vector<CurveRow>& rows, int64_t size) {
  int count = 0;
  for (const CurveRow& r : rows) count += r.size == size && r.recovered;
  return count;
}

Outcome NoiseResilience() {
  int single = 0, runs = 0;
  std::string detail;
  for (const char* preset : {"random-100", "random-1000"}) {
    ExperimentSpec spec = PresetExperiment(preset, false);
    spec.sizes = {2000, 20000};
    spec.repetitions = 25;
    spec.seed = 404;
    const auto rows = RunClusterCurve(spec);
    for (int64_t size : spec.sizes) {
      const int s = CountSingle(rows, size);
      single += s;
      runs += spec.repetitions;
      detail += Format(" %s@%lld:%d/%d", preset, (long long)size, s, spec.repetitions);
    }
  }
  return {single >= 95, Format("%d/%d runs with one cluster per side (need >= 95);%s", single,
                               runs, detail.c_str())};
}

Outcome BlockmodelRecovery() {
  ExperimentSpec spec = PresetExperiment("blockmodel", false);
  spec.sizes = {100, 1000};
  spec.repetitions = 100;
  spec.seed = 505;
  const auto rows = RunClusterCurve(spec);
  const int three = CountRecovered(rows, 1000);
  const int one = CountSingle(rows, 100);
  double seconds = 0.0;
  for (const CurveRow& r : rows) seconds += r.size == 1000 ? r.seconds : 0.0;
  seconds /= spec.repetitions;
  return {three >= 90 && one >= 90 && seconds <= 2.0,
          Format("m=1000: %d/100 with 3x3 (need >= 90); m=100: %d/100 single (need >= 90); "
                 "mean fit time at m=1000 %.3f s (need <= 2.0 s)",
                 three, one, seconds)};
}

Outcome BlockDiagonalThresholds() {
  struct Case {
    const char* preset;
    std::vector<int64_t> sizes;
    int32_t reps;
  };
  const Case cases[] = {{"pure-10-2", {200, 400, 1000}, 100},
                        {"noisy-10-2", {800, 1600, 3200}, 100},
                        {"pure-100-10", {10000}, 20}};
  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    ExperimentSpec spec = PresetExperiment(c.preset, false);
    spec.sizes = c.sizes;
    spec.repetitions = c.reps;
    spec.seed = 606;
    const auto rows = RunClusterCurve(spec);
    for (int64_t size : c.sizes) {
      const int hit = CountRecovered(rows, size);
      pass = pass && hit >= 0.9 * c.reps;
      detail += Format(" %s@%lld:%d/%d", c.preset, (long long)size, hit, c.reps);
    }
  }
  return {pass, "recovered block count (need >= 90% per size);" + detail};
}

struct SizeStats {
  double mi_modl = 0, mi_lh = 0, mi_emp = 0, mi_lap = 0, err_modl = 0, err_lh = 0, worst_err = 0;
  int single = 0, full = 0, reps = 0;
};

Outcome CircularConvergence(const std::vector<ConvergenceRow>& rows) {
  std::map<int64_t, SizeStats> by;
  double truth = 0.0;
  for (const ConvergenceRow& r : rows) {
    SizeStats& s = by[r.size];
    truth = r.mi_true;
    s.mi_modl += r.mi_modl;
    s.mi_lh += r.mi_modl_lh;
    s.mi_emp += r.mi_empirical;
    s.mi_lap += r.mi_laplace;
    s.err_modl += std::fabs(r.mi_modl - r.mi_true);
    s.err_lh += std::fabs(r.mi_modl_lh - r.mi_true);
    s.worst_err = std::max(s.worst_err, std::fabs(r.mi_modl - r.mi_true));
    s.single += r.source_clusters == 1 && r.target_clusters == 1;
    s.full += r.source_clusters == 100 && r.target_clusters == 100;
    ++s.reps;
  }
  for (auto& [size, s] : by) {
    for (double* v : {&s.mi_modl, &s.mi_lh, &s.mi_emp, &s.mi_lap, &s.err_modl, &s.err_lh}) {
      *v /= s.reps;
    }
  }
  const SizeStats &s100 = by[100], &s1k = by[1000], &s10k = by[10000], &s1m = by[1000000];
  const bool single = s100.single == s100.reps;
  const bool top = s1m.full == s1m.reps && s1m.worst_err <= 0.05;
  const bool order = s1k.mi_emp >= truth && truth >= s1k.mi_lap;
  const bool faster = s10k.err_lh < s10k.err_modl;
  return {single && top && order && faster,
          Format("m=100 single %d/%d; m=1e6 100x100 %d/%d, max |MI-true| %.4f (tol 0.05); "
                 "m=1e3 emp %.3f >= true %.3f >= laplace %.3f; m=1e4 MAE lh %.4f < full %.4f",
                 s100.single, s100.reps, s1m.full, s1m.reps, s1m.worst_err, s1k.mi_emp, truth,
                 s1k.mi_lap, s10k.err_lh, s10k.err_modl)};
}

double EmpiricalJointEntropy(const MultigraphSample& g) {
  return InformationMetrics(BaselineEstimate(g, BaselineKind::kEmpirical)).joint_entropy;
}

Outcome TheoremInvariants() {
  // Data processing: merges never increase the cluster mutual information.
  std::mt19937_64 gen(808);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const int32_t ns = 2 + gen() % 20, nt = 2 + gen() % 20;
    auto g = RandomSample(gen, ns, nt, 5 + gen() % 300);
    Coclustering model = Coclustering::FromPartitions(g, RandomPartition(gen, ns, ns),
                                                      RandomPartition(gen, nt, nt));
    Side side = gen() % 2 ? Side::kSource : Side::kTarget;
    if (model.cluster_count(side) < 2) side = side == Side::kSource ? Side::kTarget : Side::kSource;
    if (model.cluster_count(side) < 2) continue;
    const double before = ClusterMutualInformation(model);
    const int32_t k = model.cluster_count(side);
    const int32_t a = gen() % k;
    const int32_t b = (a + 1 + gen() % (k - 1)) % k;
    model.Merge(side, a, b);
    if (ClusterMutualInformation(model) > before + 1e-12) ++violations;
  }

  // Sample-level asymptotics of c(M)/m for fixed coarse models at m = 10^6.
  auto stirling_gap = [](const Coclustering& model) {
    const MultigraphSample& g = model.sample();
    const double approx = DegreeEntropy(g, Side::kSource) + DegreeEntropy(g, Side::kTarget) -
                          ClusterMutualInformation(model);
    return std::fabs(model.criterion().total / g.edge_count() - approx);
  };
  const GeneratedGraph block =
      GenBlockmodel(DefaultBlockMatrix(), DefaultClusterSizes(), 1000000, 8081);
  const double gap_block =
      stirling_gap(Coclustering::FromPartitions(block.sample, block.blocks, block.blocks));
  const GeneratedGraph circle = GenCircular(100, 1000000, 8082);
  const double gap_null = stirling_gap(Coclustering::Null(circle.sample));

  // c(M_best)/m approaches the empirical joint entropy on the circular family.
  std::vector<double> per_edge, gaps;
  for (int64_t m : {10000, 100000, 1000000}) {
    double c = 0.0, gap = 0.0;
    const int reps = 3;
    for (int r = 0; r < reps; ++r) {
      const GeneratedGraph g = GenCircular(100, m, 8090 + 10 * r + m % 7);
      FitConfig config;
      config.seed = 8100 + r;
      const double cm = VnsFit(g.sample, config).best_criterion.total / m;
      c += cm / reps;
      gap += (cm - EmpiricalJointEntropy(*g.sample)) / reps;
    }
    per_edge.push_back(c);
    gaps.push_back(gap);
  }
  const bool trend = per_edge[0] > per_edge[1] && per_edge[1] > per_edge[2] && gaps[0] > gaps[1] &&
                     gaps[1] > gaps[2] && gaps[2] > 0.0;
  return {violations == 0 && gap_block <= 0.01 && gap_null <= 0.01 && trend,
          Format("DPI violations %d/1000; m=1e6 |c/m - (H_S+H_T-I)| blockmodel %.5f, "
                 "circular null %.5f (tol 0.01); c/m %.4f > %.4f > %.4f with gap to H(S,T) "
                 "%.4f > %.4f > %.4f",
                 violations, gap_block, gap_null, per_edge[0], per_edge[1], per_edge[2], gaps[0],
                 gaps[1], gaps[2])};
}

Outcome ModularityMetric() {
  auto family_mean = [](double intra, double inter, uint64_t seed, bool* zero_ok) {
    double sum = 0.0;
    for (int s = 0; s < 20; ++s) {
      const GeneratedGraph g = GenUndirectedPattern(4, 10, intra, inter, seed + s);
      sum += Modularity(*g.sample, g.blocks);
      if (Modularity(*g.sample, std::vector<int32_t>(g.blocks.size(), 0)) != 0.0) *zero_ok = false;
    }
    return sum / 20;
  };
  bool zero_ok = true;
  const double quasi = family_mean(0.8, 0.1, 9000, &zero_ok);
  const double coclique = family_mean(0.0, 0.5, 9100, &zero_ok);
  const bool pass = std::fabs(quasi - 0.409) <= 0.05 && std::fabs(coclique + 0.251) <= 0.05 && zero_ok;
  return {pass, Format("quasi-clique mean Q %.4f (want 0.409 +- 0.05); coclique mean Q %.4f "
                       "(want -0.251 +- 0.05); single cluster Q == 0: %s",
                       quasi, coclique, zero_ok ? "yes" : "no")};
}

Outcome Scalability() {
  auto fit_seconds = [](int64_t m, uint64_t seed) {
    const GeneratedGraph g = GenBlockDiagonal(1000, 5, 0.5, m, seed);
    FitConfig config;
    config.seed = seed;
    config.threads = 1;
    const auto start = Clock::now();
    VnsFit(g.sample, config);
    return Since(start);
  };
  auto median = [&](int64_t m) {
    std::vector<double> t;
    for (uint64_t s = 0; s < 3; ++s) t.push_back(fit_seconds(m, 10000 + s));
    std::sort(t.begin(), t.end());
    return t[1];
  };
  const double small = median(10000);
  const double large = median(100000);
  const double exponent = std::log10(large / small);
  return {large < 600.0 && exponent <= 1.7,
          Format("Noisy(1000,5) median fit %.2f s at m=1e4, %.2f s at m=1e5 (need < 600 s); "
                 "scaling exponent %.3f (need <= 1.7)",
                 small, large, exponent)};
}

}  // namespace
}  // namespace modl

int main() {
  using modl::Outcome;
  std::vector<modl::ConvergenceRow> circular;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"criterion exactness", modl::CriterionExactness},
      {"incremental delta exactness", modl::IncrementalDeltas},
      {"MAP recovery on tiny instances", modl::TinyMapRecovery},
      {"noise resilience", modl::NoiseResilience},
      {"blockmodel recovery", modl::BlockmodelRecovery},
      {"block-diagonal thresholds", modl::BlockDiagonalThresholds},
      {"circular-graph convergence",
       [] {
         modl::ExperimentSpec spec = modl::PresetExperiment("circular", false);
         spec.sizes = {100, 1000, 10000, 100000, 1000000};
         spec.repetitions = 10;
         spec.seed = 707;
         return modl::CircularConvergence(modl::RunConvergenceExperiment(spec));
       }},
      {"theorem invariants", modl::TheoremInvariants},
      {"modularity metric", modl::ModularityMetric},
      {"scalability", modl::Scalability},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = modl::Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), modl::Since(start));
    std::fflush(stdout);
  }
  return failed;
}
