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

#ifndef MODL_COMBINATORICS_H_
#define MODL_COMBINATORICS_H_

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace modl {

// Log-space counting quantities used by the coclustering criterion: ln n!,
// ln C(n, k) and ln B(n, k), the number of partitions of n labeled elements
// into at most k (possibly empty) subsets. All logarithms are natural.
//
// Tables grow on demand. Growth publishes a new immutable snapshot, so a
// snapshot obtained from LogFactorialTable() or PartitionRow() stays valid
// and can be read lock-free by any number of threads.
class Combinatorics {
 public:
  using Table = std::vector<double>;

  Combinatorics();

  // Process-wide instance shared by models that are not given one.
  static std::shared_ptr<Combinatorics> Shared();

  double LogFactorial(int64_t n);

  // Requires 0 <= k <= n.
  double LogBinomial(int64_t n, int64_t k);

  // ln B(n, min(k, n)). Requires n >= 1 and k >= 1.
  double LogPartitionCount(int64_t n, int64_t k);

  // Snapshot with at least min_size entries: table[i] = ln i!.
  std::shared_ptr<const Table> LogFactorialTable(int64_t min_size);

  // Snapshot row for n with entries 0..min(k_max, n): row[k] = ln B(n, k),
  // row[0] = -inf.
  std::shared_ptr<const Table> PartitionRow(int64_t n, int64_t k_max);

  // Above this size ln n! falls back to std::lgamma instead of growing.
  static constexpr int64_t kMaxFactorialTable = int64_t{1} << 23;

 private:
  std::shared_ptr<const Table> GrowFactorials(int64_t min_size);

  mutable std::shared_mutex mutex_;
  std::shared_ptr<const Table> factorials_;
  std::unordered_map<int64_t, std::shared_ptr<const Table>> partition_rows_;
};

// Free-function forms over the shared instance.
double LogFactorial(int64_t n);
double LogBinomial(int64_t n, int64_t k);
double LogPartitionCount(int64_t n, int64_t k);

// ln(exp(a) + exp(b)), exact for -inf operands.
double LogSumExp(double a, double b);

}  // namespace modl

#endif  // MODL_COMBINATORICS_H_
