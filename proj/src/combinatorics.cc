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

#include "modl/combinatorics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include "modl/error.h"

namespace modl {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln S(r, i) for i in [0, width) from row r-1, in place, descending i so
// that prev[i - 1] is still the value of row r-1.
void AdvanceStirlingRow(std::vector<double>& row, int64_t r) {
  const int64_t top = std::min<int64_t>(r, static_cast<int64_t>(row.size()) - 1);
  for (int64_t i = top; i >= 1; --i) {
    const double stay = row[i] == kNegInf ? kNegInf
                                          : std::log(static_cast<double>(i)) + row[i];
    row[i] = LogSumExp(stay, row[i - 1]);
  }
  row[0] = kNegInf;
}

}  // namespace

double LogSumExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

Combinatorics::Combinatorics() : factorials_(std::make_shared<Table>(1, 0.0)) {}

std::shared_ptr<Combinatorics> Combinatorics::Shared() {
  static const auto instance = std::make_shared<Combinatorics>();
  return instance;
}

std::shared_ptr<const Combinatorics::Table> Combinatorics::GrowFactorials(
    int64_t min_size) {
  std::unique_lock lock(mutex_);
  const auto& current = *factorials_;
  const auto have = static_cast<int64_t>(current.size());
  if (have >= min_size) return factorials_;
  const int64_t target =
      std::min(kMaxFactorialTable, std::max(min_size, 2 * have));
  auto grown = std::make_shared<Table>(current);
  grown->resize(target);
  // Running sum of ln i with Neumaier compensation keeps the relative error
  // near one ulp even for millions of terms.
  double sum = current.back();
  double carry = 0.0;
  for (int64_t i = have; i < target; ++i) {
    const double term = std::log(static_cast<double>(i));
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      carry += (sum - t) + term;
    } else {
      carry += (term - t) + sum;
    }
    sum = t;
    (*grown)[i] = sum + carry;
  }
  factorials_ = std::move(grown);
  return factorials_;
}

std::shared_ptr<const Combinatorics::Table> Combinatorics::LogFactorialTable(
    int64_t min_size) {
  {
    std::shared_lock lock(mutex_);
    if (static_cast<int64_t>(factorials_->size()) >= min_size) {
      return factorials_;
    }
  }
  return GrowFactorials(std::min(min_size, kMaxFactorialTable));
}

double Combinatorics::LogFactorial(int64_t n) {
  if (n < 0) throw InputError("log factorial of negative number");
  if (n >= kMaxFactorialTable) return std::lgamma(static_cast<double>(n) + 1.0);
  {
    std::shared_lock lock(mutex_);
    if (n < static_cast<int64_t>(factorials_->size())) return (*factorials_)[n];
  }
  return (*GrowFactorials(n + 1))[n];
}

double Combinatorics::LogBinomial(int64_t n, int64_t k) {
  if (k < 0 || n < 0 || k > n) {
    throw InputError("log binomial requires 0 <= k <= n (n=" +
                     std::to_string(n) + ", k=" + std::to_string(k) + ")");
  }
  return LogFactorial(n) - LogFactorial(k) - LogFactorial(n - k);
}

std::shared_ptr<const Combinatorics::Table> Combinatorics::PartitionRow(
    int64_t n, int64_t k_max) {
  if (n < 1 || k_max < 1) {
    throw InputError("partition count requires n >= 1 and k >= 1");
  }
  const int64_t want = std::min(k_max, n);
  {
    std::shared_lock lock(mutex_);
    auto it = partition_rows_.find(n);
    if (it != partition_rows_.end() &&
        static_cast<int64_t>(it->second->size()) > want) {
      return it->second;
    }
  }
  std::unique_lock lock(mutex_);
  auto& slot = partition_rows_[n];
  if (slot && static_cast<int64_t>(slot->size()) > want) return slot;
  const int64_t have = slot ? static_cast<int64_t>(slot->size()) - 1 : 0;
  const int64_t width = std::min(n, std::max(want, 2 * have)) + 1;

  // Stirling recurrence S(r, i) = i S(r-1, i) + S(r-1, i-1), carried in
  // log space for r = 1..n, truncated to i < width.
  std::vector<double> stirling(width, kNegInf);
  stirling[0] = 0.0;  // S(0, 0) = 1
  for (int64_t r = 1; r <= n; ++r) AdvanceStirlingRow(stirling, r);

  auto row = std::make_shared<Table>(width, kNegInf);
  double prefix = kNegInf;
  for (int64_t k = 1; k < width; ++k) {
    prefix = LogSumExp(prefix, stirling[k]);
    (*row)[k] = prefix;
  }
  slot = std::move(row);
  return slot;
}

double Combinatorics::LogPartitionCount(int64_t n, int64_t k) {
  const int64_t kk = std::min(k, n);
  return (*PartitionRow(n, kk))[kk];
}

double LogFactorial(int64_t n) { return Combinatorics::Shared()->LogFactorial(n); }

double LogBinomial(int64_t n, int64_t k) {
  return Combinatorics::Shared()->LogBinomial(n, k);
}

double LogPartitionCount(int64_t n, int64_t k) {
  return Combinatorics::Shared()->LogPartitionCount(n, k);
}

}  // namespace modl
