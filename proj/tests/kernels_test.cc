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

#include "modl/kernels.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "modl/combinatorics.h"

namespace modl::kernels {
namespace {

class KernelEquivalenceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    wide_ = Avx2Kernels();
    if (wide_ == nullptr) GTEST_SKIP() << "no AVX2 kernels on this machine";
    table_ = Combinatorics::Shared()->LogFactorialTable(4096);
    lf_ = table_->data();
  }

  std::vector<int64_t> Counts(size_t n, int64_t max, double zero_fraction) {
    std::vector<int64_t> v(n);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto& x : v) x = coin(gen_) < zero_fraction ? 0 : static_cast<int64_t>(gen_() % max);
    return v;
  }

  static void ExpectClose(double a, double b) {
    EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::fabs(b)));
  }

  const KernelSet* wide_ = nullptr;
  std::shared_ptr<const Combinatorics::Table> table_;
  const double* lf_ = nullptr;
  std::mt19937_64 gen_{42};
};

TEST_F(KernelEquivalenceTest, FusionGain) {
  for (size_t n = 0; n < 70; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto a = Counts(n, 1000, 0.3), b = Counts(n, 1000, 0.3);
      ExpectClose(wide_->fusion_gain(a.data(), b.data(), n, lf_),
                  ScalarKernels().fusion_gain(a.data(), b.data(), n, lf_));
    }
  }
}

TEST_F(KernelEquivalenceTest, SumLogFactorial) {
  for (size_t n = 0; n < 70; ++n) {
    const auto c = Counts(n, 4000, 0.2);
    ExpectClose(wide_->sum_log_factorial(c.data(), n, lf_),
                ScalarKernels().sum_log_factorial(c.data(), n, lf_));
  }
}

TEST_F(KernelEquivalenceTest, ScatterGain) {
  const auto cells = Counts(500, 1000, 0.2);
  for (size_t n = 0; n < 70; ++n) {
    std::vector<int64_t> offset(n), delta(n);
    const int64_t base = 37;
    for (size_t i = 0; i < n; ++i) {
      offset[i] = static_cast<int64_t>(gen_() % 400);
      const int64_t c = cells[base + offset[i]];
      delta[i] = static_cast<int64_t>(gen_() % 50) - std::min<int64_t>(c, 25);
    }
    ExpectClose(wide_->scatter_gain(cells.data(), base, offset.data(), delta.data(), n, lf_),
                ScalarKernels().scatter_gain(cells.data(), base, offset.data(), delta.data(), n,
                                             lf_));
  }
}

TEST_F(KernelEquivalenceTest, PairGainShift) {
  for (size_t n = 0; n < 70; ++n) {
    const auto A = Counts(n, 1000, 0.4), B = Counts(n, 1000, 0.4);
    const int64_t a = gen_() % 1000, b = gen_() % 1000;
    std::vector<double> out_w(n), out_s(n);
    wide_->pair_gain_shift(a, b, A.data(), B.data(), n, lf_, out_w.data());
    ScalarKernels().pair_gain_shift(a, b, A.data(), B.data(), n, lf_, out_s.data());
    for (size_t q = 0; q < n; ++q) ExpectClose(out_w[q], out_s[q]);
  }
}

TEST_F(KernelEquivalenceTest, ArgminReturnsFirstMinimum) {
  std::uniform_int_distribution<int> small(0, 5);
  for (size_t n = 1; n < 90; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> v(n);
      for (auto& x : v) x = small(gen_);
      if (rep % 3 == 0) {
        for (auto& x : v) {
          if (gen_() % 4 == 0) x = std::numeric_limits<double>::infinity();
        }
      }
      EXPECT_EQ(wide_->argmin(v.data(), n), ScalarKernels().argmin(v.data(), n)) << n;
    }
  }
  std::vector<double> inf(20, std::numeric_limits<double>::infinity());
  EXPECT_EQ(wide_->argmin(inf.data(), inf.size()), 0u);
}

TEST(KernelDispatchTest, ScalarModeForcesScalar) {
  SetMode(Mode::kScalar);
  EXPECT_STREQ(Active().name, "scalar");
  SetMode(Mode::kAuto);
  if (Avx2Kernels() != nullptr) EXPECT_STREQ(Active().name, Avx2Kernels()->name);
}

}  // namespace
}  // namespace modl::kernels
