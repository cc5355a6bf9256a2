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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "modl/kernels.h"

namespace modl::kernels {
namespace {

double FusionGain(const int64_t* a, const int64_t* b, size_t n,
                  const double* lf) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sum += lf[a[i] + b[i]] - lf[a[i]] - lf[b[i]];
  }
  return sum;
}

double SumLogFactorial(const int64_t* c, size_t n, const double* lf) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) sum += lf[c[i]];
  return sum;
}

double ScatterGain(const int64_t* cells, int64_t base, const int64_t* offset,
                   const int64_t* delta, size_t n, const double* lf) {
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const int64_t c = cells[base + offset[i]];
    sum += lf[c + delta[i]] - lf[c];
  }
  return sum;
}

void PairGainShift(int64_t a, int64_t b, const int64_t* A, const int64_t* B,
                   size_t n, const double* lf, double* out) {
  const int64_t u = a + b;
  const double lu = lf[u], la = lf[a], lb = lf[b];
  for (size_t q = 0; q < n; ++q) {
    const int64_t U = A[q] + B[q];
    out[q] = (lf[u + U] - lu - lf[U]) - (lf[a + A[q]] - la - lf[A[q]]) -
             (lf[b + B[q]] - lb - lf[B[q]]);
  }
}

size_t Argmin(const double* v, size_t n) {
  size_t best = 0;
  for (size_t i = 1; i < n; ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

constexpr KernelSet kScalar{"scalar", FusionGain, SumLogFactorial, ScatterGain,
                            PairGainShift, Argmin};

std::atomic<int> g_mode{-1};

bool EnvForcesScalar() {
  const char* env = std::getenv("MODL_KERNELS");
  return env != nullptr && std::strcmp(env, "scalar") == 0;
}

}  // namespace

const KernelSet& ScalarKernels() { return kScalar; }

#if !defined(MODL_HAVE_AVX2)
const KernelSet* Avx2Kernels() { return nullptr; }
#endif

void SetMode(Mode mode) { g_mode.store(static_cast<int>(mode)); }

const KernelSet& Active() {
  int mode = g_mode.load(std::memory_order_relaxed);
  if (mode < 0) {
    mode = static_cast<int>(EnvForcesScalar() ? Mode::kScalar : Mode::kAuto);
    g_mode.store(mode);
  }
  if (mode == static_cast<int>(Mode::kAuto)) {
    static const KernelSet* const wide = Avx2Kernels();
    if (wide != nullptr) return *wide;
  }
  return kScalar;
}

}  // namespace modl::kernels
