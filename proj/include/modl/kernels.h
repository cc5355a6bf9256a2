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

#ifndef MODL_KERNELS_H_
#define MODL_KERNELS_H_

#include <cstddef>
#include <cstdint>

namespace modl::kernels {

// Inner loops of criterion evaluation. Every kernel reads a table `lf` with
// lf[c] = ln c!, indexed by non-negative edge counts. The scalar versions are
// the reference; vector versions must agree to rounding.
struct KernelSet {
  const char* name;

  // sum_i lf[a_i + b_i] - lf[a_i] - lf[b_i]: the factorial gain of fusing
  // two rows of cocluster counts.
  double (*fusion_gain)(const int64_t* a, const int64_t* b, size_t n,
                        const double* lf);

  // sum_i lf[c_i].
  double (*sum_log_factorial)(const int64_t* c, size_t n, const double* lf);

  // sum_i lf[cells[base + offset_i] + delta_i] - lf[cells[base + offset_i]]:
  // the factorial change of adding signed deltas to scattered cells.
  double (*scatter_gain)(const int64_t* cells, int64_t base,
                         const int64_t* offset, const int64_t* delta, size_t n,
                         const double* lf);

  // out[q] = g(u, U_q) - g(a, A_q) - g(b, B_q) with g(x, y) = lf[x + y] -
  // lf[x] - lf[y]: how fusing two rows changes the fusion gain of the pair
  // (p, q) on the other side, for fixed p with values u = a + b.
  void (*pair_gain_shift)(int64_t a, int64_t b, const int64_t* A,
                          const int64_t* B, size_t n, const double* lf,
                          double* out);

  // Index of the first minimum of v[0..n); n must be positive.
  size_t (*argmin)(const double* v, size_t n);
};

const KernelSet& ScalarKernels();

// AVX2 kernels when compiled in and supported by the running CPU, else null.
const KernelSet* Avx2Kernels();

enum class Mode { kAuto, kScalar };

// Active kernel set. Auto-selects the widest supported variant unless
// SetMode(kScalar) was called or MODL_KERNELS=scalar is in the environment.
const KernelSet& Active();
void SetMode(Mode mode);

}  // namespace modl::kernels

#endif  // MODL_KERNELS_H_
