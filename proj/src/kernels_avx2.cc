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

// AVX2 variants of the kernels in kernels.cc. This file is compiled with
// -mavx2 and only entered after a runtime CPU check.

#include <immintrin.h>

#include "modl/kernels.h"

namespace modl::kernels {
namespace {

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256i Load(const int64_t* p) {
  return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(p));
}

inline __m256d Gather(const double* lf, __m256i idx) {
  return _mm256_i64gather_pd(lf, idx, 8);
}

double FusionGain(const int64_t* a, const int64_t* b, size_t n,
                  const double* lf) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i va = Load(a + i);
    const __m256i vb = Load(b + i);
    const __m256d fu = Gather(lf, _mm256_add_epi64(va, vb));
    const __m256d fa = Gather(lf, va);
    const __m256d fb = Gather(lf, vb);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(_mm256_sub_pd(fu, fa), fb));
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) sum += lf[a[i] + b[i]] - lf[a[i]] - lf[b[i]];
  return sum;
}

double SumLogFactorial(const int64_t* c, size_t n, const double* lf) {
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, Gather(lf, Load(c + i)));
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) sum += lf[c[i]];
  return sum;
}

double ScatterGain(const int64_t* cells, int64_t base, const int64_t* offset,
                   const int64_t* delta, size_t n, const double* lf) {
  const __m256i vbase = _mm256_set1_epi64x(base);
  const auto* cells_ll = reinterpret_cast<const long long*>(cells);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i idx = _mm256_add_epi64(vbase, Load(offset + i));
    const __m256i c = _mm256_i64gather_epi64(cells_ll, idx, 8);
    const __m256d after = Gather(lf, _mm256_add_epi64(c, Load(delta + i)));
    acc = _mm256_add_pd(acc, _mm256_sub_pd(after, Gather(lf, c)));
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) {
    const int64_t c = cells[base + offset[i]];
    sum += lf[c + delta[i]] - lf[c];
  }
  return sum;
}

void PairGainShift(int64_t a, int64_t b, const int64_t* A, const int64_t* B,
                   size_t n, const double* lf, double* out) {
  const int64_t u = a + b;
  const double lu = lf[u], la = lf[a], lb = lf[b];
  const __m256i vu = _mm256_set1_epi64x(u);
  const __m256i va = _mm256_set1_epi64x(a);
  const __m256i vb = _mm256_set1_epi64x(b);
  const __m256d vlu = _mm256_set1_pd(lu);
  const __m256d vla = _mm256_set1_pd(la);
  const __m256d vlb = _mm256_set1_pd(lb);
  size_t q = 0;
  for (; q + 4 <= n; q += 4) {
    const __m256i xa = Load(A + q);
    const __m256i xb = Load(B + q);
    const __m256i xu = _mm256_add_epi64(xa, xb);
    const __m256d gu = _mm256_sub_pd(
        _mm256_sub_pd(Gather(lf, _mm256_add_epi64(vu, xu)), vlu), Gather(lf, xu));
    const __m256d ga = _mm256_sub_pd(
        _mm256_sub_pd(Gather(lf, _mm256_add_epi64(va, xa)), vla), Gather(lf, xa));
    const __m256d gb = _mm256_sub_pd(
        _mm256_sub_pd(Gather(lf, _mm256_add_epi64(vb, xb)), vlb), Gather(lf, xb));
    _mm256_storeu_pd(out + q, _mm256_sub_pd(_mm256_sub_pd(gu, ga), gb));
  }
  for (; q < n; ++q) {
    const int64_t U = A[q] + B[q];
    out[q] = (lf[u + U] - lu - lf[U]) - (lf[a + A[q]] - la - lf[A[q]]) -
             (lf[b + B[q]] - lb - lf[B[q]]);
  }
}

size_t Argmin(const double* v, size_t n) {
  if (n < 8) {
    size_t best = 0;
    for (size_t i = 1; i < n; ++i) {
      if (v[i] < v[best]) best = i;
    }
    return best;
  }
  // Per-lane first minimum; strict compare keeps the earliest index per lane.
  __m256d best_val = _mm256_loadu_pd(v);
  __m256d best_idx = _mm256_set_pd(3, 2, 1, 0);
  __m256d idx = best_idx;
  const __m256d step = _mm256_set1_pd(4);
  size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    idx = _mm256_add_pd(idx, step);
    const __m256d x = _mm256_loadu_pd(v + i);
    const __m256d lt = _mm256_cmp_pd(x, best_val, _CMP_LT_OQ);
    best_val = _mm256_blendv_pd(best_val, x, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
  }
  alignas(32) double vals[4];
  alignas(32) double idxs[4];
  _mm256_store_pd(vals, best_val);
  _mm256_store_pd(idxs, best_idx);
  size_t best = static_cast<size_t>(idxs[0]);
  double best_v = vals[0];
  for (int lane = 1; lane < 4; ++lane) {
    const auto li = static_cast<size_t>(idxs[lane]);
    if (vals[lane] < best_v || (vals[lane] == best_v && li < best)) {
      best_v = vals[lane];
      best = li;
    }
  }
  for (; i < n; ++i) {
    if (v[i] < best_v) {
      best_v = v[i];
      best = i;
    }
  }
  return best;
}

constexpr KernelSet kAvx2{"avx2", FusionGain, SumLogFactorial, ScatterGain,
                          PairGainShift, Argmin};

}  // namespace

const KernelSet* Avx2Kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &kAvx2 : nullptr;
}

}  // namespace modl::kernels
