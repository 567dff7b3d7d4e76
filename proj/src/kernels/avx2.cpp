// Copyright 2026 The taxeval Authors
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

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include "taxeval/kernels.hpp"

namespace taxeval::kernels {

namespace {

void count_above(const double* column, std::size_t n, double tau, std::uint32_t* counts) {
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(column + i);
    const __m256d hit = _mm256_and_pd(_mm256_cmp_pd(x, vtau, _CMP_GT_OQ), ones);
    const __m128i inc = _mm256_cvtpd_epi32(hit);
    __m128i c = _mm_loadu_si128(reinterpret_cast<const __m128i*>(counts + i));
    _mm_storeu_si128(reinterpret_cast<__m128i*>(counts + i), _mm_add_epi32(c, inc));
  }
  for (; i < n; ++i) counts[i] += column[i] > tau ? 1u : 0u;
}

OverlapTally tally_overlaps(const std::uint32_t* counts, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i sum = _mm256_setzero_si256();  // 4 x u64
  std::uint64_t covered = 0;
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(counts + i));
    const __m256i is_zero = _mm256_cmpeq_epi32(c, zero);
    const int zero_bits = _mm256_movemask_ps(_mm256_castsi256_ps(is_zero));
    covered += 8 - static_cast<std::uint64_t>(__builtin_popcount(static_cast<unsigned>(zero_bits)));
    sum = _mm256_add_epi64(sum, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(c)));
    sum = _mm256_add_epi64(sum, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(c, 1)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), sum);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    covered += counts[i] > 0 ? 1u : 0u;
    total += counts[i];
  }
  return {covered, total - covered};
}

void add_into(double* acc, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) acc[i] += x[i];
}

void divide(double* x, std::size_t n, double divisor) {
  const __m256d d = _mm256_set1_pd(divisor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_div_pd(_mm256_loadu_pd(x + i), d));
  for (; i < n; ++i) x[i] /= divisor;
}

inline __m256d load_u32_as_pd(const std::uint32_t* p) {
  // Counts stay far below 2^31, so the signed conversion is exact.
  return _mm256_cvtepi32_pd(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

void f1_from_counts(const std::uint32_t* tp, const std::uint32_t* fp, const std::uint32_t* fn,
                    std::size_t n, double* precision, double* recall, double* f1) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d two = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = load_u32_as_pd(tp + i);
    const __m256d pred = _mm256_add_pd(t, load_u32_as_pd(fp + i));
    const __m256d gold = _mm256_add_pd(t, load_u32_as_pd(fn + i));
    const __m256d p = _mm256_and_pd(_mm256_cmp_pd(pred, zero, _CMP_GT_OQ), _mm256_div_pd(t, pred));
    const __m256d r = _mm256_and_pd(_mm256_cmp_pd(gold, zero, _CMP_GT_OQ), _mm256_div_pd(t, gold));
    const __m256d s = _mm256_add_pd(p, r);
    const __m256d f = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(two, p), r), s);
    _mm256_storeu_pd(precision + i, p);
    _mm256_storeu_pd(recall + i, r);
    _mm256_storeu_pd(f1 + i, _mm256_and_pd(_mm256_cmp_pd(s, zero, _CMP_GT_OQ), f));
  }
  if (i < n) scalar::kTable.f1_from_counts(tp + i, fp + i, fn + i, n - i, precision + i, recall + i, f1 + i);
}

}  // namespace

namespace avx2 {
const KernelTable kTable{Isa::Avx2, count_above, tally_overlaps, add_into, divide, f1_from_counts};
}  // namespace avx2

}  // namespace taxeval::kernels
