/*
 * Copyright 2026 The chain-audit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <bit>
#include <cstdlib>

#include "chainaudit/kernels.hpp"

namespace chainaudit::kernels::avx2 {
namespace {

constexpr std::int64_t kMaxOperand = std::int64_t{1} << 31;

bool fits_31_bits(std::span<const std::int64_t> xs) {
  return std::all_of(xs.begin(), xs.end(), [](std::int64_t v) { return v >= 0 && v < kMaxOperand; });
}

inline int lane_count(__m256i mask) { return std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(mask)))); }

// Four int32 values from p, widened to int64 lanes so differences cannot overflow.
inline __m256i load_widened(const std::int32_t* p) {
  return _mm256_cvtepi32_epi64(_mm_loadu_si128(reinterpret_cast<const __m128i*>(p)));
}

inline __m256i abs_epi64(__m256i v) {
  const __m256i sign = _mm256_cmpgt_epi64(_mm256_setzero_si256(), v);
  return _mm256_sub_epi64(_mm256_xor_si256(v, sign), sign);
}

inline std::int64_t horizontal_sum(__m256i acc) {
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

}  // namespace

PairCounts count_violation_pairs(const PairColumns& cols, std::int64_t epsilon) {
  // Products of two 31-bit operands fit a signed 64-bit lane.
  if (!fits_31_bits(cols.fee) || !fits_31_bits(cols.vsize)) return scalar::count_violation_pairs(cols, epsilon);

  PairCounts counts;
  const std::size_t n = cols.size();
  const std::int64_t* fee = cols.fee.data();
  const std::int64_t* vsize = cols.vsize.data();
  const std::int64_t* block = cols.block.data();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t after = cols.time[i] + epsilon;
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(cols.time.begin(), cols.time.end(), after) - cols.time.begin());
    const __m256i fee_i = _mm256_set1_epi64x(fee[i]);
    const __m256i vsize_i = _mm256_set1_epi64x(vsize[i]);
    const __m256i block_i = _mm256_set1_epi64x(block[i]);
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256i fee_j = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(fee + j));
      const __m256i vsize_j = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(vsize + j));
      const __m256i block_j = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(block + j));
      const __m256i lhs = _mm256_mul_epu32(fee_i, vsize_j);
      const __m256i rhs = _mm256_mul_epu32(fee_j, vsize_i);
      const __m256i richer = _mm256_cmpgt_epi64(lhs, rhs);
      const __m256i later = _mm256_and_si256(richer, _mm256_cmpgt_epi64(block_i, block_j));
      checked += static_cast<std::uint64_t>(lane_count(richer));
      violations += static_cast<std::uint64_t>(lane_count(later));
    }
    for (; j < n; ++j) {
      if (fee[i] * vsize[j] > fee[j] * vsize[i]) {
        ++checked;
        if (block[i] > block[j]) ++violations;
      }
    }
    counts.checked += checked;
    counts.violations += violations;
  }
  return counts;
}

std::int64_t abs_diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t k = 0;
  for (; k + 4 <= a.size(); k += 4) {
    const __m256i d = _mm256_sub_epi64(load_widened(a.data() + k), load_widened(b.data() + k));
    acc = _mm256_add_epi64(acc, abs_epi64(d));
  }
  std::int64_t sum = horizontal_sum(acc);
  for (; k < a.size(); ++k) sum += std::llabs(static_cast<std::int64_t>(a[k]) - b[k]);
  return sum;
}

std::int64_t diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t k = 0;
  for (; k + 4 <= a.size(); k += 4) {
    acc = _mm256_add_epi64(acc, _mm256_sub_epi64(load_widened(a.data() + k), load_widened(b.data() + k)));
  }
  std::int64_t sum = horizontal_sum(acc);
  for (; k < a.size(); ++k) sum += static_cast<std::int64_t>(a[k]) - b[k];
  return sum;
}

}  // namespace chainaudit::kernels::avx2
