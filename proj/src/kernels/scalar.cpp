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

#include <algorithm>
#include <cstdlib>

#include "chainaudit/kernels.hpp"
#include "chainaudit/model.hpp"

namespace chainaudit::kernels::scalar {

PairCounts count_violation_pairs(const PairColumns& cols, std::int64_t epsilon) {
  PairCounts counts;
  const std::size_t n = cols.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t after = cols.time[i] + epsilon;
    const auto first = static_cast<std::size_t>(
        std::upper_bound(cols.time.begin(), cols.time.end(), after) - cols.time.begin());
    const chainaudit::Int128 fee_i = cols.fee[i];
    const chainaudit::Int128 vsize_i = cols.vsize[i];
    for (std::size_t j = first; j < n; ++j) {
      if (fee_i * cols.vsize[j] > cols.fee[j] * vsize_i) {
        ++counts.checked;
        if (cols.block[i] > cols.block[j]) ++counts.violations;
      }
    }
  }
  return counts;
}

std::int64_t abs_diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::llabs(static_cast<std::int64_t>(a[k]) - b[k]);
  return sum;
}

std::int64_t diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += static_cast<std::int64_t>(a[k]) - b[k];
  return sum;
}

}  // namespace chainaudit::kernels::scalar
