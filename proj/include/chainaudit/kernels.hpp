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

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Data-parallel inner loops. Every kernel has a scalar reference in
// kernels::scalar and may have a vector variant; active() picks the best one
// the CPU supports at first use. Setting CHAIN_AUDIT_ISA=scalar forces the
// reference path. All kernels are integer-exact, so variants must agree bit
// for bit.

namespace chainaudit::kernels {

// Column view of a transaction set for pair scanning. Rows must be sorted by
// `time` ascending; `block` is the confirming block position.
struct PairColumns {
  std::span<const std::int64_t> time;
  std::span<const std::int64_t> fee;
  std::span<const std::int64_t> vsize;
  std::span<const std::int64_t> block;

  std::size_t size() const noexcept { return time.size(); }
};

struct PairCounts {
  std::uint64_t checked = 0;     // time_i + eps < time_j and rate_i > rate_j
  std::uint64_t violations = 0;  // ... and block_i > block_j
  bool operator==(const PairCounts&) const = default;
};

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  PairCounts (*count_violation_pairs)(const PairColumns& cols, std::int64_t epsilon);
  // Sum of |a[k] - b[k]|.
  std::int64_t (*abs_diff_sum)(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
  // Sum of a[k] - b[k].
  std::int64_t (*diff_sum)(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
};

std::string_view name(Isa isa);
bool supported(Isa isa);
// Throws std::invalid_argument when the ISA is not compiled in or not supported.
const KernelTable& table(Isa isa);
const KernelTable& active();

namespace scalar {
PairCounts count_violation_pairs(const PairColumns& cols, std::int64_t epsilon);
std::int64_t abs_diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
std::int64_t diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
}  // namespace scalar

#if defined(CHAIN_AUDIT_HAVE_AVX2)
namespace avx2 {
// Falls back to the scalar kernel when a fee or vsize does not fit in 31 bits.
PairCounts count_violation_pairs(const PairColumns& cols, std::int64_t epsilon);
std::int64_t abs_diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
std::int64_t diff_sum(std::span<const std::int32_t> a, std::span<const std::int32_t> b);
}  // namespace avx2
#endif

}  // namespace chainaudit::kernels
