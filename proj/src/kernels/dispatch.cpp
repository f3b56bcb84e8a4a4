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

#include <cstdlib>
#include <stdexcept>
#include <string>

#include "chainaudit/kernels.hpp"

namespace chainaudit::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::kScalar, &scalar::count_violation_pairs, &scalar::abs_diff_sum,
                                   &scalar::diff_sum};
#if defined(CHAIN_AUDIT_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Isa::kAvx2, &avx2::count_violation_pairs, &avx2::abs_diff_sum, &avx2::diff_sum};
#endif

const KernelTable& select() {
  if (const char* forced = std::getenv("CHAIN_AUDIT_ISA")) {
    const std::string want(forced);
    if (want == "scalar") return kScalarTable;
    if (want == "avx2" && supported(Isa::kAvx2)) return table(Isa::kAvx2);
  }
  if (supported(Isa::kAvx2)) return table(Isa::kAvx2);
  return kScalarTable;
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return true;
    case Isa::kAvx2:
#if defined(CHAIN_AUDIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) throw std::invalid_argument("kernel ISA not available: " + std::string(name(isa)));
#if defined(CHAIN_AUDIT_HAVE_AVX2)
  if (isa == Isa::kAvx2) return kAvx2Table;
#endif
  return kScalarTable;
}

const KernelTable& active() {
  static const KernelTable& chosen = select();
  return chosen;
}

}  // namespace chainaudit::kernels
