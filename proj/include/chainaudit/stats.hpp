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
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "chainaudit/model.hpp"

namespace chainaudit {

enum class Tail { kAccel, kDecel };

// P(B >= x) for B ~ Binomial(y, theta0). Throws kDomainError unless
// 0 <= x <= y and 0 < theta0 < 1.
double binom_p_accel(std::int64_t x, std::int64_t y, double theta0);
// P(B <= x).
double binom_p_decel(std::int64_t x, std::int64_t y, double theta0);

// Normal approximation of the same tails. Throws kApproximationInvalid when
// y * theta0 * (1 - theta0) < 9.
double normal_approx_p(std::int64_t x, std::int64_t y, double theta0, Tail tail, bool continuity_correction = true);

// Fisher's method: upper tail of chi-square(2k) at -2 * sum(ln p).
double fisher_combine(std::span<const double> p_values);

struct DiffTestResult {
  std::string pool;
  double theta0 = 0.0;
  std::int64_t x = 0;  // c-blocks mined by the pool
  std::int64_t y = 0;  // c-blocks in the window
  double p_accel = 1.0;
  double p_decel = 1.0;
  std::optional<double> sppe;  // absent when the pool mined no c-block
  double alpha = 0.01;

  bool accelerates() const noexcept { return p_accel < alpha; }
  bool decelerates() const noexcept { return p_decel < alpha; }
};

DiffTestResult run_diff_test(const ChainData& chain, std::string_view pool, std::span<const TxIndex> c_txs,
                             HeightRange window, double alpha = 0.01);

}  // namespace chainaudit
