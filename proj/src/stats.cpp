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

#include "chainaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "chainaudit/error.hpp"
#include "chainaudit/ingest.hpp"
#include "chainaudit/ordering.hpp"

namespace chainaudit {
namespace {

void check_binomial_args(std::int64_t x, std::int64_t y, double theta0) {
  if (!(theta0 > 0.0 && theta0 < 1.0)) {
    throw Error(ErrorKind::kDomainError, "theta0 must lie in (0, 1), got " + std::to_string(theta0));
  }
  if (y < 0 || x < 0 || x > y) {
    throw Error(ErrorKind::kDomainError, "need 0 <= x <= y, got x=" + std::to_string(x) + " y=" + std::to_string(y));
  }
}

double upper_normal_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

// Both tails go through the regularized incomplete beta function:
//   P(B >= x) = I_theta(x, y - x + 1),  P(B <= x) = 1 - I_theta(x + 1, y - x).
double binom_p_accel(std::int64_t x, std::int64_t y, double theta0) {
  check_binomial_args(x, y, theta0);
  if (x == 0) return 1.0;
  return boost::math::ibeta(static_cast<double>(x), static_cast<double>(y - x + 1), theta0);
}

double binom_p_decel(std::int64_t x, std::int64_t y, double theta0) {
  check_binomial_args(x, y, theta0);
  if (x == y) return 1.0;
  return boost::math::ibetac(static_cast<double>(x + 1), static_cast<double>(y - x), theta0);
}

double normal_approx_p(std::int64_t x, std::int64_t y, double theta0, Tail tail, bool continuity_correction) {
  check_binomial_args(x, y, theta0);
  const double mean = static_cast<double>(y) * theta0;
  const double variance = mean * (1.0 - theta0);
  if (variance < 9.0) {
    throw Error(ErrorKind::kApproximationInvalid,
                "y*theta0*(1-theta0) = " + std::to_string(variance) + " is below 9");
  }
  const double sd = std::sqrt(variance);
  const double half = continuity_correction ? 0.5 : 0.0;
  if (tail == Tail::kDecel) {
    return 1.0 - upper_normal_tail((static_cast<double>(x) + half - mean) / sd);
  }
  // P(B >= x) = 1 - P(B <= x - 1)
  return upper_normal_tail((static_cast<double>(x - 1) + half - mean) / sd);
}

double fisher_combine(std::span<const double> p_values) {
  if (p_values.empty()) throw Error(ErrorKind::kDomainError, "no p-values to combine");
  double statistic = 0.0;
  for (double p : p_values) {
    if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::kDomainError, "p-value outside (0, 1]: " + std::to_string(p));
    statistic -= 2.0 * std::log(p);
  }
  // chi-square with 2k degrees of freedom: Q(k, X / 2)
  return boost::math::gamma_q(static_cast<double>(p_values.size()), statistic / 2.0);
}

DiffTestResult run_diff_test(const ChainData& chain, std::string_view pool, std::span<const TxIndex> c_txs,
                             HeightRange window, double alpha) {
  DiffTestResult r;
  r.pool = std::string(pool);
  r.alpha = alpha;
  r.theta0 = hash_rate(chain, pool, window);
  if (!(r.theta0 > 0.0 && r.theta0 < 1.0)) {
    throw Error(ErrorKind::kDomainError, "pool " + r.pool + " has degenerate hash rate " + std::to_string(r.theta0));
  }

  std::vector<std::size_t> c_blocks;
  for (TxIndex t : c_txs) {
    const auto pos = chain.confirm_pos(t);
    if (pos < 0) continue;
    if (window.contains(chain.blocks()[static_cast<std::size_t>(pos)].height)) {
      c_blocks.push_back(static_cast<std::size_t>(pos));
    }
  }
  std::sort(c_blocks.begin(), c_blocks.end());
  c_blocks.erase(std::unique(c_blocks.begin(), c_blocks.end()), c_blocks.end());
  if (c_blocks.empty()) throw Error(ErrorKind::kNoCBlocks, "no block in the window contains a c-transaction");

  std::vector<std::size_t> own;
  for (std::size_t b : c_blocks) {
    if (chain.pool_at(b) == pool) own.push_back(b);
  }
  r.y = static_cast<std::int64_t>(c_blocks.size());
  r.x = static_cast<std::int64_t>(own.size());
  r.p_accel = binom_p_accel(r.x, r.y, r.theta0);
  r.p_decel = binom_p_decel(r.x, r.y, r.theta0);
  if (!own.empty()) {
    try {
      r.sppe = sppe(own, c_txs, chain);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoCTxFound) throw;
    }
  }
  return r;
}

}  // namespace chainaudit
