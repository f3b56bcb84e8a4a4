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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "chainaudit/kernels.hpp"
#include "oracles.hpp"

namespace {

using namespace chainaudit::kernels;

struct Columns {
  std::vector<std::int64_t> time, fee, vsize, block;
  PairColumns view() const { return {time, fee, vsize, block}; }
  std::vector<oracle::PairRow> rows() const {
    std::vector<oracle::PairRow> r;
    for (std::size_t i = 0; i < time.size(); ++i) r.push_back({time[i], fee[i], vsize[i], block[i]});
    return r;
  }
};

Columns random_columns(std::mt19937_64& rng, std::size_t n, std::int64_t max_fee, std::int64_t max_vsize) {
  Columns c;
  std::int64_t t = 0;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<std::int64_t>(rng() % 3);  // frequent equal times
    c.time.push_back(t);
    const std::int64_t vsize = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_vsize));
    c.vsize.push_back(vsize);
    // a quarter of fees sit on small integer rates so ties are common
    c.fee.push_back(rng() % 4 == 0 ? vsize * static_cast<std::int64_t>(rng() % 5)
                                   : static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_fee)));
    c.block.push_back(static_cast<std::int64_t>(rng() % 8));
  }
  return c;
}

void expect_same(const PairCounts& got, const oracle::Pairs& want) {
  EXPECT_EQ(got.checked, want.checked);
  EXPECT_EQ(got.violations, want.violations);
}

TEST(Kernels, ScalarPairCountMatchesExhaustiveScan) {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 2u, 3u, 7u, 8u, 9u, 31u, 64u, 130u}) {
    const auto c = random_columns(rng, n, 50'000, 1'000);
    for (std::int64_t eps : {0, 1, 2, 10}) {
      expect_same(scalar::count_violation_pairs(c.view(), eps), oracle::pair_scan(c.rows(), eps));
    }
  }
}

TEST(Kernels, ScalarDiffSums) {
  const std::vector<std::int32_t> a{1, 5, 3, 9}, b{4, 2, 3, 1};
  EXPECT_EQ(scalar::abs_diff_sum(a, b), 3 + 3 + 0 + 8);
  EXPECT_EQ(scalar::diff_sum(a, b), -3 + 3 + 0 + 8);
}

TEST(Kernels, ActiveTableHonoursSupport) {
  const auto& t = active();
  EXPECT_TRUE(supported(t.isa));
  EXPECT_TRUE(supported(Isa::kScalar));
  EXPECT_EQ(table(Isa::kScalar).isa, Isa::kScalar);
  EXPECT_EQ(name(Isa::kScalar), "scalar");
  EXPECT_EQ(name(Isa::kAvx2), "avx2");
  if (!supported(Isa::kAvx2)) EXPECT_THROW(table(Isa::kAvx2), std::invalid_argument);
}

class VectorKernels : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!supported(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available on this machine";
  }
};

TEST_F(VectorKernels, PairCountEqualsScalar) {
  const auto& v = table(Isa::kAvx2);
  std::mt19937_64 rng(2);
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = rng() % 200;
    const auto c = random_columns(rng, n, 1'000'000, 100'000);
    const std::int64_t eps = static_cast<std::int64_t>(rng() % 6);
    ASSERT_EQ(v.count_violation_pairs(c.view(), eps), scalar::count_violation_pairs(c.view(), eps))
        << "n=" << n << " eps=" << eps;
  }
}

TEST_F(VectorKernels, PairCountEqualsOracleAtLaneBoundaries) {
  const auto& v = table(Isa::kAvx2);
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 40; ++n) {
    const auto c = random_columns(rng, n, 2'000, 50);
    expect_same(v.count_violation_pairs(c.view(), 0), oracle::pair_scan(c.rows(), 0));
  }
}

TEST_F(VectorKernels, WideValuesFallBackExactly) {
  const auto& v = table(Isa::kAvx2);
  std::mt19937_64 rng(4);
  for (int round = 0; round < 20; ++round) {
    auto c = random_columns(rng, 60, 1'000, 100);
    // operands past 31 bits, cross products past 64 bits
    c.fee[rng() % 60] = (std::int64_t{1} << 40) + static_cast<std::int64_t>(rng() % 7);
    c.vsize[rng() % 60] = (std::int64_t{1} << 33) + 1;
    const auto want = oracle::pair_scan(c.rows(), 1);
    expect_same(v.count_violation_pairs(c.view(), 1), want);
    expect_same(scalar::count_violation_pairs(c.view(), 1), want);
  }
}

TEST_F(VectorKernels, DiffSumsEqualScalar) {
  const auto& v = table(Isa::kAvx2);
  std::mt19937_64 rng(5);
  for (std::size_t n = 0; n < 300; n += 1 + n / 10) {
    std::vector<std::int32_t> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<std::int32_t>(rng() % 2'000'000) - 1'000'000;
      b[i] = static_cast<std::int32_t>(rng() % 2'000'000) - 1'000'000;
    }
    ASSERT_EQ(v.abs_diff_sum(a, b), scalar::abs_diff_sum(a, b)) << n;
    ASSERT_EQ(v.diff_sum(a, b), scalar::diff_sum(a, b)) << n;
  }
  // extremes must not overflow the vector accumulators
  std::vector<std::int32_t> hi(1000, INT32_MAX), lo(1000, INT32_MIN);
  EXPECT_EQ(v.abs_diff_sum(hi, lo), scalar::abs_diff_sum(hi, lo));
  EXPECT_EQ(v.diff_sum(lo, hi), scalar::diff_sum(lo, hi));
}

}  // namespace
