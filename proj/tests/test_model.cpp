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

#include <random>

#include "chainaudit/error.hpp"
#include "chainaudit/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace chainaudit;
using fixture::tid;

TEST(FeeRate, RejectsInvalidInputs) {
  EXPECT_THROW(FeeRate(1, 0), Error);
  EXPECT_THROW(FeeRate(-1, 10), Error);
  EXPECT_NO_THROW(FeeRate(0, 1));
}

TEST(FeeRate, ExactComparisonMatchesRationalOracle) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::int64_t> fee(0, 2'000'000'000'000LL);
  std::uniform_int_distribution<std::int64_t> size(1, 4'000'000);
  for (int i = 0; i < 1'000'000; ++i) {
    std::int64_t fa = fee(rng), sa = size(rng), fb, sb;
    if (i % 4 == 0) {
      // scaled copies are equal as rationals but not bit-equal as doubles
      const std::int64_t k = size(rng) % 97 + 2;
      fa %= 1'000'000'000;
      fb = fa * k;
      sb = sa * k;
    } else {
      fb = fee(rng);
      sb = size(rng);
    }
    const auto got = FeeRate(fa, sa) <=> FeeRate(fb, sb);
    const auto ra = oracle::rate(fa, sa);
    const auto rb = oracle::rate(fb, sb);
    const auto want = ra < rb ? std::strong_ordering::less
                      : ra > rb ? std::strong_ordering::greater
                                : std::strong_ordering::equal;
    ASSERT_EQ(got, want) << fa << "/" << sa << " vs " << fb << "/" << sb;
  }
}

TEST(FeeRate, NearTiesThatFloatsConfuse) {
  // (3e17 + 1) / 3 and 1e17 are equal as doubles
  const FeeRate a(300'000'000'000'000'001, 3);
  const FeeRate b(100'000'000'000'000'000, 1);
  EXPECT_GT(a, b);
  EXPECT_EQ(FeeRate(10, 4), FeeRate(5, 2));
  EXPECT_DOUBLE_EQ(FeeRate(10, 4).value(), 2.5);
}

TEST(Percentile, Convention) {
  EXPECT_EQ((PercentilePosition{1, 1}.percentile()), 0.0);
  EXPECT_EQ((PercentilePosition{1, 5}.percentile()), 0.0);
  EXPECT_EQ((PercentilePosition{5, 5}.percentile()), 100.0);
  EXPECT_EQ((PercentilePosition{2, 3}.percentile()), 50.0);
  double prev = -1.0;
  for (std::int64_t r = 1; r <= 37; ++r) {
    const double p = PercentilePosition{r, 37}.percentile();
    EXPECT_GT(p, prev);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 100.0);
    prev = p;
  }
}

TEST(ChainData, BuildsIndexes) {
  auto c = fixture::chain({fixture::block(10, 100, {1, 2}), fixture::block(11, 200, {3})},
                          {fixture::tx(1, 100, 1000, 50), fixture::tx(2, 100, 500, 40, {1}),
                           fixture::tx(3, 200, 200, std::nullopt), fixture::tx(4, 100, 100, 60, {99})});
  EXPECT_EQ(c.block_count(), 2u);
  EXPECT_EQ(c.txs().size(), 4u);
  EXPECT_EQ(c.confirm_pos(fixture::at(c, 1)), 0);
  EXPECT_EQ(c.confirm_pos(fixture::at(c, 3)), 1);
  EXPECT_EQ(c.confirm_pos(fixture::at(c, 4)), -1);
  EXPECT_EQ(c.block_pos(11), std::optional<std::size_t>(1));
  EXPECT_FALSE(c.block_pos(12));
  ASSERT_EQ(c.parents_of(fixture::at(c, 2)).size(), 1u);
  EXPECT_EQ(c.parents_of(fixture::at(c, 2))[0], fixture::at(c, 1));
  EXPECT_TRUE(c.parents_of(fixture::at(c, 4)).empty());  // parent outside the data set
  // by_received: sorted by time, unobserved omitted
  std::vector<TxIndex> want{fixture::at(c, 2), fixture::at(c, 1), fixture::at(c, 4)};
  EXPECT_EQ(std::vector<TxIndex>(c.by_received().begin(), c.by_received().end()), want);
  EXPECT_EQ(c.pool_at(0), "unknown");
}

TEST(ChainData, RejectsDuplicateTxid) {
  try {
    fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(1, 2, 2, 0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicateTxid);
  }
}

TEST(ChainData, RejectsSelfParent) {
  try {
    fixture::chain({}, {fixture::tx(1, 1, 1, 0, {1})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
  }
}

TEST(ChainData, RejectsNonIncreasingHeights) {
  try {
    fixture::chain({fixture::block(5, 0, {}), fixture::block(5, 1, {})}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedRecord);
  }
}

TEST(ChainData, RejectsDoubleConfirmation) {
  try {
    fixture::chain({fixture::block(1, 0, {1}), fixture::block(2, 1, {1})}, {fixture::tx(1, 1, 1, 0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDuplicateTxid);
  }
}

TEST(ChainData, ReportsEveryDanglingTxid) {
  try {
    fixture::chain({fixture::block(1, 0, {1, 7}), fixture::block(2, 1, {8})}, {fixture::tx(1, 1, 1, 0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDanglingTxid);
    EXPECT_EQ(e.items(), (std::vector<std::string>{tid(7), tid(8)}));
    EXPECT_NE(std::string(e.what()).find(tid(7)), std::string::npos);
  }
}

TEST(ChainData, ResolveSortsAndDropsUnknown) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0)});
  const std::vector<Txid> ids{tid(2), tid(9), tid(1), tid(2)};
  EXPECT_EQ(c.resolve(ids), (std::vector<TxIndex>{0, 1}));
}

TEST(PoolDirectory, Validation) {
  PoolDirectory d;
  d.markers["A"] = {"/A/"};
  d.markers["B"] = {"/B/"};
  EXPECT_NO_THROW(d.validate());
  EXPECT_TRUE(d.knows("A"));
  EXPECT_FALSE(d.knows("C"));
  d.markers["C"] = {"/A/"};
  EXPECT_THROW(d.validate(), Error);
  d.markers.erase("C");
  d.markers["unknown"] = {"x"};
  EXPECT_THROW(d.validate(), Error);
  d.markers.erase("unknown");
  d.markers["E"] = {""};
  EXPECT_THROW(d.validate(), Error);
}

TEST(ErrorKind, NamesAreStable) {
  EXPECT_EQ(to_string(ErrorKind::kDanglingTxid), "DanglingTxid");
  EXPECT_EQ(to_string(ErrorKind::kApproximationInvalid), "ApproximationInvalid");
  const Error e(ErrorKind::kNoCBlocks, "nothing");
  EXPECT_NE(std::string(e.what()).find("NoCBlocks"), std::string::npos);
}

}  // namespace
