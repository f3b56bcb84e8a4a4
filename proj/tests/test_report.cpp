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

#include <cmath>
#include <limits>

#include "chainaudit/report.hpp"
#include "fixtures.hpp"

namespace {

using namespace chainaudit;
using report::Json;

TEST(FormatFixed, RoundsAndCleansNegativeZero) {
  EXPECT_EQ(report::format_fixed(0.17531, 4), "0.1753");
  EXPECT_EQ(report::format_fixed(78.54944, 4), "78.5494");
  EXPECT_EQ(report::format_fixed(-1e-9, 4), "0.0000");
  EXPECT_EQ(report::format_fixed(-0.5, 2), "-0.50");
  EXPECT_EQ(report::format_fixed(std::nan(""), 4), "nan");
  EXPECT_EQ(report::format_fixed(std::numeric_limits<double>::infinity(), 4), "nan");
}

TEST(CsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(report::csv_field("F2Pool"), "F2Pool");
  EXPECT_EQ(report::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(report::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(DiffTestsCsv, TableLayout) {
  DiffTestResult f2;
  f2.pool = "F2Pool";
  f2.theta0 = 0.17531;
  f2.x = 466;
  f2.y = 839;
  f2.p_accel = 1e-40;
  f2.p_decel = 0.99999999;
  f2.sppe = 78.54941;
  DiffTestResult none;
  none.pool = "Odd,Name";
  none.theta0 = 0.01;
  none.y = 3;
  none.p_decel = 0.97;
  const std::vector<DiffTestResult> rows{f2, none};
  EXPECT_EQ(report::diff_tests_csv(rows),
            "pool,theta0,x,y,p_accel,p_decel,sppe\n"
            "F2Pool,0.1753,466,839,0.0000,1.0000,78.5494\n"
            "\"Odd,Name\",0.0100,0,3,1.0000,0.9700,\n");
  EXPECT_EQ(report::diff_tests_csv(rows, 2).substr(0, 52), "pool,theta0,x,y,p_accel,p_decel,sppe\nF2Pool,0.18,466");
}

TEST(DiffTestJson, NullSppeAndFlags) {
  DiffTestResult r;
  r.pool = "P";
  r.theta0 = 0.1;
  r.x = 5;
  r.y = 10;
  r.p_accel = 0.001;
  r.p_decel = 0.9999;
  const auto j = report::to_json(r);
  EXPECT_TRUE(j["sppe"].is_null());
  EXPECT_TRUE(j["accelerates"].get<bool>());
  EXPECT_FALSE(j["decelerates"].get<bool>());
  EXPECT_EQ(j.begin().key(), "pool");
}

TEST(OtherCsv, HeadersAndRows) {
  const std::vector<PositionStats> pos{{7, 3, 33.333333333, {}}};
  EXPECT_EQ(report::positions_csv(pos), "height,n,ppe\n7,3,33.333333\n");
  const std::vector<ViolationStats> v{{100, 0, 4, 1, 0.25}};
  EXPECT_EQ(report::violations_csv(v),
            "snapshot_time,epsilon_seconds,pairs_checked,violations,fraction\n100,0,4,1,0.250000\n");
  FeeShare share{{{650'000, 62'500'000, 625'000'000, 100.0 * 62.5 / 687.5}}, 100.0 * 62.5 / 687.5};
  EXPECT_EQ(report::fee_share_csv(share),
            "height,fees,subsidy,share_percent\n650000,62500000,625000000,9.0909\naggregate,,,9.0909\n");
  EXPECT_EQ(report::cdf_csv(Cdf{{1.0, 0.5}, {2.0, 1.0}}), "value,fraction\n1.000000,0.500000\n2.000000,1.000000\n");
}

TEST(Json, NanBecomesNull) {
  ViolationStats v;
  v.fraction = std::nan("");
  EXPECT_TRUE(report::to_json(v)["fraction"].is_null());
  const auto cdf = report::to_json(Cdf{{1.0, 1.0}});
  EXPECT_EQ(cdf.dump(), "[[1.0,1.0]]");
}

TEST(Json, BaselineAndPositions) {
  const auto c = fixture::chain({fixture::block(1, 100, {1})}, {fixture::tx(1, 10, 10, 0), fixture::tx(2, 10, 20, 0)});
  BaselineReport r;
  r.height = 1;
  r.capacity_vbytes = 10;
  r.actual = {0};
  r.baseline = {1};
  r.only_actual = {0};
  r.only_baseline = {1};
  r.overlap_ratio = 0.0;
  r.overlap_ratio_vbytes = 0.0;
  const auto j = report::to_json(r, c);
  EXPECT_EQ(j["actual_count"], 1);
  EXPECT_EQ(j["only_actual"][0], fixture::tid(1));
  EXPECT_EQ(j["only_baseline"][0], fixture::tid(2));

  PositionStats s{1, 2, 50.0, {{fixture::tid(1), -50.0}}};
  const auto p = report::to_json(s);
  EXPECT_EQ(p["sppe"][fixture::tid(1)], -50.0);
  s.per_tx_sppe.clear();
  EXPECT_FALSE(report::to_json(s).contains("sppe"));
}

TEST(Json, DarkFeeAndCongestion) {
  const DarkFeeBucket b{99.0, {"aa", "bb"}};
  const auto j = report::to_json(b, "BTC.com");
  EXPECT_EQ(j["count"], 2);
  EXPECT_EQ(j["pool"], "BTC.com");
  CongestionReport c;
  c.series = {{0, 1}, {15, 2}};
  const auto cj = report::to_json(c);
  EXPECT_EQ(cj["samples"], 2);
  EXPECT_EQ(cj["fee_rate_cdf"].size(), 4u);
  EXPECT_EQ(cj["delay_blocks_cdf"].size(), 3u);
}

}  // namespace
