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

#include "chainaudit/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace chainaudit::report {
namespace {

Json txid_list(std::span<const TxIndex> txs, const ChainData& chain) {
  Json out = Json::array();
  for (TxIndex t : txs) out.push_back(chain.tx(t).txid);
  return out;
}

// JSON cannot carry NaN; emit null instead.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

std::string csv_field(std::string_view v) {
  if (v.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(v);
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_fixed(double value, int precision) {
  if (!std::isfinite(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s(buf);
  // "-0.0000" reads as a sign error in tables
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

Json to_json(const BaselineReport& r, const ChainData& chain) {
  Json j;
  j["height"] = r.height;
  j["capacity_vbytes"] = r.capacity_vbytes;
  j["actual_count"] = r.actual.size();
  j["baseline_count"] = r.baseline.size();
  j["overlap_ratio"] = number(r.overlap_ratio);
  j["overlap_ratio_vbytes"] = number(r.overlap_ratio_vbytes);
  j["only_actual"] = txid_list(r.only_actual, chain);
  j["only_baseline"] = txid_list(r.only_baseline, chain);
  return j;
}

Json to_json(const PositionStats& s) {
  Json j;
  j["height"] = s.height;
  j["n"] = s.n;
  j["ppe"] = number(s.ppe);
  if (!s.per_tx_sppe.empty()) {
    Json per = Json::object();
    for (const auto& [txid, v] : s.per_tx_sppe) per[txid] = number(v);
    j["sppe"] = std::move(per);
  }
  return j;
}

Json to_json(const ViolationStats& v) {
  Json j;
  j["snapshot_time"] = v.snapshot_time;
  j["epsilon_seconds"] = v.epsilon_seconds;
  j["pairs_checked"] = v.pairs_checked;
  j["violations"] = v.violations;
  j["fraction"] = number(v.fraction);
  return j;
}

Json to_json(const DiffTestResult& d) {
  Json j;
  j["pool"] = d.pool;
  j["theta0"] = number(d.theta0);
  j["x"] = d.x;
  j["y"] = d.y;
  j["p_accel"] = number(d.p_accel);
  j["p_decel"] = number(d.p_decel);
  j["sppe"] = d.sppe ? number(*d.sppe) : Json(nullptr);
  j["alpha"] = d.alpha;
  j["accelerates"] = d.accelerates();
  j["decelerates"] = d.decelerates();
  return j;
}

Json to_json(const DarkFeeBucket& b, std::string_view pool) {
  Json j;
  j["pool"] = pool;
  j["threshold"] = b.threshold;
  j["count"] = b.txids.size();
  j["txids"] = b.txids;
  return j;
}

Json to_json(const Cdf& cdf) {
  Json out = Json::array();
  for (const auto& [v, f] : cdf) out.push_back(Json::array({number(v), number(f)}));
  return out;
}

Json to_json(const CongestionReport& c) {
  Json j;
  j["interval_seconds"] = c.interval_seconds;
  j["capacity_vbytes"] = c.capacity_vbytes;
  j["samples"] = c.series.size();
  j["congested_fraction"] = number(c.congested_fraction);
  j["samples_per_bin"] = c.samples_per_bin;
  Json fee = Json::array();
  for (const auto& cdf : c.fee_rate_cdf) fee.push_back(to_json(cdf));
  j["fee_rate_cdf"] = std::move(fee);
  Json secs = Json::array();
  Json blocks = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    secs.push_back(to_json(c.delay_seconds_cdf[k]));
    blocks.push_back(to_json(c.delay_blocks_cdf[k]));
  }
  j["delay_seconds_cdf"] = std::move(secs);
  j["delay_blocks_cdf"] = std::move(blocks);
  return j;
}

std::string cdf_csv(const Cdf& cdf) {
  std::ostringstream out;
  out << "value,fraction\n";
  for (const auto& [v, f] : cdf) out << format_fixed(v, 6) << ',' << format_fixed(f, 6) << '\n';
  return out.str();
}

std::string positions_csv(std::span<const PositionStats> rows) {
  std::ostringstream out;
  out << "height,n,ppe\n";
  for (const auto& r : rows) out << r.height << ',' << r.n << ',' << format_fixed(r.ppe, 6) << '\n';
  return out.str();
}

std::string violations_csv(std::span<const ViolationStats> rows) {
  std::ostringstream out;
  out << "snapshot_time,epsilon_seconds,pairs_checked,violations,fraction\n";
  for (const auto& r : rows) {
    out << r.snapshot_time << ',' << r.epsilon_seconds << ',' << r.pairs_checked << ',' << r.violations << ','
        << format_fixed(r.fraction, 6) << '\n';
  }
  return out.str();
}

std::string diff_tests_csv(std::span<const DiffTestResult> rows, int precision) {
  std::ostringstream out;
  out << "pool,theta0,x,y,p_accel,p_decel,sppe\n";
  for (const auto& r : rows) {
    out << csv_field(r.pool) << ',' << format_fixed(r.theta0, precision) << ',' << r.x << ',' << r.y << ','
        << format_fixed(r.p_accel, precision) << ',' << format_fixed(r.p_decel, precision) << ','
        << (r.sppe ? format_fixed(*r.sppe, precision) : std::string()) << '\n';
  }
  return out.str();
}

std::string fee_share_csv(const FeeShare& share) {
  std::ostringstream out;
  out << "height,fees,subsidy,share_percent\n";
  for (const auto& r : share.blocks) {
    out << r.height << ',' << r.fees << ',' << r.subsidy << ',' << format_fixed(r.share_percent, 4) << '\n';
  }
  out << "aggregate,,," << format_fixed(share.aggregate_percent, 4) << '\n';
  return out.str();
}

}  // namespace chainaudit::report
