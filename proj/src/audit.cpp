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

#include "chainaudit/audit.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "chainaudit/error.hpp"
#include "chainaudit/ordering.hpp"
#include "chainaudit/parallel.hpp"

namespace chainaudit {

std::vector<TxIndex> self_interest_txs(const ChainData& chain, const PoolDirectory& dir, std::string_view pool,
                                       SelfInterestMode mode) {
  if (!dir.knows(pool)) throw Error(ErrorKind::kUnknownPool, "pool " + std::string(pool) + " is not configured");
  const auto it = dir.wallets.find(std::string(pool));
  if (it == dir.wallets.end() || it->second.empty()) return {};
  const auto& wallet = it->second;
  auto touches = [&](const std::vector<std::string>& addrs) {
    return std::any_of(addrs.begin(), addrs.end(), [&](const std::string& a) { return wallet.contains(a); });
  };

  std::vector<TxIndex> out;
  for (std::size_t i = 0; i < chain.txs().size(); ++i) {
    const auto& tx = chain.txs()[i];
    const bool spends = mode != SelfInterestMode::kReceipts && touches(tx.input_addrs);
    const bool receives = mode != SelfInterestMode::kSpends && touches(tx.output_addrs);
    if (spends || receives) out.push_back(static_cast<TxIndex>(i));
  }
  return out;
}

std::vector<DiffTestResult> audit_tx_set(const ChainData& chain, std::span<const TxIndex> c_txs,
                                         std::span<const std::string> pools, HeightRange window, double alpha,
                                         unsigned jobs) {
  std::vector<TxIndex> sorted(c_txs.begin(), c_txs.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<DiffTestResult> results(pools.size());
  parallel_for(pools.size(), jobs,
               [&](std::size_t i) { results[i] = run_diff_test(chain, pools[i], sorted, window, alpha); });
  std::sort(results.begin(), results.end(), [](const DiffTestResult& a, const DiffTestResult& b) {
    return a.theta0 != b.theta0 ? a.theta0 > b.theta0 : a.pool < b.pool;
  });
  return results;
}

std::vector<std::string> active_pools(const ChainData& chain, HeightRange window) {
  std::vector<std::string> out;
  for (const auto& [pool, n] : block_counts(chain, window).blocks_by_pool) {
    if (pool != kUnknownPool && n > 0) out.push_back(pool);
  }
  return out;
}

std::vector<DarkFeeBucket> darkfee_flags(const ChainData& chain, std::string_view pool,
                                         std::span<const double> thresholds) {
  std::vector<DarkFeeBucket> buckets;
  for (double t : thresholds) buckets.push_back({t, {}});
  for (std::size_t b = 0; b < chain.block_count(); ++b) {
    if (chain.pool_at(b) != pool) continue;
    const auto p = block_positions(b, chain);
    if (p.n() < 2) continue;  // a lone tx has no position error
    const double span = static_cast<double>(p.n() - 1);
    for (std::size_t k = 0; k < p.txs.size(); ++k) {
      // signed_error >= t, compared without dividing by n - 1
      const double scaled = static_cast<double>(p.predicted_rank[k] - p.observed_rank[k]) * 100.0;
      for (auto& bucket : buckets) {
        if (scaled >= bucket.threshold * span) bucket.txids.push_back(chain.tx(p.txs[k]).txid);
      }
    }
  }
  return buckets;
}

LowFeeScan low_fee_scan(const ChainData& chain, FeeRate threshold) {
  LowFeeScan scan;
  for (const auto& [_, pool] : chain.pool_of()) scan.by_pool.try_emplace(pool, 0);
  for (std::size_t b = 0; b < chain.block_count(); ++b) {
    for (TxIndex t : chain.block_txs(b)) {
      ++scan.confirmed;
      if (chain.tx(t).fee_rate() < threshold) {
        ++scan.by_pool[chain.pool_at(b)];
        ++scan.low_fee_confirmed;
      }
    }
  }
  if (scan.confirmed > 0) {
    scan.fraction = static_cast<double>(scan.low_fee_confirmed) / static_cast<double>(scan.confirmed);
  }
  return scan;
}

std::size_t congestion_bin(std::int64_t vbytes, std::int64_t capacity_vbytes) {
  for (std::size_t i = 0; i < CongestionReport::kBinEdgesMvB.size(); ++i) {
    if (static_cast<double>(vbytes) <= CongestionReport::kBinEdgesMvB[i] * static_cast<double>(capacity_vbytes)) {
      return i;
    }
  }
  return CongestionReport::kBinEdgesMvB.size();
}

namespace {

std::size_t fee_class(FeeRate rate) {
  if (rate < FeeRate::sat_per_vbyte(CongestionReport::kClassEdgesSatPerVb[0])) return 0;
  if (rate < FeeRate::sat_per_vbyte(CongestionReport::kClassEdgesSatPerVb[1])) return 1;
  return 2;
}

std::vector<std::pair<UnixTime, std::int64_t>> derived_series(const ChainData& chain, std::int64_t interval) {
  std::vector<std::pair<UnixTime, std::int64_t>> events;  // (time, delta vbytes)
  UnixTime first = std::numeric_limits<UnixTime>::max();
  UnixTime last = std::numeric_limits<UnixTime>::min();
  for (TxIndex t : chain.by_received()) {
    const auto& tx = chain.tx(t);
    const UnixTime start = *tx.received;
    first = std::min(first, start);
    last = std::max(last, start);
    const auto pos = chain.confirm_pos(t);
    if (pos < 0) {
      events.emplace_back(start, tx.vsize);
      continue;
    }
    const UnixTime end = chain.blocks()[static_cast<std::size_t>(pos)].observed_at;
    if (start >= end) continue;
    events.emplace_back(start, tx.vsize);
    events.emplace_back(end, -tx.vsize);
  }
  for (const auto& b : chain.blocks()) {
    first = std::min(first, b.observed_at);
    last = std::max(last, b.observed_at);
  }
  std::vector<std::pair<UnixTime, std::int64_t>> series;
  if (first > last) return series;
  std::sort(events.begin(), events.end());

  std::size_t e = 0;
  std::int64_t level = 0;
  for (UnixTime t = first; t <= last; t += interval) {
    while (e < events.size() && events[e].first <= t) level += events[e++].second;
    series.emplace_back(t, level);
  }
  return series;
}

}  // namespace

CongestionReport congestion_report(const ChainData& chain, const SnapshotSeries& snapshots,
                                   std::int64_t interval_seconds, std::int64_t capacity_vbytes) {
  if (interval_seconds < 1 || capacity_vbytes < 1) {
    throw Error(ErrorKind::kDomainError, "interval and capacity must be positive");
  }
  CongestionReport r;
  r.interval_seconds = interval_seconds;
  r.capacity_vbytes = capacity_vbytes;

  if (snapshots.mode() == SnapshotSeries::Mode::kExplicit) {
    for (const auto& s : snapshots.snapshots()) {
      std::int64_t vbytes = 0;
      for (TxIndex t : s.txs) vbytes += chain.tx(t).vsize;
      r.series.emplace_back(s.time, vbytes);
    }
  } else {
    r.series = derived_series(chain, interval_seconds);
  }

  std::int64_t congested = 0;
  for (const auto& [_, vbytes] : r.series) {
    ++r.samples_per_bin[congestion_bin(vbytes, capacity_vbytes)];
    if (vbytes > capacity_vbytes) ++congested;
  }
  if (!r.series.empty()) r.congested_fraction = static_cast<double>(congested) / static_cast<double>(r.series.size());

  // Fee-rates by the congestion level sampled at or before each arrival.
  std::array<std::vector<double>, 4> rates;
  for (TxIndex t : chain.by_received()) {
    const auto& tx = chain.tx(t);
    auto it = std::upper_bound(r.series.begin(), r.series.end(), *tx.received,
                               [](UnixTime v, const auto& s) { return v < s.first; });
    if (it == r.series.begin()) continue;
    rates[congestion_bin(std::prev(it)->second, capacity_vbytes)].push_back(tx.fee_rate().value());
  }
  for (std::size_t i = 0; i < rates.size(); ++i) r.fee_rate_cdf[i] = empirical_cdf(std::move(rates[i]));

  // Running maximum keeps the "first block after arrival" search valid even
  // if observation times are not monotone.
  std::vector<UnixTime> seen_by(chain.block_count());
  UnixTime running = std::numeric_limits<UnixTime>::min();
  for (std::size_t b = 0; b < chain.block_count(); ++b) {
    running = std::max(running, chain.blocks()[b].observed_at);
    seen_by[b] = running;
  }
  std::array<std::vector<double>, 3> delay_s;
  std::array<std::vector<double>, 3> delay_b;
  for (TxIndex t : chain.by_received()) {
    const auto pos = chain.confirm_pos(t);
    if (pos < 0) continue;
    const auto& tx = chain.tx(t);
    const UnixTime confirmed_at = chain.blocks()[static_cast<std::size_t>(pos)].observed_at;
    const auto first_after =
        static_cast<std::int64_t>(std::upper_bound(seen_by.begin(), seen_by.end(), *tx.received) - seen_by.begin());
    if (confirmed_at < *tx.received || pos < first_after) continue;
    const std::size_t c = fee_class(tx.fee_rate());
    delay_s[c].push_back(static_cast<double>(confirmed_at - *tx.received));
    delay_b[c].push_back(static_cast<double>(pos - first_after));
  }
  for (std::size_t c = 0; c < 3; ++c) {
    r.delay_seconds_cdf[c] = empirical_cdf(std::move(delay_s[c]));
    r.delay_blocks_cdf[c] = empirical_cdf(std::move(delay_b[c]));
  }
  return r;
}

std::int64_t block_subsidy(Height height) {
  const Height halvings = height / 210'000;
  if (halvings >= 63) return 0;
  return std::int64_t{5'000'000'000} >> halvings;
}

FeeShare fee_revenue_share(const ChainData& chain, HeightRange window) {
  FeeShare share;
  std::int64_t fees_total = 0;
  std::int64_t revenue_total = 0;
  for (std::size_t b = 0; b < chain.block_count(); ++b) {
    const Height h = chain.blocks()[b].height;
    if (!window.contains(h)) continue;
    FeeShareRow row;
    row.height = h;
    for (TxIndex t : chain.block_txs(b)) row.fees += chain.tx(t).fee;
    row.subsidy = block_subsidy(h);
    const std::int64_t revenue = row.fees + row.subsidy;
    row.share_percent = revenue == 0 ? 0.0 : static_cast<double>(row.fees) * 100.0 / static_cast<double>(revenue);
    fees_total += row.fees;
    revenue_total += revenue;
    share.blocks.push_back(row);
  }
  if (revenue_total > 0) {
    share.aggregate_percent = static_cast<double>(fees_total) * 100.0 / static_cast<double>(revenue_total);
  }
  return share;
}

}  // namespace chainaudit
