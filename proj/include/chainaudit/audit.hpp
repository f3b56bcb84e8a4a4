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

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chainaudit/cdf.hpp"
#include "chainaudit/ingest.hpp"
#include "chainaudit/model.hpp"
#include "chainaudit/stats.hpp"

namespace chainaudit {

enum class SelfInterestMode { kBoth, kSpends, kReceipts };

// Transactions whose inputs (spends) or outputs (receipts) touch one of the
// pool's reward wallets. Throws kUnknownPool.
std::vector<TxIndex> self_interest_txs(const ChainData& chain, const PoolDirectory& dir, std::string_view pool,
                                       SelfInterestMode mode = SelfInterestMode::kBoth);

// One test per pool, sorted by descending theta0 then name.
std::vector<DiffTestResult> audit_tx_set(const ChainData& chain, std::span<const TxIndex> c_txs,
                                         std::span<const std::string> pools, HeightRange window, double alpha = 0.01,
                                         unsigned jobs = 1);

// Pools that mined at least one block in the window, "unknown" excluded.
std::vector<std::string> active_pools(const ChainData& chain, HeightRange window);

inline constexpr std::array<double, 5> kDefaultSppeThresholds{100, 99, 90, 50, 1};

struct DarkFeeBucket {
  double threshold = 0.0;
  std::vector<Txid> txids;  // block order, blocks ascending
};

// Per-transaction signed position error in every block of `pool`; a tx lands
// in each bucket whose threshold it reaches.
std::vector<DarkFeeBucket> darkfee_flags(const ChainData& chain, std::string_view pool,
                                         std::span<const double> thresholds = kDefaultSppeThresholds);

struct LowFeeScan {
  std::map<std::string, std::int64_t> by_pool;
  std::int64_t low_fee_confirmed = 0;
  std::int64_t confirmed = 0;
  double fraction = 0.0;
};

LowFeeScan low_fee_scan(const ChainData& chain, FeeRate threshold = FeeRate::sat_per_vbyte(1));

struct CongestionReport {
  static constexpr std::array<double, 3> kBinEdgesMvB{1, 2, 4};
  static constexpr std::array<std::int64_t, 2> kClassEdgesSatPerVb{10, 100};

  std::int64_t interval_seconds = 15;
  std::int64_t capacity_vbytes = 1'000'000;
  std::vector<std::pair<UnixTime, std::int64_t>> series;  // (time, mempool vbytes)
  double congested_fraction = 0.0;                         // samples above capacity
  std::array<std::int64_t, 4> samples_per_bin{};
  // Fee-rate (sat/vB) of txs by the congestion bin at their arrival:
  // [0,1], (1,2], (2,4], >4 MvB.
  std::array<Cdf, 4> fee_rate_cdf;
  // Confirmation delay per fee-rate class: <10, [10,100), >=100 sat/vB.
  std::array<Cdf, 3> delay_seconds_cdf;
  std::array<Cdf, 3> delay_blocks_cdf;
};

// Bin of a mempool size in vbytes, using capacity-scaled edges.
std::size_t congestion_bin(std::int64_t vbytes, std::int64_t capacity_vbytes = 1'000'000);

CongestionReport congestion_report(const ChainData& chain, const SnapshotSeries& snapshots,
                                   std::int64_t interval_seconds = 15, std::int64_t capacity_vbytes = 1'000'000);

struct FeeShareRow {
  Height height = 0;
  std::int64_t fees = 0;
  std::int64_t subsidy = 0;
  double share_percent = 0.0;
};

struct FeeShare {
  std::vector<FeeShareRow> blocks;
  double aggregate_percent = 0.0;
};

std::int64_t block_subsidy(Height height);
FeeShare fee_revenue_share(const ChainData& chain, HeightRange window);

}  // namespace chainaudit
