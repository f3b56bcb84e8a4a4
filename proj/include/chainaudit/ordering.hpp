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
#include <map>
#include <span>
#include <vector>

#include "chainaudit/ingest.hpp"
#include "chainaudit/model.hpp"

namespace chainaudit {

// Observed and norm-predicted ranks of a block's non-CPFP transactions.
struct BlockPositions {
  Height height = 0;
  std::vector<TxIndex> txs;                  // observed order
  std::vector<std::int32_t> observed_rank;   // 1..n, equal to slot + 1
  std::vector<std::int32_t> predicted_rank;  // 1..n

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(txs.size()); }
  PercentilePosition observed(std::size_t k) const { return {observed_rank[k], n()}; }
  PercentilePosition predicted(std::size_t k) const { return {predicted_rank[k], n()}; }
  // predicted - observed percentile; positive means placed earlier than its fee-rate merits.
  double signed_error(std::size_t k) const;
};

// Predicted rank: position in descending fee-rate order, ties kept in observed order.
BlockPositions block_positions(std::size_t block_pos, const ChainData& chain);
std::map<Txid, PercentilePosition> predict_positions(std::size_t block_pos, const ChainData& chain);

// Mean absolute percentile error; 0 when n <= 1.
double ppe(const BlockPositions& positions);
double ppe(std::size_t block_pos, const ChainData& chain);

struct PositionStats {
  Height height = 0;
  std::int64_t n = 0;
  double ppe = 0.0;
  std::map<Txid, double> per_tx_sppe;
};

PositionStats position_stats(std::size_t block_pos, const ChainData& chain, bool per_tx = true);
std::vector<PositionStats> position_stats_all(const ChainData& chain, unsigned jobs = 1, bool per_tx = false);

// Mean signed percentile error over the c-txs found (non-CPFP) in the given
// blocks. Throws kNoCTxFound when none is present.
double sppe(std::span<const std::size_t> block_positions_of_m, std::span<const TxIndex> c_txs,
            const ChainData& chain);

struct ViolationStats {
  UnixTime snapshot_time = 0;
  std::int64_t epsilon_seconds = 0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t violations = 0;
  double fraction = 0.0;  // violations / pairs_checked, 0 when nothing was checked
};

// Pairs (i, j) with t_i + eps < t_j and rate_i > rate_j are checked; those
// also confirmed later (b_i > b_j) are violations. Unobserved and
// unconfirmed txs are skipped; with exclude_cpfp, so are txs that are CPFP in
// their confirming block.
ViolationStats violation_pairs(const Snapshot& snapshot, const ChainData& chain, std::int64_t epsilon_seconds,
                               bool exclude_cpfp = false);

// k derived snapshots at the observation times of uniformly drawn blocks
// (without replacement, sorted by time).
std::vector<Snapshot> sample_snapshots(const ChainData& chain, std::size_t k, std::uint64_t seed);

}  // namespace chainaudit
