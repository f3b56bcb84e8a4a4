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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace chainaudit {

using Txid = std::string;
using TxIndex = std::uint32_t;
using Height = std::int64_t;
using UnixTime = std::int64_t;

inline constexpr std::string_view kUnknownPool = "unknown";

// Satoshi per virtual byte, kept as the exact ratio fee/vsize. Ordering and
// equality cross-multiply in 128-bit integers so ties are never inverted by
// floating-point rounding.
__extension__ typedef __int128 Int128;

class FeeRate {
 public:
  constexpr FeeRate() = default;
  FeeRate(std::int64_t fee_sat, std::int64_t vsize);

  static FeeRate sat_per_vbyte(std::int64_t rate) { return FeeRate(rate, 1); }

  std::int64_t fee() const noexcept { return fee_; }
  std::int64_t vsize() const noexcept { return vsize_; }
  double value() const noexcept { return static_cast<double>(fee_) / static_cast<double>(vsize_); }

  friend std::strong_ordering operator<=>(const FeeRate& a, const FeeRate& b) noexcept {
    const auto lhs = static_cast<Int128>(a.fee_) * b.vsize_;
    const auto rhs = static_cast<Int128>(b.fee_) * a.vsize_;
    return lhs <=> rhs;
  }
  friend bool operator==(const FeeRate& a, const FeeRate& b) noexcept { return (a <=> b) == 0; }

 private:
  std::int64_t fee_ = 0;
  std::int64_t vsize_ = 1;
};

struct Transaction {
  Txid txid;
  std::int64_t vsize = 1;
  std::int64_t fee = 0;
  std::optional<UnixTime> received;  // nullopt: never seen by the local node
  std::vector<Txid> parents;
  std::vector<std::string> input_addrs;
  std::vector<std::string> output_addrs;

  FeeRate fee_rate() const { return FeeRate(fee, vsize); }
  bool operator==(const Transaction&) const = default;
};

struct Block {
  Height height = 0;
  std::string hash;
  UnixTime observed_at = 0;  // local receipt time, not the header time
  std::string coinbase_tag;
  std::vector<std::string> reward_addrs;
  std::vector<Txid> txids;  // block order, coinbase excluded

  bool operator==(const Block&) const = default;
};

struct PoolDirectory {
  std::map<std::string, std::vector<std::string>> markers;
  std::map<std::string, std::set<std::string>> wallets;

  // Throws kConfigError when a marker is shared by two pools, a marker is
  // empty, or the reserved "unknown" name is configured.
  void validate() const;
  bool knows(std::string_view pool) const;
  bool operator==(const PoolDirectory&) const = default;
};

// Inclusive height range.
struct HeightRange {
  Height first = 0;
  Height last = 0;
  bool contains(Height h) const noexcept { return h >= first && h <= last; }
};

struct PercentilePosition {
  std::int64_t rank = 1;  // 1-based
  std::int64_t n = 1;

  double percentile() const noexcept {
    return n > 1 ? static_cast<double>(rank - 1) * 100.0 / static_cast<double>(n - 1) : 0.0;
  }
  bool operator==(const PercentilePosition&) const = default;
};

// Indexed, validated chain store. Transactions keep their input order; every
// block txid resolves to an index. Immutable once built apart from the pool
// attribution, which is set once by ingest.
class ChainData {
 public:
  ChainData() = default;

  // Validates heights, txid uniqueness, self-parenting and block membership.
  // Unresolvable block txids are reported together in one kDanglingTxid error.
  static ChainData build(std::vector<Block> blocks, std::vector<Transaction> txs);

  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const std::vector<Transaction>& txs() const noexcept { return txs_; }
  const Transaction& tx(TxIndex i) const { return txs_[i]; }
  std::size_t block_count() const noexcept { return blocks_.size(); }

  std::optional<TxIndex> find(std::string_view txid) const;
  std::optional<std::size_t> block_pos(Height h) const;

  // Resolved txs of the block at position `pos`, in block order.
  std::span<const TxIndex> block_txs(std::size_t pos) const { return block_txs_[pos]; }
  // Block position confirming the tx, or -1.
  std::int64_t confirm_pos(TxIndex i) const { return confirm_pos_[i]; }
  // Parents that exist in this chain (parents outside the data set are dropped).
  std::span<const TxIndex> parents_of(TxIndex i) const { return parents_[i]; }
  // Transactions with `received`, sorted by (received, index).
  std::span<const TxIndex> by_received() const noexcept { return by_received_; }

  const PoolDirectory& directory() const noexcept { return directory_; }
  const std::map<Height, std::string>& pool_of() const noexcept { return pool_of_; }
  const std::string& pool_at(std::size_t pos) const;
  void set_attribution(PoolDirectory directory, std::map<Height, std::string> pool_of);

  std::vector<TxIndex> resolve(std::span<const Txid> txids) const;

  bool operator==(const ChainData& other) const {
    return blocks_ == other.blocks_ && txs_ == other.txs_ && pool_of_ == other.pool_of_ &&
           directory_ == other.directory_;
  }

 private:
  std::vector<Block> blocks_;
  std::vector<Transaction> txs_;
  std::unordered_map<std::string, TxIndex> index_;
  std::vector<std::vector<TxIndex>> block_txs_;
  std::vector<std::int64_t> confirm_pos_;
  std::vector<std::vector<TxIndex>> parents_;
  std::vector<TxIndex> by_received_;
  PoolDirectory directory_;
  std::map<Height, std::string> pool_of_;
};

}  // namespace chainaudit
