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

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainaudit/model.hpp"

namespace chainaudit {

// --- record codecs (JSON Lines, one object per line) ------------------------

std::string encode_transaction(const Transaction& tx);
std::string encode_block(const Block& block);
// `line_no` is only used for error messages.
Transaction decode_transaction(std::string_view line, std::size_t line_no);
Block decode_block(std::string_view line, std::size_t line_no);

PoolDirectory decode_pool_config(std::string_view document);
std::string encode_pool_config(const PoolDirectory& dir);

// --- parsing ----------------------------------------------------------------

std::vector<Transaction> read_transactions(std::istream& in);
std::vector<Block> read_blocks(std::istream& in);

ChainData parse_chain(std::istream& txs, std::istream& blocks, std::istream& pool_config);
ChainData parse_chain(const std::filesystem::path& tx_path, const std::filesystem::path& block_path,
                      const std::filesystem::path& pool_config);

void write_chain(const ChainData& chain, std::ostream& txs, std::ostream& blocks);

// --- pools ------------------------------------------------------------------

// Assigns each block the unique pool whose marker occurs in its coinbase tag,
// "unknown" otherwise, and adds the block's reward addresses to that pool's
// wallet set. Unknown blocks contribute no wallets.
std::map<Height, std::string> attribute_pools(const ChainData& chain, PoolDirectory& dir);

// Whole-chain window.
HeightRange full_window(const ChainData& chain);

struct BlockShare {
  std::map<std::string, std::int64_t> blocks_by_pool;
  std::int64_t total = 0;
};
BlockShare block_counts(const ChainData& chain, HeightRange window);

// Fraction of blocks in `window` attributed to `pool`. Throws kEmptyWindow.
double hash_rate(const ChainData& chain, std::string_view pool, HeightRange window);

// --- mempool snapshots ------------------------------------------------------

struct Snapshot {
  UnixTime time = 0;
  std::vector<TxIndex> txs;
};

class SnapshotSeries {
 public:
  enum class Mode { kDerived, kExplicit };

  SnapshotSeries() = default;
  static SnapshotSeries derived() { return {}; }
  // Times must strictly increase; txids unknown to `chain` are dropped.
  static SnapshotSeries explicit_series(std::vector<Snapshot> snapshots);

  Mode mode() const noexcept { return mode_; }
  const std::vector<Snapshot>& snapshots() const noexcept { return snapshots_; }

 private:
  Mode mode_ = Mode::kDerived;
  std::vector<Snapshot> snapshots_;
};

// Mempool content at t: received <= t and not in a block observed at or before t.
std::vector<TxIndex> mempool_at(const ChainData& chain, UnixTime t);

SnapshotSeries read_snapshots(std::istream& in, const ChainData& chain);

}  // namespace chainaudit
