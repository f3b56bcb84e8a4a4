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

#include "chainaudit/model.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "chainaudit/error.hpp"

namespace chainaudit {

FeeRate::FeeRate(std::int64_t fee_sat, std::int64_t vsize) : fee_(fee_sat), vsize_(vsize) {
  if (vsize < 1 || fee_sat < 0) {
    throw Error(ErrorKind::kDomainError, "fee-rate needs fee >= 0 and vsize >= 1");
  }
}

void PoolDirectory::validate() const {
  std::map<std::string, std::string> owner;
  for (const auto& [pool, subs] : markers) {
    if (pool == kUnknownPool) throw Error(ErrorKind::kConfigError, "pool name 'unknown' is reserved");
    for (const auto& m : subs) {
      if (m.empty()) throw Error(ErrorKind::kConfigError, "empty marker for pool " + pool);
      auto [it, inserted] = owner.emplace(m, pool);
      if (!inserted && it->second != pool) {
        throw Error(ErrorKind::kConfigError, "marker '" + m + "' maps to " + it->second + " and " + pool);
      }
    }
  }
}

bool PoolDirectory::knows(std::string_view pool) const {
  const std::string key(pool);
  return markers.contains(key) || wallets.contains(key);
}

ChainData ChainData::build(std::vector<Block> blocks, std::vector<Transaction> txs) {
  ChainData c;
  c.txs_ = std::move(txs);
  c.blocks_ = std::move(blocks);

  c.index_.reserve(c.txs_.size());
  for (std::size_t i = 0; i < c.txs_.size(); ++i) {
    const auto& tx = c.txs_[i];
    if (tx.vsize < 1 || tx.fee < 0) {
      throw Error(ErrorKind::kMalformedRecord, "tx " + tx.txid + " needs vsize >= 1 and fee >= 0");
    }
    if (!c.index_.emplace(tx.txid, static_cast<TxIndex>(i)).second) {
      throw Error(ErrorKind::kDuplicateTxid, "duplicate txid " + tx.txid, {tx.txid});
    }
  }

  c.parents_.resize(c.txs_.size());
  for (std::size_t i = 0; i < c.txs_.size(); ++i) {
    const auto& tx = c.txs_[i];
    for (const auto& p : tx.parents) {
      if (p == tx.txid) throw Error(ErrorKind::kMalformedRecord, "tx " + tx.txid + " lists itself as parent");
      if (auto it = c.index_.find(p); it != c.index_.end()) c.parents_[i].push_back(it->second);
    }
    std::sort(c.parents_[i].begin(), c.parents_[i].end());
    c.parents_[i].erase(std::unique(c.parents_[i].begin(), c.parents_[i].end()), c.parents_[i].end());
  }

  c.confirm_pos_.assign(c.txs_.size(), -1);
  c.block_txs_.resize(c.blocks_.size());
  std::vector<std::string> dangling;
  for (std::size_t b = 0; b < c.blocks_.size(); ++b) {
    const auto& block = c.blocks_[b];
    if (b > 0 && block.height <= c.blocks_[b - 1].height) {
      throw Error(ErrorKind::kMalformedRecord,
                  "block heights must strictly increase (" + std::to_string(block.height) + ")");
    }
    auto& resolved = c.block_txs_[b];
    resolved.reserve(block.txids.size());
    for (const auto& id : block.txids) {
      auto it = c.index_.find(id);
      if (it == c.index_.end()) {
        dangling.push_back(id);
        continue;
      }
      if (c.confirm_pos_[it->second] >= 0) {
        throw Error(ErrorKind::kDuplicateTxid, "txid " + id + " confirmed twice", {id});
      }
      c.confirm_pos_[it->second] = static_cast<std::int64_t>(b);
      resolved.push_back(it->second);
    }
  }
  if (!dangling.empty()) {
    std::string msg = "blocks reference unknown txids:";
    for (const auto& d : dangling) msg += " " + d;
    throw Error(ErrorKind::kDanglingTxid, msg, std::move(dangling));
  }

  for (std::size_t i = 0; i < c.txs_.size(); ++i) {
    if (c.txs_[i].received) c.by_received_.push_back(static_cast<TxIndex>(i));
  }
  std::stable_sort(c.by_received_.begin(), c.by_received_.end(),
                   [&](TxIndex a, TxIndex b) { return *c.txs_[a].received < *c.txs_[b].received; });
  return c;
}

std::optional<TxIndex> ChainData::find(std::string_view txid) const {
  auto it = index_.find(std::string(txid));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ChainData::block_pos(Height h) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), h,
                             [](const Block& b, Height v) { return b.height < v; });
  if (it == blocks_.end() || it->height != h) return std::nullopt;
  return static_cast<std::size_t>(it - blocks_.begin());
}

const std::string& ChainData::pool_at(std::size_t pos) const {
  static const std::string unknown(kUnknownPool);
  auto it = pool_of_.find(blocks_[pos].height);
  return it == pool_of_.end() ? unknown : it->second;
}

void ChainData::set_attribution(PoolDirectory directory, std::map<Height, std::string> pool_of) {
  directory_ = std::move(directory);
  pool_of_ = std::move(pool_of);
}

std::vector<TxIndex> ChainData::resolve(std::span<const Txid> txids) const {
  std::vector<TxIndex> out;
  out.reserve(txids.size());
  for (const auto& id : txids) {
    if (auto i = find(id)) out.push_back(*i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace chainaudit
