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

#include "chainaudit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "chainaudit/error.hpp"

namespace chainaudit {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorKind::kMalformedRecord, "line " + std::to_string(line_no) + ": " + why,
              {std::to_string(line_no)});
}

json parse_line(std::string_view line, std::size_t line_no) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) malformed(line_no, "not a JSON object");
  return j;
}

void require_exact_keys(const json& j, std::initializer_list<std::string_view> keys, std::size_t line_no) {
  for (auto k : keys) {
    if (!j.contains(std::string(k))) malformed(line_no, "missing field '" + std::string(k) + "'");
  }
  if (j.size() != keys.size()) {
    for (const auto& [k, _] : j.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) malformed(line_no, "unexpected field '" + k + "'");
    }
  }
}

std::int64_t get_int(const json& j, const char* key, std::size_t line_no) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) malformed(line_no, std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::string get_string(const json& j, const char* key, std::size_t line_no) {
  const auto& v = j.at(key);
  if (!v.is_string()) malformed(line_no, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> get_strings(const json& j, const char* key, std::size_t line_no) {
  const auto& v = j.at(key);
  if (!v.is_array()) malformed(line_no, std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& e : v) {
    if (!e.is_string()) malformed(line_no, std::string("field '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

bool is_txid(std::string_view s) {
  return s.size() == 64 &&
         std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

template <typename Decode>
auto read_lines(std::istream& in, Decode decode) {
  std::vector<decltype(decode(std::string_view{}, std::size_t{}))> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(decode(line, line_no));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + p.string());
  return in;
}

}  // namespace

std::string encode_transaction(const Transaction& tx) {
  ordered_json j;
  j["txid"] = tx.txid;
  j["vsize"] = tx.vsize;
  j["fee"] = tx.fee;
  j["received"] = tx.received ? ordered_json(*tx.received) : ordered_json(nullptr);
  j["parents"] = tx.parents;
  j["input_addrs"] = tx.input_addrs;
  j["output_addrs"] = tx.output_addrs;
  return j.dump();
}

std::string encode_block(const Block& block) {
  ordered_json j;
  j["height"] = block.height;
  j["hash"] = block.hash;
  j["observed_at"] = block.observed_at;
  j["coinbase_tag"] = block.coinbase_tag;
  j["reward_addrs"] = block.reward_addrs;
  j["txids"] = block.txids;
  return j.dump();
}

Transaction decode_transaction(std::string_view line, std::size_t line_no) {
  const json j = parse_line(line, line_no);
  require_exact_keys(j, {"txid", "vsize", "fee", "received", "parents", "input_addrs", "output_addrs"}, line_no);
  Transaction tx;
  tx.txid = get_string(j, "txid", line_no);
  if (!is_txid(tx.txid)) malformed(line_no, "txid must be 64 lowercase hex characters");
  tx.vsize = get_int(j, "vsize", line_no);
  if (tx.vsize < 1) malformed(line_no, "vsize must be >= 1");
  tx.fee = get_int(j, "fee", line_no);
  if (tx.fee < 0) malformed(line_no, "fee must be >= 0");
  if (!j.at("received").is_null()) tx.received = get_int(j, "received", line_no);
  tx.parents = get_strings(j, "parents", line_no);
  for (const auto& p : tx.parents) {
    if (!is_txid(p)) malformed(line_no, "parent '" + p + "' is not a txid");
    if (p == tx.txid) malformed(line_no, "transaction lists itself as a parent");
  }
  tx.input_addrs = get_strings(j, "input_addrs", line_no);
  tx.output_addrs = get_strings(j, "output_addrs", line_no);
  return tx;
}

Block decode_block(std::string_view line, std::size_t line_no) {
  const json j = parse_line(line, line_no);
  require_exact_keys(j, {"height", "hash", "observed_at", "coinbase_tag", "reward_addrs", "txids"}, line_no);
  Block b;
  b.height = get_int(j, "height", line_no);
  if (b.height < 0) malformed(line_no, "height must be >= 0");
  b.hash = get_string(j, "hash", line_no);
  b.observed_at = get_int(j, "observed_at", line_no);
  b.coinbase_tag = get_string(j, "coinbase_tag", line_no);
  b.reward_addrs = get_strings(j, "reward_addrs", line_no);
  b.txids = get_strings(j, "txids", line_no);
  std::set<std::string_view> seen;
  for (const auto& id : b.txids) {
    if (!seen.insert(id).second) malformed(line_no, "block lists txid " + id + " twice");
  }
  return b;
}

PoolDirectory decode_pool_config(std::string_view document) {
  const json j = json::parse(document, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("pools") || !j["pools"].is_object()) {
    throw Error(ErrorKind::kMalformedRecord, "pool config must be {\"pools\": {...}}");
  }
  PoolDirectory dir;
  for (const auto& [name, spec] : j["pools"].items()) {
    if (!spec.is_object() || !spec.contains("markers") || !spec["markers"].is_array()) {
      throw Error(ErrorKind::kMalformedRecord, "pool " + name + " needs a markers array");
    }
    auto& markers = dir.markers[name];
    for (const auto& m : spec["markers"]) {
      if (!m.is_string()) throw Error(ErrorKind::kMalformedRecord, "pool " + name + " has a non-string marker");
      markers.push_back(m.get<std::string>());
    }
  }
  dir.validate();
  return dir;
}

std::string encode_pool_config(const PoolDirectory& dir) {
  ordered_json pools = ordered_json::object();
  for (const auto& [name, markers] : dir.markers) pools[name] = {{"markers", markers}};
  return ordered_json{{"pools", pools}}.dump(2) + "\n";
}

std::vector<Transaction> read_transactions(std::istream& in) { return read_lines(in, decode_transaction); }
std::vector<Block> read_blocks(std::istream& in) { return read_lines(in, decode_block); }

ChainData parse_chain(std::istream& txs, std::istream& blocks, std::istream& pool_config) {
  std::string config((std::istreambuf_iterator<char>(pool_config)), std::istreambuf_iterator<char>());
  PoolDirectory dir = decode_pool_config(config);
  ChainData chain = ChainData::build(read_blocks(blocks), read_transactions(txs));
  auto pool_of = attribute_pools(chain, dir);
  chain.set_attribution(std::move(dir), std::move(pool_of));
  return chain;
}

ChainData parse_chain(const std::filesystem::path& tx_path, const std::filesystem::path& block_path,
                      const std::filesystem::path& pool_config) {
  auto txs = open_input(tx_path);
  auto blocks = open_input(block_path);
  auto pools = open_input(pool_config);
  return parse_chain(txs, blocks, pools);
}

void write_chain(const ChainData& chain, std::ostream& txs, std::ostream& blocks) {
  for (const auto& tx : chain.txs()) txs << encode_transaction(tx) << '\n';
  for (const auto& b : chain.blocks()) blocks << encode_block(b) << '\n';
}

std::map<Height, std::string> attribute_pools(const ChainData& chain, PoolDirectory& dir) {
  std::map<Height, std::string> out;
  for (const auto& block : chain.blocks()) {
    const std::string* match = nullptr;
    for (const auto& [pool, subs] : dir.markers) {
      const bool hit = std::any_of(subs.begin(), subs.end(), [&](const std::string& m) {
        return block.coinbase_tag.find(m) != std::string::npos;
      });
      if (!hit) continue;
      if (match != nullptr) {
        throw Error(ErrorKind::kAmbiguousMarker,
                    "block " + std::to_string(block.height) + " tag matches " + *match + " and " + pool,
                    {std::to_string(block.height)});
      }
      match = &pool;
    }
    if (match == nullptr) {
      out.emplace(block.height, std::string(kUnknownPool));
      continue;
    }
    out.emplace(block.height, *match);
    auto& wallet = dir.wallets[*match];
    wallet.insert(block.reward_addrs.begin(), block.reward_addrs.end());
  }
  return out;
}

HeightRange full_window(const ChainData& chain) {
  if (chain.blocks().empty()) return {0, -1};
  return {chain.blocks().front().height, chain.blocks().back().height};
}

BlockShare block_counts(const ChainData& chain, HeightRange window) {
  BlockShare share;
  for (std::size_t b = 0; b < chain.block_count(); ++b) {
    if (!window.contains(chain.blocks()[b].height)) continue;
    ++share.blocks_by_pool[chain.pool_at(b)];
    ++share.total;
  }
  return share;
}

double hash_rate(const ChainData& chain, std::string_view pool, HeightRange window) {
  const BlockShare share = block_counts(chain, window);
  if (share.total == 0) {
    throw Error(ErrorKind::kEmptyWindow,
                "no blocks in [" + std::to_string(window.first) + ", " + std::to_string(window.last) + "]");
  }
  auto it = share.blocks_by_pool.find(std::string(pool));
  const std::int64_t mined = it == share.blocks_by_pool.end() ? 0 : it->second;
  return static_cast<double>(mined) / static_cast<double>(share.total);
}

SnapshotSeries SnapshotSeries::explicit_series(std::vector<Snapshot> snapshots) {
  for (std::size_t i = 1; i < snapshots.size(); ++i) {
    if (snapshots[i].time <= snapshots[i - 1].time) {
      throw Error(ErrorKind::kMalformedRecord, "snapshot times must strictly increase");
    }
  }
  SnapshotSeries s;
  s.mode_ = Mode::kExplicit;
  s.snapshots_ = std::move(snapshots);
  return s;
}

std::vector<TxIndex> mempool_at(const ChainData& chain, UnixTime t) {
  const auto order = chain.by_received();
  auto end = std::upper_bound(order.begin(), order.end(), t,
                              [&](UnixTime v, TxIndex i) { return v < *chain.tx(i).received; });
  std::vector<TxIndex> out;
  for (auto it = order.begin(); it != end; ++it) {
    const auto pos = chain.confirm_pos(*it);
    if (pos < 0 || chain.blocks()[static_cast<std::size_t>(pos)].observed_at > t) out.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SnapshotSeries read_snapshots(std::istream& in, const ChainData& chain) {
  auto snapshots = read_lines(in, [&](std::string_view line, std::size_t line_no) {
    const json j = parse_line(line, line_no);
    require_exact_keys(j, {"time", "txids"}, line_no);
    Snapshot s;
    s.time = get_int(j, "time", line_no);
    const auto ids = get_strings(j, "txids", line_no);
    s.txs = chain.resolve(ids);
    return s;
  });
  return SnapshotSeries::explicit_series(std::move(snapshots));
}

}  // namespace chainaudit
