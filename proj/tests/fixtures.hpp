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

// Small hand-built chains shared by the unit tests.

#pragma once

#include <cstdio>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainaudit/ingest.hpp"
#include "chainaudit/model.hpp"

namespace fixture {

using namespace chainaudit;

// Deterministic 64-hex txid for a small integer, so tests can refer to txs by number.
inline std::string tid(long n) {
  char buf[65];
  std::snprintf(buf, sizeof buf, "%064lx", n);
  return buf;
}

inline Transaction tx(long id, std::int64_t vsize, std::int64_t fee, std::optional<UnixTime> received,
                      std::initializer_list<long> parents = {}, std::vector<std::string> inputs = {},
                      std::vector<std::string> outputs = {}) {
  Transaction t;
  t.txid = tid(id);
  t.vsize = vsize;
  t.fee = fee;
  t.received = received;
  for (long p : parents) t.parents.push_back(tid(p));
  t.input_addrs = std::move(inputs);
  t.output_addrs = std::move(outputs);
  return t;
}

inline Block block(Height height, UnixTime observed_at, std::initializer_list<long> ids, std::string tag = "",
                   std::vector<std::string> rewards = {}) {
  Block b;
  b.height = height;
  b.hash = tid(1'000'000 + height);
  b.observed_at = observed_at;
  b.coinbase_tag = std::move(tag);
  b.reward_addrs = std::move(rewards);
  for (long id : ids) b.txids.push_back(tid(id));
  return b;
}

inline Block block_of(Height height, UnixTime observed_at, const std::vector<long>& ids, std::string tag = "") {
  Block b = block(height, observed_at, {}, std::move(tag));
  for (long id : ids) b.txids.push_back(tid(id));
  return b;
}

// Builds the chain and, when markers are given, attributes pools.
inline ChainData chain(std::vector<Block> blocks, std::vector<Transaction> txs,
                       std::map<std::string, std::vector<std::string>> markers = {}) {
  auto c = ChainData::build(std::move(blocks), std::move(txs));
  if (!markers.empty()) {
    PoolDirectory dir;
    dir.markers = std::move(markers);
    auto pool_of = attribute_pools(c, dir);
    c.set_attribution(std::move(dir), std::move(pool_of));
  }
  return c;
}

inline TxIndex at(const ChainData& c, long id) { return *c.find(tid(id)); }

}  // namespace fixture
