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

#include "chainaudit/depgraph.hpp"
#include "chainaudit/error.hpp"
#include "chainaudit/ingest.hpp"
#include "chainaudit/sim.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace chainaudit;
using fixture::at;

// Brute-force edge set: every (child, parent) pair in scope, by txid string comparison.
std::map<TxIndex, std::vector<TxIndex>> brute_edges(const std::vector<TxIndex>& scope, const ChainData& c) {
  std::map<TxIndex, std::vector<TxIndex>> edges;
  for (TxIndex u : scope) {
    auto& ps = edges[u];
    for (TxIndex p : scope) {
      if (oracle::has_parent(c.tx(u).parents, c.tx(p).txid)) ps.push_back(p);
    }
    std::sort(ps.begin(), ps.end());
  }
  return edges;
}

std::vector<TxIndex> brute_cpfp(std::size_t pos, const ChainData& c) {
  const auto txs = c.block_txs(pos);
  std::vector<TxIndex> out;
  for (TxIndex u : txs) {
    for (TxIndex p : txs) {
      if (oracle::has_parent(c.tx(u).parents, c.tx(p).txid)) {
        out.push_back(u);
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(BuildGraph, SingleEdge) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0, {1})});
  const std::vector<TxIndex> scope{at(c, 1), at(c, 2)};
  const auto g = build_graph(scope, c);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edges.at(at(c, 2)), std::vector<TxIndex>{at(c, 1)});
  EXPECT_TRUE(g.edges.at(at(c, 1)).empty());
}

TEST(BuildGraph, OutOfScopeParentGivesNoEdge) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0, {26}), fixture::tx(26, 1, 1, 0)});
  const std::vector<TxIndex> scope{at(c, 1), at(c, 2)};
  EXPECT_EQ(build_graph(scope, c).edge_count(), 0u);
}

TEST(BuildGraph, CycleDetected) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0, {3}), fixture::tx(2, 1, 1, 0, {1}), fixture::tx(3, 1, 1, 0, {2}),
                               fixture::tx(4, 1, 1, 0, {1})});
  const std::vector<TxIndex> all{0, 1, 2, 3};
  try {
    build_graph(all, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCycleDetected);
    EXPECT_EQ(e.items().size(), 3u);
    EXPECT_NE(std::string(e.what()).find("among 3 txs"), std::string::npos) << e.what();
  }
  const std::vector<TxIndex> broken{0, 1, 3};  // without tx 3 the cycle is open
  EXPECT_NO_THROW(build_graph(broken, c));
}

TEST(BuildGraph, MatchesBruteForceOnSimulatedMempool) {
  sim::SimConfig cfg;
  cfg.seed = 3;
  cfg.pools = {{"A", 1.0}};
  cfg.blocks = 4;
  cfg.tx_rate = 2.0;
  cfg.block_capacity = 100'000;
  cfg.cpfp_rate = 0.3;
  const auto out = sim::generate(cfg);
  const auto& c = out.chain;
  const auto scope = mempool_at(c, c.blocks().back().observed_at - 1);
  ASSERT_GE(scope.size(), 1000u);
  const auto g = build_graph(scope, c);
  EXPECT_EQ(g.edges, brute_edges(scope, c));
  EXPECT_GT(g.edge_count(), 100u);
}

TEST(CpfpSet, DefinitionInstances) {
  auto c = fixture::chain({fixture::block(1, 0, {1, 2}), fixture::block(2, 0, {3, 4})},
                          {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0, {1}), fixture::tx(3, 1, 1, 0, {1}),
                           fixture::tx(4, 1, 1, 0)});
  EXPECT_EQ(cpfp_set(0, c), std::vector<TxIndex>{at(c, 2)});
  EXPECT_TRUE(cpfp_set(1, c).empty());  // parent confirmed in an earlier block
}

TEST(CpfpSet, SimulatedRateAndBruteForceMembership) {
  sim::SimConfig cfg;
  cfg.seed = 5;
  cfg.pools = {{"A", 0.6}, {"B", 0.4}};
  cfg.blocks = 500;
  cfg.tx_rate = 0.2;
  cfg.cpfp_rate = 0.2;
  const auto out = sim::generate(cfg);
  const auto& c = out.chain;
  std::size_t cpfp = 0, total = 0;
  for (std::size_t b = 0; b < c.block_count(); ++b) {
    const auto set = cpfp_set(b, c);
    ASSERT_EQ(set, brute_cpfp(b, c)) << "block " << b;
    for (TxIndex t : set) {
      ASSERT_EQ(c.confirm_pos(t), static_cast<std::int64_t>(b));  // subset of the block
    }
    cpfp += set.size();
    total += c.block_txs(b).size();
  }
  EXPECT_NEAR(static_cast<double>(cpfp) / static_cast<double>(total), 0.20, 0.03);
}

TEST(StripDependents, OnlyRootOfChainSurvives) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0, {1}), fixture::tx(3, 1, 1, 0, {2})});
  const std::vector<TxIndex> all{2, 0, 1};
  EXPECT_EQ(strip_dependents(all, c), std::vector<TxIndex>{at(c, 1)});
  const std::vector<TxIndex> tail{1, 2};  // tx 1 absent: tx 2 is a root here
  EXPECT_EQ(strip_dependents(tail, c), std::vector<TxIndex>{at(c, 2)});
}

TEST(StripDependents, IndependentTxsUnchanged) {
  auto c = fixture::chain({}, {fixture::tx(1, 1, 1, 0), fixture::tx(2, 1, 1, 0), fixture::tx(3, 1, 1, 0)});
  const std::vector<TxIndex> all{0, 1, 2};
  EXPECT_EQ(strip_dependents(all, c), all);
}

TEST(StripDependents, SimulatedDependencyShare) {
  // 29.6% of candidates depend on another candidate in the median block
  sim::SimConfig cfg;
  cfg.seed = 29;
  cfg.pools = {{"A", 1.0}};
  cfg.blocks = 60;
  cfg.tx_rate = 0.5;
  cfg.cpfp_rate = 0.296;
  cfg.vsize_model.kind = sim::VsizeModel::Kind::kFixed;
  const auto out = sim::generate(cfg);
  const auto& c = out.chain;
  std::size_t stripped = 0, total = 0;
  for (std::size_t b = 1; b < c.block_count(); ++b) {
    const auto pool = mempool_at(c, c.blocks()[b].observed_at - 1);
    const auto kept = strip_dependents(pool, c);
    for (TxIndex t : kept) {
      for (TxIndex p : c.parents_of(t)) ASSERT_FALSE(std::binary_search(pool.begin(), pool.end(), p));
    }
    stripped += pool.size() - kept.size();
    total += pool.size();
  }
  EXPECT_NEAR(static_cast<double>(stripped) / static_cast<double>(total), 0.296, 0.02);
}

}  // namespace
