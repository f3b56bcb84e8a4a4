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

#include "chainaudit/depgraph.hpp"

#include <algorithm>

#include "chainaudit/error.hpp"

namespace chainaudit {
namespace {

std::vector<TxIndex> sorted_unique(std::span<const TxIndex> xs) {
  std::vector<TxIndex> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool has_parent_in(TxIndex tx, const std::vector<TxIndex>& members, const ChainData& chain) {
  const auto parents = chain.parents_of(tx);
  return std::any_of(parents.begin(), parents.end(),
                     [&](TxIndex p) { return std::binary_search(members.begin(), members.end(), p); });
}

}  // namespace

std::size_t DepGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, ps] : edges) n += ps.size();
  return n;
}

DepGraph build_graph(std::span<const TxIndex> scope, const ChainData& chain) {
  const auto members = sorted_unique(scope);
  DepGraph g;
  for (TxIndex u : members) {
    auto& ps = g.edges[u];
    for (TxIndex p : chain.parents_of(u)) {
      if (std::binary_search(members.begin(), members.end(), p)) ps.push_back(p);
    }
  }

  // Kahn's algorithm over child -> parent edges.
  std::map<TxIndex, std::size_t> pending_children;
  for (const auto& [u, ps] : g.edges) {
    pending_children.try_emplace(u, 0);
    for (TxIndex p : ps) ++pending_children[p];
  }
  std::vector<TxIndex> ready;
  for (const auto& [u, n] : pending_children) {
    if (n == 0) ready.push_back(u);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const TxIndex u = ready.back();
    ready.pop_back();
    ++visited;
    for (TxIndex p : g.edges[u]) {
      if (--pending_children[p] == 0) ready.push_back(p);
    }
  }
  if (visited != g.edges.size()) {
    std::vector<std::string> stuck;
    for (const auto& [u, n] : pending_children) {
      if (n > 0) stuck.push_back(chain.tx(u).txid);
    }
    const std::string what = "dependency cycle among " + std::to_string(stuck.size()) + " txs";
    throw Error(ErrorKind::kCycleDetected, what, std::move(stuck));
  }
  return g;
}

std::vector<TxIndex> cpfp_set(std::size_t block_pos, const ChainData& chain) {
  const auto members = sorted_unique(chain.block_txs(block_pos));
  std::vector<TxIndex> out;
  for (TxIndex u : members) {
    if (has_parent_in(u, members, chain)) out.push_back(u);
  }
  return out;
}

std::vector<TxIndex> strip_dependents(std::span<const TxIndex> candidates, const ChainData& chain) {
  const auto members = sorted_unique(candidates);
  std::vector<TxIndex> out;
  out.reserve(members.size());
  for (TxIndex u : members) {
    if (!has_parent_in(u, members, chain)) out.push_back(u);
  }
  return out;
}

}  // namespace chainaudit
