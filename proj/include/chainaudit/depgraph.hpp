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

#include <map>
#include <span>
#include <vector>

#include "chainaudit/model.hpp"

namespace chainaudit {

// Parent edges restricted to a scope. Keys are every scope member (possibly
// with an empty parent list); parent lists are sorted.
struct DepGraph {
  std::map<TxIndex, std::vector<TxIndex>> edges;

  std::size_t edge_count() const;
  bool operator==(const DepGraph&) const = default;
};

// Throws kCycleDetected when the restricted graph is not acyclic.
DepGraph build_graph(std::span<const TxIndex> scope, const ChainData& chain);

// Transactions of the block at `block_pos` with at least one parent in the
// same block. Sorted by index.
std::vector<TxIndex> cpfp_set(std::size_t block_pos, const ChainData& chain);

// Drops every candidate with a parent in the original candidate set. One pass:
// a grandchild whose parent was itself dropped is still dropped because its
// parent was a member of the input.
std::vector<TxIndex> strip_dependents(std::span<const TxIndex> candidates, const ChainData& chain);

}  // namespace chainaudit
