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

#include "chainaudit/ordering.hpp"

#include <algorithm>
#include <numeric>

#include "chainaudit/depgraph.hpp"
#include "chainaudit/error.hpp"
#include "chainaudit/kernels.hpp"
#include "chainaudit/parallel.hpp"
#include "rng.hpp"

namespace chainaudit {

double BlockPositions::signed_error(std::size_t k) const {
  if (n() <= 1) return 0.0;
  return static_cast<double>(predicted_rank[k] - observed_rank[k]) * 100.0 / static_cast<double>(n() - 1);
}

BlockPositions block_positions(std::size_t block_pos, const ChainData& chain) {
  BlockPositions p;
  p.height = chain.blocks()[block_pos].height;
  const auto cpfp = cpfp_set(block_pos, chain);
  for (TxIndex t : chain.block_txs(block_pos)) {
    if (!std::binary_search(cpfp.begin(), cpfp.end(), t)) p.txs.push_back(t);
  }
  const std::size_t n = p.txs.size();
  p.observed_rank.resize(n);
  std::iota(p.observed_rank.begin(), p.observed_rank.end(), 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return chain.tx(p.txs[a]).fee_rate() > chain.tx(p.txs[b]).fee_rate();
  });
  p.predicted_rank.resize(n);
  for (std::size_t r = 0; r < n; ++r) p.predicted_rank[order[r]] = static_cast<std::int32_t>(r + 1);
  return p;
}

std::map<Txid, PercentilePosition> predict_positions(std::size_t block_pos, const ChainData& chain) {
  const auto p = block_positions(block_pos, chain);
  std::map<Txid, PercentilePosition> out;
  for (std::size_t k = 0; k < p.txs.size(); ++k) out.emplace(chain.tx(p.txs[k]).txid, p.predicted(k));
  return out;
}

double ppe(const BlockPositions& p) {
  const std::int64_t n = p.n();
  if (n <= 1) return 0.0;
  const std::int64_t total = kernels::active().abs_diff_sum(p.predicted_rank, p.observed_rank);
  return static_cast<double>(total) * 100.0 / (static_cast<double>(n - 1) * static_cast<double>(n));
}

double ppe(std::size_t block_pos, const ChainData& chain) { return ppe(block_positions(block_pos, chain)); }

PositionStats position_stats(std::size_t block_pos, const ChainData& chain, bool per_tx) {
  const auto p = block_positions(block_pos, chain);
  PositionStats s;
  s.height = p.height;
  s.n = p.n();
  s.ppe = ppe(p);
  if (per_tx) {
    for (std::size_t k = 0; k < p.txs.size(); ++k) s.per_tx_sppe.emplace(chain.tx(p.txs[k]).txid, p.signed_error(k));
  }
  return s;
}

std::vector<PositionStats> position_stats_all(const ChainData& chain, unsigned jobs, bool per_tx) {
  std::vector<PositionStats> out(chain.block_count());
  parallel_for(out.size(), jobs, [&](std::size_t b) { out[b] = position_stats(b, chain, per_tx); });
  return out;
}

double sppe(std::span<const std::size_t> block_positions_of_m, std::span<const TxIndex> c_txs,
            const ChainData& chain) {
  std::vector<TxIndex> wanted(c_txs.begin(), c_txs.end());
  std::sort(wanted.begin(), wanted.end());

  double total = 0.0;
  std::int64_t found = 0;
  std::vector<std::int32_t> predicted;
  std::vector<std::int32_t> observed;
  for (std::size_t b : block_positions_of_m) {
    const auto p = block_positions(b, chain);
    predicted.clear();
    observed.clear();
    for (std::size_t k = 0; k < p.txs.size(); ++k) {
      if (!std::binary_search(wanted.begin(), wanted.end(), p.txs[k])) continue;
      predicted.push_back(p.predicted_rank[k]);
      observed.push_back(p.observed_rank[k]);
    }
    found += static_cast<std::int64_t>(predicted.size());
    if (p.n() > 1 && !predicted.empty()) {
      const std::int64_t diff = kernels::active().diff_sum(predicted, observed);
      total += static_cast<double>(diff) * 100.0 / static_cast<double>(p.n() - 1);
    }
  }
  if (found == 0) throw Error(ErrorKind::kNoCTxFound, "no c-transaction appears in the given blocks");
  return total / static_cast<double>(found);
}

ViolationStats violation_pairs(const Snapshot& snapshot, const ChainData& chain, std::int64_t epsilon_seconds,
                               bool exclude_cpfp) {
  std::vector<TxIndex> rows;
  rows.reserve(snapshot.txs.size());
  for (TxIndex t : snapshot.txs) {
    const auto pos = chain.confirm_pos(t);
    if (pos < 0 || !chain.tx(t).received) continue;
    if (exclude_cpfp) {
      const auto parents = chain.parents_of(t);
      const bool cpfp = std::any_of(parents.begin(), parents.end(), [&](TxIndex p) { return chain.confirm_pos(p) == pos; });
      if (cpfp) continue;
    }
    rows.push_back(t);
  }
  std::sort(rows.begin(), rows.end(), [&](TxIndex a, TxIndex b) {
    const auto ra = *chain.tx(a).received;
    const auto rb = *chain.tx(b).received;
    return ra != rb ? ra < rb : a < b;
  });

  const std::size_t n = rows.size();
  std::vector<std::int64_t> time(n), fee(n), vsize(n), block(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& tx = chain.tx(rows[k]);
    time[k] = *tx.received;
    fee[k] = tx.fee;
    vsize[k] = tx.vsize;
    block[k] = chain.confirm_pos(rows[k]);
  }
  const auto counts = kernels::active().count_violation_pairs({time, fee, vsize, block}, epsilon_seconds);

  ViolationStats v;
  v.snapshot_time = snapshot.time;
  v.epsilon_seconds = epsilon_seconds;
  v.pairs_checked = counts.checked;
  v.violations = counts.violations;
  v.fraction = counts.checked == 0 ? 0.0 : static_cast<double>(counts.violations) / static_cast<double>(counts.checked);
  return v;
}

std::vector<Snapshot> sample_snapshots(const ChainData& chain, std::size_t k, std::uint64_t seed) {
  const std::size_t n = chain.block_count();
  k = std::min(k, n);
  std::vector<std::size_t> picks(n);
  std::iota(picks.begin(), picks.end(), std::size_t{0});
  detail::Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(picks[i], picks[j]);
  }
  picks.resize(k);
  std::sort(picks.begin(), picks.end());

  std::vector<Snapshot> out;
  out.reserve(k);
  for (std::size_t b : picks) {
    const UnixTime t = chain.blocks()[b].observed_at;
    out.push_back({t, mempool_at(chain, t)});
  }
  return out;
}

}  // namespace chainaudit
