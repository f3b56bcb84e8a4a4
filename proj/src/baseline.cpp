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

#include "chainaudit/baseline.hpp"

#include <algorithm>

#include "chainaudit/depgraph.hpp"
#include "chainaudit/error.hpp"
#include "chainaudit/parallel.hpp"

namespace chainaudit {
namespace {

std::size_t require_block(const ChainData& chain, Height height) {
  auto pos = chain.block_pos(height);
  if (!pos) throw Error(ErrorKind::kDomainError, "no block at height " + std::to_string(height));
  return *pos;
}

std::vector<TxIndex> non_cpfp_block_txs(const ChainData& chain, std::size_t pos) {
  const auto cpfp = cpfp_set(pos, chain);
  std::vector<TxIndex> out;
  for (TxIndex t : chain.block_txs(pos)) {
    if (!std::binary_search(cpfp.begin(), cpfp.end(), t)) out.push_back(t);
  }
  return out;
}

std::int64_t total_vsize(const ChainData& chain, std::span<const TxIndex> txs) {
  std::int64_t sum = 0;
  for (TxIndex t : txs) sum += chain.tx(t).vsize;
  return sum;
}

}  // namespace

CandidateSet candidate_set(const ChainData& chain, Height height) {
  const std::size_t pos = require_block(chain, height);
  const UnixTime cutoff = chain.blocks()[pos].observed_at;
  const auto spos = static_cast<std::int64_t>(pos);

  CandidateSet cs;
  cs.block_height = height;
  for (TxIndex t : chain.by_received()) {
    if (*chain.tx(t).received >= cutoff) break;
    const auto confirmed = chain.confirm_pos(t);
    if (confirmed < 0 || confirmed >= spos) cs.observed.push_back(t);
  }
  std::sort(cs.observed.begin(), cs.observed.end());

  const auto cpfp = cpfp_set(pos, chain);
  for (TxIndex t : strip_dependents(cs.observed, chain)) {
    if (!std::binary_search(cpfp.begin(), cpfp.end(), t)) cs.txids.push_back(t);
  }
  return cs;
}

std::vector<TxIndex> assemble_baseline(std::span<const TxIndex> candidates, std::int64_t capacity_vbytes,
                                       const ChainData& chain) {
  std::vector<TxIndex> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end(), [&](TxIndex a, TxIndex b) {
    const auto& ta = chain.tx(a);
    const auto& tb = chain.tx(b);
    if (auto c = ta.fee_rate() <=> tb.fee_rate(); c != 0) return c > 0;
    if (ta.received != tb.received) {
      if (!ta.received) return false;
      if (!tb.received) return true;
      return *ta.received < *tb.received;
    }
    return ta.txid < tb.txid;
  });

  std::vector<TxIndex> block;
  std::int64_t room = capacity_vbytes;
  for (TxIndex t : order) {
    const auto vsize = chain.tx(t).vsize;
    if (vsize > room) continue;
    block.push_back(t);
    room -= vsize;
  }
  return block;
}

BaselineReport baseline_report(const ChainData& chain, Height height) {
  const std::size_t pos = require_block(chain, height);
  BaselineReport r;
  r.height = height;
  r.actual = non_cpfp_block_txs(chain, pos);
  r.capacity_vbytes = total_vsize(chain, r.actual);
  r.baseline = assemble_baseline(candidate_set(chain, height).txids, r.capacity_vbytes, chain);

  std::vector<TxIndex> actual_sorted = r.actual;
  std::vector<TxIndex> baseline_sorted = r.baseline;
  std::sort(actual_sorted.begin(), actual_sorted.end());
  std::sort(baseline_sorted.begin(), baseline_sorted.end());
  std::set_intersection(actual_sorted.begin(), actual_sorted.end(), baseline_sorted.begin(), baseline_sorted.end(),
                        std::back_inserter(r.both));
  std::set_difference(actual_sorted.begin(), actual_sorted.end(), baseline_sorted.begin(), baseline_sorted.end(),
                      std::back_inserter(r.only_actual));
  std::set_difference(baseline_sorted.begin(), baseline_sorted.end(), actual_sorted.begin(), actual_sorted.end(),
                      std::back_inserter(r.only_baseline));

  if (!r.actual.empty()) {
    r.overlap_ratio = static_cast<double>(r.both.size()) / static_cast<double>(r.actual.size());
    r.overlap_ratio_vbytes =
        static_cast<double>(total_vsize(chain, r.both)) / static_cast<double>(r.capacity_vbytes);
  }
  return r;
}

std::vector<BaselineReport> baseline_reports(const ChainData& chain, std::span<const Height> heights,
                                             unsigned jobs) {
  std::vector<BaselineReport> out(heights.size());
  parallel_for(heights.size(), jobs, [&](std::size_t i) { out[i] = baseline_report(chain, heights[i]); });
  return out;
}

CategoryDistributions category_delay_feerate(const ChainData& chain, std::span<const BaselineReport> reports) {
  CategoryDistributions d;
  for (const auto& r : reports) {
    const std::size_t pos = require_block(chain, r.height);
    const UnixTime at = chain.blocks()[pos].observed_at;
    auto add = [&](Category c, const std::vector<TxIndex>& txs) {
      for (TxIndex t : txs) {
        const auto& tx = chain.tx(t);
        if (!tx.received) continue;
        d.by_category[static_cast<std::size_t>(c)].push_back({at - *tx.received, tx.fee_rate()});
      }
    };
    add(Category::kBoth, r.both);
    add(Category::kOnlyActual, r.only_actual);
    add(Category::kOnlyBaseline, r.only_baseline);
  }
  return d;
}

double never_observed_fraction(const BaselineReport& report, const ChainData& chain) {
  if (report.only_actual.empty()) return 0.0;
  const auto unseen = std::count_if(report.only_actual.begin(), report.only_actual.end(),
                                    [&](TxIndex t) { return !chain.tx(t).received.has_value(); });
  return static_cast<double>(unseen) / static_cast<double>(report.only_actual.size());
}

double high_fee_missed_fraction(const BaselineReport& report, const ChainData& chain) {
  if (report.only_baseline.empty() || report.actual.empty()) return 0.0;
  FeeRate floor = chain.tx(report.actual.front()).fee_rate();
  for (TxIndex t : report.actual) floor = std::min(floor, chain.tx(t).fee_rate());
  const auto above = std::count_if(report.only_baseline.begin(), report.only_baseline.end(),
                                   [&](TxIndex t) { return chain.tx(t).fee_rate() > floor; });
  return static_cast<double>(above) / static_cast<double>(report.only_baseline.size());
}

double raw_ignored_fraction(const BaselineReport& report) {
  if (report.actual.empty()) return 0.0;
  return static_cast<double>(report.only_baseline.size()) / static_cast<double>(report.actual.size());
}

double ignored_after_cutoff(const BaselineReport& report, const ChainData& chain, CutoffPolicy policy) {
  if (policy.k < 0) throw Error(ErrorKind::kDomainError, "cutoff k must be >= 0");
  const std::size_t pos = require_block(chain, report.height);

  UnixTime latest_ok = 0;  // keep txs received at or before this time
  if (policy.kind == CutoffPolicy::Kind::kSeconds) {
    latest_ok = chain.blocks()[pos].observed_at - policy.k;
  } else {
    if (static_cast<std::int64_t>(pos) - policy.k < 0) {
      throw Error(ErrorKind::kInsufficientHistory,
                  "block cutoff " + std::to_string(policy.k) + " reaches before the first block at height " +
                      std::to_string(report.height));
    }
    latest_ok = chain.blocks()[pos - static_cast<std::size_t>(policy.k)].observed_at;
  }
  if (report.actual.empty()) return 0.0;
  const auto remaining = std::count_if(report.only_baseline.begin(), report.only_baseline.end(), [&](TxIndex t) {
    const auto& r = chain.tx(t).received;
    return r && *r <= latest_ok;
  });
  return static_cast<double>(remaining) / static_cast<double>(report.actual.size());
}

}  // namespace chainaudit
