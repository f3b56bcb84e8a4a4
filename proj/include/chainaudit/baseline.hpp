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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "chainaudit/model.hpp"

namespace chainaudit {

struct CandidateSet {
  Height block_height = 0;
  // Received before the block was observed and not confirmed at a lower height.
  std::vector<TxIndex> observed;
  // `observed` with dependents stripped and the block's own CPFP txs removed.
  std::vector<TxIndex> txids;
};

CandidateSet candidate_set(const ChainData& chain, Height height);

// Greedy fill by descending fee-rate (ties: earlier received, then txid). A
// transaction that does not fit is skipped and the scan continues.
std::vector<TxIndex> assemble_baseline(std::span<const TxIndex> candidates, std::int64_t capacity_vbytes,
                                       const ChainData& chain);

struct BaselineReport {
  Height height = 0;
  std::int64_t capacity_vbytes = 0;  // vsize of the block's non-CPFP txs
  std::vector<TxIndex> actual;       // non-CPFP block txs, block order
  std::vector<TxIndex> baseline;     // fill order
  double overlap_ratio = 1.0;        // |both| / |actual|, 1 for an empty block
  double overlap_ratio_vbytes = 1.0;
  // Sorted by index; together they partition actual ∪ baseline.
  std::vector<TxIndex> only_actual;
  std::vector<TxIndex> only_baseline;
  std::vector<TxIndex> both;
};

BaselineReport baseline_report(const ChainData& chain, Height height);
std::vector<BaselineReport> baseline_reports(const ChainData& chain, std::span<const Height> heights,
                                             unsigned jobs = 1);

enum class Category { kBoth = 0, kOnlyActual = 1, kOnlyBaseline = 2 };

struct CategorySample {
  std::int64_t delay_seconds = 0;
  FeeRate fee_rate;
};

struct CategoryDistributions {
  std::array<std::vector<CategorySample>, 3> by_category;
  const std::vector<CategorySample>& operator[](Category c) const {
    return by_category[static_cast<std::size_t>(c)];
  }
};

// Delay is measured against the observation time of block i for all three
// categories (the baseline shares its height). Unobserved txs are skipped.
CategoryDistributions category_delay_feerate(const ChainData& chain, std::span<const BaselineReport> reports);

double never_observed_fraction(const BaselineReport& report, const ChainData& chain);
double high_fee_missed_fraction(const BaselineReport& report, const ChainData& chain);
// |only_baseline| / |actual|, 0 for an empty block.
double raw_ignored_fraction(const BaselineReport& report);

struct CutoffPolicy {
  enum class Kind { kSeconds, kBlocks };
  Kind kind = Kind::kSeconds;
  std::int64_t k = 0;

  static CutoffPolicy seconds(std::int64_t k) { return {Kind::kSeconds, k}; }
  static CutoffPolicy blocks(std::int64_t k) { return {Kind::kBlocks, k}; }
};

// Ignored fraction after dropping only_baseline txs that arrived too late for
// the miner to plausibly have seen them. Throws kInsufficientHistory when a
// block cutoff reaches before the first block, kDomainError for k < 0.
double ignored_after_cutoff(const BaselineReport& report, const ChainData& chain, CutoffPolicy policy);

}  // namespace chainaudit
