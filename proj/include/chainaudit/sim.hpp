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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chainaudit/model.hpp"

namespace chainaudit::sim {

struct PoolSpec {
  std::string name;
  double hash_rate = 0.0;
  bool anonymous = false;  // coinbase carries no marker; attributed "unknown"
  int reward_addresses = 2;
};

struct FeeModel {
  // log-normal fee-rate in sat/vB, resampled until >= min_rate
  double mu = std::log(20.0);
  double sigma = 1.0;
  double min_rate = 1.0;
  // share of arrivals paying below min_rate; the observer (a default node)
  // drops these and norm-following miners never include them
  double sub_threshold_fraction = 0.0;
  // mu is shifted by slope * (mempool vbytes / block capacity) at arrival
  double congestion_slope = 0.0;
};

struct VsizeModel {
  enum class Kind { kFixed, kUniform };
  Kind kind = Kind::kUniform;
  std::int64_t fixed = 250;
  std::int64_t lo = 110;
  std::int64_t hi = 10'000;

  std::int64_t min() const { return kind == Kind::kFixed ? fixed : lo; }
};

struct DeviationSpec {
  enum class Kind { kSelfInterestAccel, kDarkfeeAccel, kRandomSubstitution, kDecelerateSet, kLowFeeInclude };

  Kind kind = Kind::kRandomSubstitution;
  std::vector<std::string> pools;
  double rate = 0.0;     // per-arrival probability of generating a target tx
  std::int64_t count = 0;  // cap on generated targets, 0 = no cap
  // front-placement probability (accel kinds) or skip probability (decelerate_set),
  // drawn per target per block
  double probability = 1.0;
  double fraction = 0.0;       // random_substitution: share of selected txs replaced
  double swap_fraction = 0.0;  // random_substitution: share of block slots swapped
  std::optional<double> target_fee_rate;  // sat/vB for generated targets
  std::int64_t max_per_block = 0;         // darkfee: front placements per block, 0 = no cap
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::vector<PoolSpec> pools;
  double mean_block_interval = 600.0;
  std::int64_t block_capacity = 1'000'000;
  double tx_rate = 1.0;  // arrivals per second
  FeeModel fee_model;
  VsizeModel vsize_model;
  double cpfp_rate = 0.0;
  // seconds between a block being mined and the observer receiving it; the
  // miner therefore builds from a mempool this much older than the observer's
  std::int64_t observer_lag = 0;
  double unobserved_fraction = 0.0;
  std::int64_t blocks = 100;
  UnixTime start_time = 1'600'000'000;
  Height start_height = 0;
  std::vector<DeviationSpec> deviations;
  bool record_mempools = false;  // keep full mempool lists in memory (tests)

  // Throws kConfigError.
  void validate() const;
};

SimConfig parse_config(std::string_view json_document);
std::string encode_config(const SimConfig& config);

struct TxTruth {
  Txid txid;
  UnixTime arrival = 0;  // true arrival second
  std::vector<std::string> labels;

  bool has(std::string_view label) const;
};

struct BlockTruth {
  Height height = 0;
  UnixTime time = 0;
  std::string pool;
  std::int64_t mempool_size = 0;  // eligible mempool at the mining event
  std::uint64_t mempool_digest = 0;
  std::vector<Txid> front_placed;
  std::vector<Txid> substituted_in;
  std::vector<Txid> substituted_out;
  std::vector<Txid> mempool;  // only with record_mempools
};

struct GroundTruth {
  std::vector<TxTruth> txs;  // parallel to the chain's tx order
  std::vector<BlockTruth> blocks;

  std::vector<Txid> labelled(std::string_view label) const;
};

// Order-independent digest of a txid set.
std::uint64_t mempool_digest(std::span<const Txid> txids);

struct SimOutput {
  ChainData chain;
  GroundTruth truth;
};

// Deterministic for a given config: same seed, same bytes.
SimOutput generate(const SimConfig& config);

void write_ground_truth(const GroundTruth& truth, std::ostream& out);
GroundTruth read_ground_truth(std::istream& in);

// transactions.jsonl, blocks.jsonl, pools.json, ground_truth.jsonl
void write_output(const SimOutput& output, const std::filesystem::path& dir);

struct ReplayReport {
  std::size_t blocks_checked = 0;
  std::vector<Height> mismatched_heights;
  std::map<Height, std::vector<Txid>> offending;  // symmetric difference per height

  bool ok() const noexcept { return mismatched_heights.empty(); }
};

// Compares each block's observed candidate pool with the simulator's mempool.
ReplayReport replay_report(const ChainData& chain, const GroundTruth& truth);
// Same, but throws kMismatchFound listing the offending heights.
ReplayReport replay_check(const ChainData& chain, const GroundTruth& truth);

}  // namespace chainaudit::sim
