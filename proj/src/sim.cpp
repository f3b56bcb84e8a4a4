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

#include "chainaudit/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "chainaudit/baseline.hpp"
#include "chainaudit/error.hpp"
#include "chainaudit/ingest.hpp"
#include "rng.hpp"

namespace chainaudit::sim {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Kind = DeviationSpec::Kind;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::kConfigError, what); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string hex16(std::uint64_t w) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, w >>= 4) s[static_cast<std::size_t>(i)] = kDigits[w & 0xf];
  return s;
}

// 64 hex chars derived from (seed, domain, n); distinct inputs collide with
// negligible probability.
std::string hex_id(std::uint64_t seed, std::uint64_t domain, std::uint64_t n) {
  std::uint64_t state = splitmix64(seed ^ splitmix64(domain ^ splitmix64(n)));
  std::string out;
  out.reserve(64);
  for (int i = 0; i < 4; ++i) {
    state = splitmix64(state + static_cast<std::uint64_t>(i));
    out += hex16(state);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::pair<Kind, std::string_view> kKindNames[] = {
    {Kind::kSelfInterestAccel, "self_interest_accel"}, {Kind::kDarkfeeAccel, "darkfee_accel"},
    {Kind::kRandomSubstitution, "random_substitution"}, {Kind::kDecelerateSet, "decelerate_set"},
    {Kind::kLowFeeInclude, "low_fee_include"},
};

std::string_view kind_name(Kind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  config_error("unknown deviation kind '" + s + "'");
}

bool generates_targets(Kind k) {
  return k == Kind::kSelfInterestAccel || k == Kind::kDarkfeeAccel || k == Kind::kDecelerateSet;
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [k, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      config_error("unknown field '" + k + "' in " + where);
    }
  }
}

struct SimTx {
  UnixTime arrival = 0;
  FeeRate rate;
  bool sub_threshold = false;
  int target_of = -1;  // deviation index for generated targets
  std::vector<std::uint32_t> parents;
  std::uint64_t digest = 0;
  std::int64_t in_block = -1;  // block number while assembling / confirmed
  bool confirmed = false;
};

class Simulator {
 public:
  explicit Simulator(const SimConfig& config)
      : cfg_(config), rng_(config.seed), mempool_(KeyOrder{this}) {
    double acc = 0.0;
    for (std::size_t p = 0; p < cfg_.pools.size(); ++p) {
      acc += cfg_.pools[p].hash_rate;
      cumulative_hash_.push_back(acc);
      auto& addrs = reward_addrs_.emplace_back();
      for (int k = 0; k < cfg_.pools[p].reward_addresses; ++k) {
        addrs.push_back("p" + hex_id(cfg_.seed, 2, p * 1000 + static_cast<std::size_t>(k)).substr(0, 39));
      }
    }
    targets_.resize(cfg_.deviations.size());
    generated_.assign(cfg_.deviations.size(), 0);
  }

  SimOutput run() {
    double t = static_cast<double>(cfg_.start_time);
    double next_tx = t + rng_.exponential(cfg_.tx_rate);
    double next_block = t + rng_.exponential(1.0 / cfg_.mean_block_interval);
    while (static_cast<std::int64_t>(blocks_.size()) < cfg_.blocks) {
      if (next_tx < next_block) {
        arrive(next_tx);
        next_tx += rng_.exponential(cfg_.tx_rate);
      } else {
        mine(next_block);
        next_block += rng_.exponential(1.0 / cfg_.mean_block_interval);
      }
    }
    return finish();
  }

 private:
  struct KeyOrder {
    const Simulator* sim;
    // descending fee-rate, then earlier arrival, then txid
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      const auto& ma = sim->meta_[a];
      const auto& mb = sim->meta_[b];
      if (auto c = ma.rate <=> mb.rate; c != 0) return c > 0;
      if (ma.arrival != mb.arrival) return ma.arrival < mb.arrival;
      return sim->txs_[a].txid < sim->txs_[b].txid;
    }
  };

  bool pool_in(const DeviationSpec& d, std::size_t pool) const {
    return std::find(d.pools.begin(), d.pools.end(), cfg_.pools[pool].name) != d.pools.end();
  }

  bool pool_takes_low_fee(std::size_t pool) const {
    return std::any_of(cfg_.deviations.begin(), cfg_.deviations.end(),
                       [&](const DeviationSpec& d) { return d.kind == Kind::kLowFeeInclude && pool_in(d, pool); });
  }

  std::string user_addr() { return "u" + hex16(rng_.next()) + hex16(rng_.next()).substr(0, 8); }

  std::int64_t draw_vsize() {
    const auto& m = cfg_.vsize_model;
    return m.kind == VsizeModel::Kind::kFixed ? m.fixed : rng_.between(m.lo, m.hi);
  }

  double draw_fee_rate() {
    const auto& f = cfg_.fee_model;
    const double mu = f.mu + f.congestion_slope * static_cast<double>(mempool_vbytes_) /
                                 static_cast<double>(cfg_.block_capacity);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const double rate = std::exp(mu + f.sigma * rng_.normal());
      if (rate >= f.min_rate) return rate;
    }
    return f.min_rate;
  }

  void arrive(double t) {
    const auto id = static_cast<std::uint32_t>(txs_.size());
    Transaction tx;
    SimTx meta;
    TxTruth truth;
    tx.txid = hex_id(cfg_.seed, 1, id);
    meta.arrival = static_cast<UnixTime>(std::floor(t));
    tx.vsize = draw_vsize();

    for (std::size_t d = 0; d < cfg_.deviations.size(); ++d) {
      const auto& dev = cfg_.deviations[d];
      if (!generates_targets(dev.kind)) continue;
      if (dev.count > 0 && generated_[d] >= dev.count) continue;
      if (!rng_.bernoulli(dev.rate)) continue;
      meta.target_of = static_cast<int>(d);
      ++generated_[d];
      break;
    }
    const DeviationSpec* target = meta.target_of >= 0 ? &cfg_.deviations[static_cast<std::size_t>(meta.target_of)] : nullptr;
    const bool dark = target && target->kind == Kind::kDarkfeeAccel;
    if (!target) meta.sub_threshold = rng_.bernoulli(cfg_.fee_model.sub_threshold_fraction);

    const double floor_rate = cfg_.fee_model.min_rate;
    if (dark || meta.sub_threshold) {
      // public fee-rate strictly below the relay floor
      const double cap = floor_rate * static_cast<double>(tx.vsize);
      tx.fee = std::min(static_cast<std::int64_t>(std::floor(rng_.uniform() * cap)),
                        static_cast<std::int64_t>(std::ceil(cap)) - 1);
      tx.fee = std::max<std::int64_t>(tx.fee, 0);
    } else if (target && target->target_fee_rate) {
      tx.fee = static_cast<std::int64_t>(std::ceil(*target->target_fee_rate * static_cast<double>(tx.vsize)));
    } else {
      tx.fee = static_cast<std::int64_t>(std::ceil(draw_fee_rate() * static_cast<double>(tx.vsize)));
    }
    meta.rate = FeeRate(tx.fee, tx.vsize);

    const bool relayed = !dark && !meta.sub_threshold;
    const bool unobserved = relayed && rng_.bernoulli(cfg_.unobserved_fraction);
    if (relayed && !unobserved) tx.received = meta.arrival;

    if (!target && relayed && !mempool_list_.empty() && rng_.bernoulli(cfg_.cpfp_rate)) {
      const std::uint32_t parent = mempool_list_[rng_.below(mempool_list_.size())];
      const auto& pm = meta_[parent];
      const bool parent_public = !pm.sub_threshold &&
          !(pm.target_of >= 0 && cfg_.deviations[static_cast<std::size_t>(pm.target_of)].kind == Kind::kDarkfeeAccel);
      if (parent_public) {
        tx.parents.push_back(txs_[parent].txid);
        meta.parents.push_back(parent);
        truth.labels.push_back("cpfp_child");
      }
    }

    if (target && target->kind == Kind::kSelfInterestAccel) {
      const auto pool = pool_index(target->pools.front());
      const auto& addrs = reward_addrs_[pool];
      tx.input_addrs.push_back(addrs[rng_.below(addrs.size())]);
      truth.labels.push_back("self_interest:" + target->pools.front());
    } else {
      tx.input_addrs.push_back(user_addr());
    }
    tx.output_addrs.push_back(user_addr());

    if (dark) truth.labels.push_back("darkfee:" + target->pools.front());
    if (target && target->kind == Kind::kDecelerateSet) truth.labels.push_back("decel_target");
    if (meta.sub_threshold) truth.labels.push_back("sub_threshold");
    if (unobserved) truth.labels.push_back("unobserved");
    std::sort(truth.labels.begin(), truth.labels.end());

    truth.txid = tx.txid;
    truth.arrival = meta.arrival;
    meta.digest = fnv1a64(tx.txid);
    mempool_vbytes_ += tx.vsize;

    txs_.push_back(std::move(tx));
    meta_.push_back(std::move(meta));
    tx_truth_.push_back(std::move(truth));
    list_pos_.push_back(mempool_list_.size());
    mempool_list_.push_back(id);
    mempool_.insert(id);
    if (meta_[id].target_of >= 0) targets_[static_cast<std::size_t>(meta_[id].target_of)].insert(id);
  }

  std::size_t pool_index(const std::string& name) const {
    for (std::size_t p = 0; p < cfg_.pools.size(); ++p) {
      if (cfg_.pools[p].name == name) return p;
    }
    config_error("deviation names unknown pool " + name);
  }

  std::size_t draw_pool() {
    const double u = rng_.uniform() * cumulative_hash_.back();
    for (std::size_t p = 0; p < cumulative_hash_.size(); ++p) {
      if (u < cumulative_hash_[p]) return p;
    }
    return cumulative_hash_.size() - 1;
  }

  bool parents_ready(std::uint32_t id, std::int64_t block_no) const {
    return std::all_of(meta_[id].parents.begin(), meta_[id].parents.end(), [&](std::uint32_t p) {
      return meta_[p].confirmed || meta_[p].in_block == block_no;
    });
  }

  // Appends id after its not-yet-included ancestors. Fails when an ancestor
  // is not eligible for this block.
  bool collect_package(std::uint32_t id, std::int64_t block_no, UnixTime now, bool low_fee,
                       std::vector<std::uint32_t>& package) const {
    const auto& m = meta_[id];
    if (std::find(package.begin(), package.end(), id) != package.end()) return true;
    for (std::uint32_t p : m.parents) {
      const auto& pm = meta_[p];
      if (pm.confirmed || pm.in_block == block_no) continue;
      if (pm.arrival >= now || (pm.sub_threshold && !low_fee)) return false;
      if (!collect_package(p, block_no, now, low_fee, package)) return false;
    }
    package.push_back(id);
    return true;
  }

  // Stable reorder so every in-block parent precedes its children.
  void parents_first(std::vector<std::uint32_t>& txs) const {
    const std::set<std::uint32_t> members(txs.begin(), txs.end());
    std::set<std::uint32_t> emitted;
    std::vector<std::uint32_t> out;
    out.reserve(txs.size());
    std::function<void(std::uint32_t)> emit = [&](std::uint32_t id) {
      if (!emitted.insert(id).second) return;
      for (std::uint32_t p : meta_[id].parents) {
        if (members.contains(p)) emit(p);
      }
      out.push_back(id);
    };
    for (std::uint32_t id : txs) emit(id);
    txs = std::move(out);
  }

  bool parents_confirmed(std::uint32_t id) const {
    return std::all_of(meta_[id].parents.begin(), meta_[id].parents.end(),
                       [&](std::uint32_t p) { return meta_[p].confirmed; });
  }

  void mine(double t) {
    const auto now = static_cast<UnixTime>(std::floor(t));
    const auto block_no = static_cast<std::int64_t>(blocks_.size());
    const std::size_t pool = draw_pool();
    const bool low_fee = pool_takes_low_fee(pool);

    BlockTruth truth;
    truth.height = cfg_.start_height + block_no;
    truth.time = now;
    truth.pool = cfg_.pools[pool].name;
    for (std::uint32_t id : mempool_list_) {
      if (meta_[id].arrival >= now) continue;
      ++truth.mempool_size;
      truth.mempool_digest += meta_[id].digest;
      if (cfg_.record_mempools) truth.mempool.push_back(txs_[id].txid);
    }
    std::sort(truth.mempool.begin(), truth.mempool.end());

    std::int64_t room = cfg_.block_capacity;
    std::vector<std::uint32_t> front;
    auto place = [&](std::uint32_t id, std::vector<std::uint32_t>& into) {
      into.push_back(id);
      meta_[id].in_block = block_no;
      room -= txs_[id].vsize;
    };

    // Front placement by accelerating pools.
    for (std::size_t d = 0; d < cfg_.deviations.size(); ++d) {
      const auto& dev = cfg_.deviations[d];
      if ((dev.kind != Kind::kDarkfeeAccel && dev.kind != Kind::kSelfInterestAccel) || !pool_in(dev, pool)) continue;
      std::vector<std::uint32_t> ready;
      for (std::uint32_t id : targets_[d]) {
        if (meta_[id].arrival < now && meta_[id].in_block != block_no && parents_ready(id, block_no)) ready.push_back(id);
      }
      if (dev.kind == Kind::kDarkfeeAccel) {
        // lowest public fee first: the strongest contrast with its predicted slot
        std::sort(ready.begin(), ready.end(), [&](std::uint32_t a, std::uint32_t b) {
          return KeyOrder{this}(b, a);
        });
      } else {
        std::sort(ready.begin(), ready.end(), KeyOrder{this});
      }
      std::int64_t taken = 0;
      for (std::uint32_t id : ready) {
        if (dev.max_per_block > 0 && taken >= dev.max_per_block) break;
        if (!rng_.bernoulli(dev.probability)) continue;
        if (txs_[id].vsize > room) continue;
        place(id, front);
        truth.front_placed.push_back(txs_[id].txid);
        ++taken;
      }
    }

    // Norm pass: greedy fee-rate fill with skip-and-continue.
    std::vector<std::uint32_t> selected;
    const std::int64_t smallest = cfg_.vsize_model.min();
    for (std::uint32_t id : mempool_) {
      if (room < smallest) break;
      const auto& m = meta_[id];
      if (m.in_block == block_no || m.arrival >= now) continue;
      if (m.target_of >= 0) {
        const auto& dev = cfg_.deviations[static_cast<std::size_t>(m.target_of)];
        if (dev.kind == Kind::kDarkfeeAccel) continue;
        if (dev.kind == Kind::kDecelerateSet && pool_in(dev, pool) && rng_.bernoulli(dev.probability)) continue;
      }
      if (m.sub_threshold && !low_fee) continue;
      // child pays for parent: unconfirmed ancestors come along as a package
      std::vector<std::uint32_t> package;
      if (!collect_package(id, block_no, now, low_fee, package)) continue;
      std::int64_t package_vsize = 0;
      for (std::uint32_t p : package) package_vsize += txs_[p].vsize;
      if (package_vsize > room) continue;
      for (std::uint32_t p : package) place(p, selected);
    }

    for (const auto& dev : cfg_.deviations) {
      if (dev.kind == Kind::kRandomSubstitution && pool_in(dev, pool)) {
        substitute(dev, block_no, now, low_fee, room, selected, truth);
      }
    }
    std::sort(selected.begin(), selected.end(), KeyOrder{this});
    parents_first(selected);
    for (const auto& dev : cfg_.deviations) {
      if (dev.kind == Kind::kRandomSubstitution && pool_in(dev, pool) && dev.swap_fraction > 0.0) {
        swap_positions(dev, block_no, selected);
      }
    }

    Block block;
    block.height = truth.height;
    block.hash = hex_id(cfg_.seed, 3, static_cast<std::uint64_t>(block_no));
    block.observed_at = now + cfg_.observer_lag;
    block.coinbase_tag = cfg_.pools[pool].anonymous ? "solo miner" : "/" + cfg_.pools[pool].name + "/";
    const auto& addrs = reward_addrs_[pool];
    block.reward_addrs.push_back(addrs[rng_.below(addrs.size())]);
    for (auto* part : {&front, &selected}) {
      for (std::uint32_t id : *part) {
        block.txids.push_back(txs_[id].txid);
        confirm(id);
      }
    }
    blocks_.push_back(std::move(block));
    block_truth_.push_back(std::move(truth));
  }

  void substitute(const DeviationSpec& dev, std::int64_t block_no, UnixTime now, bool low_fee, std::int64_t& room,
                  std::vector<std::uint32_t>& selected, BlockTruth& truth) {
    std::set<std::uint32_t> has_child;
    for (std::uint32_t id : selected) {
      for (std::uint32_t p : meta_[id].parents) {
        if (meta_[p].in_block == block_no) has_child.insert(p);
      }
    }
    std::vector<std::uint32_t> victims;
    for (std::uint32_t id : selected) {
      if (!has_child.contains(id)) victims.push_back(id);
    }
    const auto want = std::min<std::size_t>(
        victims.size(), static_cast<std::size_t>(std::llround(dev.fraction * static_cast<double>(selected.size()))));
    for (std::size_t i = 0; i < want; ++i) {
      std::swap(victims[i], victims[i + rng_.below(victims.size() - i)]);
    }
    victims.resize(want);
    std::sort(victims.begin(), victims.end());
    for (std::uint32_t id : victims) {
      meta_[id].in_block = -1;
      room += txs_[id].vsize;
      truth.substituted_out.push_back(txs_[id].txid);
    }
    std::erase_if(selected, [&](std::uint32_t id) { return std::binary_search(victims.begin(), victims.end(), id); });

    std::vector<std::uint32_t> pool;
    for (std::uint32_t id : mempool_) {
      const auto& m = meta_[id];
      if (m.in_block == block_no || m.arrival >= now) continue;
      if (std::binary_search(victims.begin(), victims.end(), id)) continue;
      if (m.target_of >= 0 && cfg_.deviations[static_cast<std::size_t>(m.target_of)].kind == Kind::kDarkfeeAccel) continue;
      if (m.sub_threshold && !low_fee) continue;
      if (!parents_confirmed(id)) continue;
      pool.push_back(id);
    }
    std::size_t added = 0;
    for (std::size_t i = 0; i < pool.size() && added < want; ++i) {
      std::swap(pool[i], pool[i + rng_.below(pool.size() - i)]);
      const std::uint32_t id = pool[i];
      if (txs_[id].vsize > room) continue;
      meta_[id].in_block = block_no;
      room -= txs_[id].vsize;
      selected.push_back(id);
      truth.substituted_in.push_back(txs_[id].txid);
      ++added;
    }
  }

  void swap_positions(const DeviationSpec& dev, std::int64_t block_no, std::vector<std::uint32_t>& selected) {
    std::set<std::uint32_t> linked;
    for (std::uint32_t id : selected) {
      for (std::uint32_t p : meta_[id].parents) {
        if (meta_[p].in_block == block_no) {
          linked.insert(p);
          linked.insert(id);
        }
      }
    }
    std::vector<std::size_t> free_slots;
    for (std::size_t k = 0; k < selected.size(); ++k) {
      if (!linked.contains(selected[k])) free_slots.push_back(k);
    }
    if (free_slots.size() < 2) return;
    const auto swaps = static_cast<std::size_t>(std::llround(dev.swap_fraction * static_cast<double>(free_slots.size())));
    for (std::size_t s = 0; s < swaps; ++s) {
      const auto a = free_slots[rng_.below(free_slots.size())];
      const auto b = free_slots[rng_.below(free_slots.size())];
      std::swap(selected[a], selected[b]);
    }
  }

  void confirm(std::uint32_t id) {
    auto& m = meta_[id];
    mempool_.erase(id);  // uses the key fields, so erase before any change
    m.confirmed = true;
    mempool_vbytes_ -= txs_[id].vsize;
    const std::size_t at = list_pos_[id];
    const std::uint32_t last = mempool_list_.back();
    mempool_list_[at] = last;
    list_pos_[last] = at;
    mempool_list_.pop_back();
    if (m.target_of >= 0) targets_[static_cast<std::size_t>(m.target_of)].erase(id);
  }

  SimOutput finish() {
    PoolDirectory dir;
    for (const auto& p : cfg_.pools) {
      if (!p.anonymous) dir.markers[p.name] = {"/" + p.name + "/"};
    }
    SimOutput out;
    out.chain = ChainData::build(std::move(blocks_), std::move(txs_));
    if (!dir.markers.empty()) {
      auto pool_of = attribute_pools(out.chain, dir);
      out.chain.set_attribution(std::move(dir), std::move(pool_of));
    } else {
      out.chain.set_attribution(std::move(dir), {});
    }
    out.truth.txs = std::move(tx_truth_);
    out.truth.blocks = std::move(block_truth_);
    return out;
  }

  const SimConfig& cfg_;
  detail::Rng rng_;
  std::vector<Transaction> txs_;
  std::vector<SimTx> meta_;
  std::vector<TxTruth> tx_truth_;
  std::vector<Block> blocks_;
  std::vector<BlockTruth> block_truth_;
  std::set<std::uint32_t, KeyOrder> mempool_;
  std::vector<std::uint32_t> mempool_list_;
  std::vector<std::size_t> list_pos_;
  std::vector<std::set<std::uint32_t>> targets_;
  std::vector<std::int64_t> generated_;
  std::int64_t mempool_vbytes_ = 0;
  std::vector<std::vector<std::string>> reward_addrs_;
  std::vector<double> cumulative_hash_;
};

}  // namespace

void SimConfig::validate() const {
  if (pools.empty()) config_error("at least one pool is required");
  double total = 0.0;
  std::set<std::string> names;
  for (const auto& p : pools) {
    if (p.name.empty() || p.name == kUnknownPool || p.name.find('/') != std::string::npos) {
      config_error("invalid pool name '" + p.name + "'");
    }
    if (!names.insert(p.name).second) config_error("duplicate pool " + p.name);
    if (!(p.hash_rate >= 0.0)) config_error("hash rate of " + p.name + " must be >= 0");
    if (p.reward_addresses < 1) config_error("pool " + p.name + " needs a reward address");
    total += p.hash_rate;
  }
  if (std::abs(total - 1.0) > 1e-9) config_error("hash rates must sum to 1");
  if (!(mean_block_interval > 0.0)) config_error("mean_block_interval must be > 0");
  if (!(tx_rate > 0.0)) config_error("tx_rate must be > 0");
  if (blocks < 1) config_error("blocks must be >= 1");
  if (observer_lag < 0) config_error("observer_lag must be >= 0");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(cpfp_rate) || !unit(unobserved_fraction) || !unit(fee_model.sub_threshold_fraction)) {
    config_error("rates and fractions must lie in [0, 1]");
  }
  if (!(fee_model.sigma >= 0.0) || !(fee_model.min_rate > 0.0)) config_error("fee model needs sigma >= 0, min_rate > 0");
  const auto& v = vsize_model;
  if (v.kind == VsizeModel::Kind::kFixed ? v.fixed < 1 : (v.lo < 1 || v.hi < v.lo)) config_error("invalid vsize model");
  const std::int64_t largest = v.kind == VsizeModel::Kind::kFixed ? v.fixed : v.hi;
  if (block_capacity < largest) config_error("block_capacity must hold the largest transaction");
  for (const auto& d : deviations) {
    if (d.pools.empty()) config_error(std::string(kind_name(d.kind)) + " needs pools");
    for (const auto& p : d.pools) {
      if (!names.contains(p)) config_error(std::string(kind_name(d.kind)) + " names unknown pool " + p);
    }
    if (!unit(d.rate) || !unit(d.probability) || !unit(d.fraction) || !unit(d.swap_fraction)) {
      config_error(std::string(kind_name(d.kind)) + " rates and fractions must lie in [0, 1]");
    }
    if (d.count < 0 || d.max_per_block < 0) config_error("count and max_per_block must be >= 0");
    if (d.target_fee_rate && !(*d.target_fee_rate >= fee_model.min_rate)) {
      config_error("target_fee_rate must be at least the fee floor");
    }
  }
}

SimConfig parse_config(std::string_view json_document) {
  const json j = json::parse(json_document, nullptr, false);
  if (j.is_discarded() || !j.is_object()) config_error("simulator config must be a JSON object");
  reject_unknown(j,
                 {"seed", "pools", "mean_block_interval", "block_capacity", "tx_rate", "fee_model", "vsize_model",
                  "cpfp_rate", "observer_lag", "unobserved_fraction", "blocks", "start_time", "start_height",
                  "deviations"},
                 "config");
  SimConfig c;
  c.seed = field<std::uint64_t>(j, "seed", c.seed);
  c.mean_block_interval = field(j, "mean_block_interval", c.mean_block_interval);
  c.block_capacity = field(j, "block_capacity", c.block_capacity);
  c.tx_rate = field(j, "tx_rate", c.tx_rate);
  c.cpfp_rate = field(j, "cpfp_rate", c.cpfp_rate);
  c.observer_lag = field(j, "observer_lag", c.observer_lag);
  c.unobserved_fraction = field(j, "unobserved_fraction", c.unobserved_fraction);
  c.blocks = field(j, "blocks", c.blocks);
  c.start_time = field(j, "start_time", c.start_time);
  c.start_height = field(j, "start_height", c.start_height);

  if (!j.contains("pools") || !j["pools"].is_array()) config_error("config needs a pools array");
  for (const auto& p : j["pools"]) {
    reject_unknown(p, {"name", "hash_rate", "anonymous", "reward_addresses"}, "pool");
    PoolSpec spec;
    spec.name = field<std::string>(p, "name", "");
    spec.hash_rate = field(p, "hash_rate", 0.0);
    spec.anonymous = field(p, "anonymous", false);
    spec.reward_addresses = field(p, "reward_addresses", spec.reward_addresses);
    c.pools.push_back(std::move(spec));
  }
  if (j.contains("fee_model")) {
    const auto& f = j["fee_model"];
    reject_unknown(f, {"mu", "sigma", "min_rate", "sub_threshold_fraction", "congestion_slope"}, "fee_model");
    c.fee_model.mu = field(f, "mu", c.fee_model.mu);
    c.fee_model.sigma = field(f, "sigma", c.fee_model.sigma);
    c.fee_model.min_rate = field(f, "min_rate", c.fee_model.min_rate);
    c.fee_model.sub_threshold_fraction = field(f, "sub_threshold_fraction", c.fee_model.sub_threshold_fraction);
    c.fee_model.congestion_slope = field(f, "congestion_slope", c.fee_model.congestion_slope);
  }
  if (j.contains("vsize_model")) {
    const auto& v = j["vsize_model"];
    reject_unknown(v, {"kind", "fixed", "lo", "hi"}, "vsize_model");
    const auto kind = field<std::string>(v, "kind", "uniform");
    if (kind == "fixed") {
      c.vsize_model.kind = VsizeModel::Kind::kFixed;
    } else if (kind == "uniform") {
      c.vsize_model.kind = VsizeModel::Kind::kUniform;
    } else {
      config_error("vsize_model.kind must be fixed or uniform");
    }
    c.vsize_model.fixed = field(v, "fixed", c.vsize_model.fixed);
    c.vsize_model.lo = field(v, "lo", c.vsize_model.lo);
    c.vsize_model.hi = field(v, "hi", c.vsize_model.hi);
  }
  if (j.contains("deviations")) {
    for (const auto& d : j["deviations"]) {
      reject_unknown(d,
                     {"kind", "pools", "rate", "count", "probability", "fraction", "swap_fraction", "target_fee_rate",
                      "max_per_block"},
                     "deviation");
      DeviationSpec dev;
      dev.kind = parse_kind(field<std::string>(d, "kind", ""));
      dev.pools = field<std::vector<std::string>>(d, "pools", {});
      dev.rate = field(d, "rate", dev.rate);
      dev.count = field(d, "count", dev.count);
      dev.probability = field(d, "probability", dev.probability);
      dev.fraction = field(d, "fraction", dev.fraction);
      dev.swap_fraction = field(d, "swap_fraction", dev.swap_fraction);
      if (d.contains("target_fee_rate") && !d["target_fee_rate"].is_null()) {
        dev.target_fee_rate = field(d, "target_fee_rate", 0.0);
      }
      dev.max_per_block = field(d, "max_per_block", dev.max_per_block);
      c.deviations.push_back(std::move(dev));
    }
  }
  c.validate();
  return c;
}

std::string encode_config(const SimConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["pools"] = ordered_json::array();
  for (const auto& p : c.pools) {
    j["pools"].push_back(
        {{"name", p.name}, {"hash_rate", p.hash_rate}, {"anonymous", p.anonymous}, {"reward_addresses", p.reward_addresses}});
  }
  j["mean_block_interval"] = c.mean_block_interval;
  j["block_capacity"] = c.block_capacity;
  j["tx_rate"] = c.tx_rate;
  j["fee_model"] = {{"mu", c.fee_model.mu},
                    {"sigma", c.fee_model.sigma},
                    {"min_rate", c.fee_model.min_rate},
                    {"sub_threshold_fraction", c.fee_model.sub_threshold_fraction},
                    {"congestion_slope", c.fee_model.congestion_slope}};
  j["vsize_model"] = {{"kind", c.vsize_model.kind == VsizeModel::Kind::kFixed ? "fixed" : "uniform"},
                      {"fixed", c.vsize_model.fixed},
                      {"lo", c.vsize_model.lo},
                      {"hi", c.vsize_model.hi}};
  j["cpfp_rate"] = c.cpfp_rate;
  j["observer_lag"] = c.observer_lag;
  j["unobserved_fraction"] = c.unobserved_fraction;
  j["blocks"] = c.blocks;
  j["start_time"] = c.start_time;
  j["start_height"] = c.start_height;
  j["deviations"] = ordered_json::array();
  for (const auto& d : c.deviations) {
    ordered_json dj;
    dj["kind"] = kind_name(d.kind);
    dj["pools"] = d.pools;
    dj["rate"] = d.rate;
    dj["count"] = d.count;
    dj["probability"] = d.probability;
    dj["fraction"] = d.fraction;
    dj["swap_fraction"] = d.swap_fraction;
    dj["target_fee_rate"] = d.target_fee_rate ? ordered_json(*d.target_fee_rate) : ordered_json(nullptr);
    dj["max_per_block"] = d.max_per_block;
    j["deviations"].push_back(std::move(dj));
  }
  return j.dump(2) + "\n";
}

bool TxTruth::has(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

std::vector<Txid> GroundTruth::labelled(std::string_view label) const {
  std::vector<Txid> out;
  for (const auto& t : txs) {
    if (t.has(label)) out.push_back(t.txid);
  }
  return out;
}

std::uint64_t mempool_digest(std::span<const Txid> txids) {
  std::uint64_t sum = 0;
  for (const auto& id : txids) sum += fnv1a64(id);
  return sum;
}

SimOutput generate(const SimConfig& config) {
  config.validate();
  return Simulator(config).run();
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
  // Events in time order; a tx arriving in the same second as a block was
  // not yet eligible for it and is listed after it.
  std::size_t t = 0;
  auto emit_tx = [&](const TxTruth& tx) {
    ordered_json j;
    j["event"] = "tx";
    j["time"] = tx.arrival;
    j["txid"] = tx.txid;
    j["labels"] = tx.labels;
    out << j.dump() << '\n';
  };
  std::vector<std::size_t> order(truth.txs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return truth.txs[a].arrival < truth.txs[b].arrival; });
  for (const auto& b : truth.blocks) {
    while (t < order.size() && truth.txs[order[t]].arrival < b.time) emit_tx(truth.txs[order[t++]]);
    ordered_json j;
    j["event"] = "block";
    j["time"] = b.time;
    j["height"] = b.height;
    j["pool"] = b.pool;
    j["mempool_size"] = b.mempool_size;
    j["mempool_digest"] = hex16(b.mempool_digest);
    j["front_placed"] = b.front_placed;
    j["substituted_in"] = b.substituted_in;
    j["substituted_out"] = b.substituted_out;
    std::vector<std::string> labels;
    if (!b.front_placed.empty()) labels.emplace_back("front_placed");
    if (!b.substituted_out.empty()) labels.emplace_back("substituted");
    j["labels"] = labels;
    if (!b.mempool.empty()) j["mempool"] = b.mempool;
    out << j.dump() << '\n';
  }
  while (t < order.size()) emit_tx(truth.txs[order[t++]]);
}

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& why) {
    throw Error(ErrorKind::kMalformedRecord, "ground truth line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("event")) bad("not an event object");
    try {
      const auto event = j.at("event").get<std::string>();
      if (event == "tx") {
        TxTruth t;
        t.txid = j.at("txid").get<std::string>();
        t.arrival = j.at("time").get<UnixTime>();
        t.labels = j.at("labels").get<std::vector<std::string>>();
        truth.txs.push_back(std::move(t));
      } else if (event == "block") {
        BlockTruth b;
        b.time = j.at("time").get<UnixTime>();
        b.height = j.at("height").get<Height>();
        b.pool = j.at("pool").get<std::string>();
        b.mempool_size = j.at("mempool_size").get<std::int64_t>();
        b.mempool_digest = std::stoull(j.at("mempool_digest").get<std::string>(), nullptr, 16);
        b.front_placed = j.at("front_placed").get<std::vector<std::string>>();
        b.substituted_in = j.at("substituted_in").get<std::vector<std::string>>();
        b.substituted_out = j.at("substituted_out").get<std::vector<std::string>>();
        if (j.contains("mempool")) b.mempool = j.at("mempool").get<std::vector<std::string>>();
        truth.blocks.push_back(std::move(b));
      } else {
        bad("unknown event '" + event + "'");
      }
    } catch (const json::exception& e) {
      bad(e.what());
    } catch (const std::logic_error& e) {
      bad(e.what());
    }
  }
  return truth;
}

void write_output(const SimOutput& output, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw Error(ErrorKind::kIo, "cannot write " + (dir / name).string());
    return f;
  };
  auto txs = open("transactions.jsonl");
  auto blocks = open("blocks.jsonl");
  write_chain(output.chain, txs, blocks);
  auto pools = open("pools.json");
  pools << encode_pool_config(output.chain.directory());
  auto truth = open("ground_truth.jsonl");
  write_ground_truth(output.truth, truth);
}

ReplayReport replay_report(const ChainData& chain, const GroundTruth& truth) {
  std::unordered_map<std::string_view, UnixTime> arrival;
  arrival.reserve(truth.txs.size());
  for (const auto& t : truth.txs) arrival.emplace(t.txid, t.arrival);

  ReplayReport report;
  for (const auto& bt : truth.blocks) {
    ++report.blocks_checked;
    const auto pos = chain.block_pos(bt.height);
    if (!pos) {
      report.mismatched_heights.push_back(bt.height);
      report.offending[bt.height] = {};
      continue;
    }
    const auto observed = candidate_set(chain, bt.height).observed;
    std::vector<Txid> observed_ids;
    observed_ids.reserve(observed.size());
    for (TxIndex t : observed) observed_ids.push_back(chain.tx(t).txid);
    if (static_cast<std::int64_t>(observed_ids.size()) == bt.mempool_size &&
        mempool_digest(observed_ids) == bt.mempool_digest) {
      continue;
    }

    // Rebuild the simulator's mempool from arrival times to name the culprits.
    const auto spos = static_cast<std::int64_t>(*pos);
    std::vector<Txid> expected;
    for (std::size_t i = 0; i < chain.txs().size(); ++i) {
      const auto& tx = chain.txs()[i];
      auto it = arrival.find(tx.txid);
      if (it == arrival.end() || it->second >= bt.time) continue;
      const auto confirmed = chain.confirm_pos(static_cast<TxIndex>(i));
      if (confirmed < 0 || confirmed >= spos) expected.push_back(tx.txid);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(observed_ids.begin(), observed_ids.end());
    std::vector<Txid> diff;
    std::set_symmetric_difference(expected.begin(), expected.end(), observed_ids.begin(), observed_ids.end(),
                                  std::back_inserter(diff));
    report.mismatched_heights.push_back(bt.height);
    report.offending[bt.height] = std::move(diff);
  }
  return report;
}

ReplayReport replay_check(const ChainData& chain, const GroundTruth& truth) {
  auto report = replay_report(chain, truth);
  if (!report.ok()) {
    std::vector<std::string> heights;
    for (Height h : report.mismatched_heights) heights.push_back(std::to_string(h));
    throw Error(ErrorKind::kMismatchFound,
                std::to_string(heights.size()) + " block(s) disagree with the simulator mempool", heights);
  }
  return report;
}

}  // namespace chainaudit::sim
