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

#include "chainaudit/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chainaudit/audit.hpp"
#include "chainaudit/baseline.hpp"
#include "chainaudit/error.hpp"
#include "chainaudit/ingest.hpp"
#include "chainaudit/ordering.hpp"
#include "chainaudit/report.hpp"
#include "chainaudit/sim.hpp"
#include "chainaudit/stats.hpp"

namespace chainaudit::cli {
namespace {

namespace fs = std::filesystem;
using report::Json;

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Inputs {
  std::string data_dir;
  std::string txs;
  std::string blocks;
  std::string pools;
  std::string out;
  unsigned jobs = 1;
  bool no_meta = false;
  std::optional<Height> from;
  std::optional<Height> to;
};

unsigned default_jobs() {
  const char* env = std::getenv("CHAIN_AUDIT_JOBS");
  if (!env || !*env) return 1;
  unsigned v = 0;
  const auto* end = env + std::strlen(env);
  auto [p, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || p != end || v == 0) throw UsageError("CHAIN_AUDIT_JOBS must be a positive integer");
  return v;
}

ChainData load(const Inputs& in) {
  auto pick = [&](const std::string& explicit_path, const char* name) -> fs::path {
    if (!explicit_path.empty()) return explicit_path;
    if (!in.data_dir.empty()) return fs::path(in.data_dir) / name;
    throw UsageError(std::string("missing input: pass --data-dir or --") +
                     (std::string_view(name) == "transactions.jsonl" ? "txs"
                      : std::string_view(name) == "blocks.jsonl"     ? "blocks"
                                                                     : "pools"));
  };
  return parse_chain(pick(in.txs, "transactions.jsonl"), pick(in.blocks, "blocks.jsonl"),
                     pick(in.pools, "pools.json"));
}

HeightRange window_of(const ChainData& chain, const Inputs& in) {
  HeightRange w = full_window(chain);
  if (in.from) w.first = *in.from;
  if (in.to) w.last = *in.to;
  if (w.first > w.last) throw Error(ErrorKind::kEmptyWindow, "window is empty");
  return w;
}

std::vector<Height> heights_in(const ChainData& chain, HeightRange w) {
  std::vector<Height> hs;
  for (const auto& b : chain.blocks()) {
    if (w.contains(b.height)) hs.push_back(b.height);
  }
  return hs;
}

std::vector<Txid> read_txset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::vector<Txid> ids;
  std::string line;
  while (std::getline(f, line)) {
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    const auto b = line.find_last_not_of(" \t\r");
    ids.push_back(line.substr(a, b - a + 1));
  }
  return ids;
}

std::vector<TxIndex> resolve_txset(const ChainData& chain, const std::string& path) {
  const auto ids = read_txset(path);
  std::vector<Txid> missing;
  for (const auto& id : ids) {
    if (!chain.find(id)) missing.push_back(id);
  }
  if (!missing.empty()) {
    const std::string what = std::to_string(missing.size()) + " txid(s) in " + path + " are unknown";
    throw Error(ErrorKind::kDanglingTxid, what, std::move(missing));
  }
  return chain.resolve(ids);
}

std::vector<double> parse_thresholds(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::logic_error&) {
      throw UsageError("bad threshold '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError("--thresholds needs at least one value");
  return out;
}

std::vector<std::string> named_pools(const ChainData& chain) {
  std::vector<std::string> out;
  for (const auto& [name, _] : chain.directory().markers) out.push_back(name);
  return out;
}

Json meta(const Inputs& in, std::string_view command) {
  Json m;
  m["tool"] = "chain-audit";
  m["version"] = kVersion;
  m["command"] = command;
  if (!in.no_meta) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    m["generated_at"] = buf;
  }
  return m;
}

void emit(const Inputs& in, std::ostream& out, const std::string& text) {
  if (in.out.empty() || in.out == "-") {
    out << text;
    return;
  }
  std::ofstream f(in.out, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorKind::kIo, "cannot write " + in.out);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// --- subcommands -----------------------------------------------------------

std::string run_ingest_check(const Inputs& in) {
  const auto chain = load(in);
  std::int64_t unconfirmed = 0;
  std::int64_t unobserved = 0;
  for (std::size_t i = 0; i < chain.txs().size(); ++i) {
    if (chain.confirm_pos(static_cast<TxIndex>(i)) < 0) ++unconfirmed;
    if (!chain.txs()[i].received) ++unobserved;
  }
  Json j;
  j["meta"] = meta(in, "ingest-check");
  j["transactions"] = chain.txs().size();
  j["blocks"] = chain.block_count();
  j["unconfirmed"] = unconfirmed;
  j["never_observed"] = unobserved;
  if (chain.block_count() > 0) {
    const auto share = block_counts(chain, full_window(chain));
    j["first_height"] = chain.blocks().front().height;
    j["last_height"] = chain.blocks().back().height;
    j["blocks_by_pool"] = share.blocks_by_pool;
  }
  return dump(j);
}

std::string run_baseline(const Inputs& in, bool csv) {
  const auto chain = load(in);
  const auto reports = baseline_reports(chain, heights_in(chain, window_of(chain, in)), in.jobs);
  if (csv) {
    std::ostringstream s;
    s << "height,capacity_vbytes,actual,baseline,overlap_ratio,overlap_ratio_vbytes,ignored_fraction,"
         "never_observed_fraction\n";
    for (const auto& r : reports) {
      s << r.height << ',' << r.capacity_vbytes << ',' << r.actual.size() << ',' << r.baseline.size() << ','
        << report::format_fixed(r.overlap_ratio, 6) << ',' << report::format_fixed(r.overlap_ratio_vbytes, 6) << ','
        << report::format_fixed(raw_ignored_fraction(r), 6) << ','
        << report::format_fixed(never_observed_fraction(r, chain), 6) << '\n';
    }
    return s.str();
  }
  Json j;
  j["meta"] = meta(in, "baseline");
  j["baseline"] = Json::array();
  for (const auto& r : reports) j["baseline"].push_back(report::to_json(r, chain));
  return dump(j);
}

std::string run_positions(const Inputs& in, bool per_tx) {
  const auto chain = load(in);
  auto stats = position_stats_all(chain, in.jobs, per_tx);
  const auto w = window_of(chain, in);
  std::erase_if(stats, [&](const PositionStats& s) { return !w.contains(s.height); });
  if (!per_tx) return report::positions_csv(stats);
  Json j;
  j["meta"] = meta(in, "positions");
  j["positions"] = Json::array();
  for (const auto& s : stats) j["positions"].push_back(report::to_json(s));
  return dump(j);
}

struct ViolationArgs {
  std::int64_t epsilon = 0;
  std::size_t snapshots = 30;
  std::optional<std::uint64_t> seed;
  bool exclude_cpfp = false;
  std::string snapshot_file;
};

std::vector<ViolationStats> violations_of(const ChainData& chain, const ViolationArgs& a) {
  std::vector<Snapshot> snaps;
  if (!a.snapshot_file.empty()) {
    std::ifstream f(a.snapshot_file);
    if (!f) throw Error(ErrorKind::kIo, "cannot open " + a.snapshot_file);
    snaps = read_snapshots(f, chain).snapshots();
  } else {
    if (!a.seed) throw UsageError("snapshot sampling requires --seed");
    snaps = sample_snapshots(chain, a.snapshots, *a.seed);
  }
  std::vector<ViolationStats> rows;
  rows.reserve(snaps.size());
  for (const auto& s : snaps) rows.push_back(violation_pairs(s, chain, a.epsilon, a.exclude_cpfp));
  return rows;
}

std::string run_violations(const Inputs& in, const ViolationArgs& a) {
  if (a.snapshot_file.empty() && !a.seed) throw UsageError("snapshot sampling requires --seed");
  const auto chain = load(in);
  return report::violations_csv(violations_of(chain, a));
}

// Named pools are tested as given; the default leaves out a pool that mined
// every block, since a test against theta0 = 1 is undefined.
std::vector<std::string> pools_or_active(const ChainData& chain, HeightRange w, const std::vector<std::string>& pools) {
  if (!pools.empty()) return pools;
  auto active = active_pools(chain, w);
  std::erase_if(active, [&](const std::string& p) { return hash_rate(chain, p, w) >= 1.0; });
  return active;
}

std::string run_difftest(const Inputs& in, const std::vector<std::string>& pools, const std::string& txset,
                         double alpha, int precision) {
  const auto chain = load(in);
  const auto w = window_of(chain, in);
  const auto c_txs = resolve_txset(chain, txset);
  const auto results = audit_tx_set(chain, c_txs, pools_or_active(chain, w, pools), w, alpha, in.jobs);
  return report::diff_tests_csv(results, precision);
}

SelfInterestMode parse_mode(const std::string& m) {
  if (m == "both") return SelfInterestMode::kBoth;
  if (m == "spends") return SelfInterestMode::kSpends;
  if (m == "receipts") return SelfInterestMode::kReceipts;
  throw UsageError("--mode must be both, spends or receipts");
}

struct OwnedResult {
  std::string owner;
  DiffTestResult result;
};

std::vector<OwnedResult> self_interest_results(const ChainData& chain, HeightRange w, std::vector<std::string> owners,
                                               SelfInterestMode mode, double alpha, unsigned jobs) {
  if (owners.empty()) owners = named_pools(chain);
  const auto testers = pools_or_active(chain, w, {});
  std::vector<OwnedResult> out;
  for (const auto& owner : owners) {
    const auto c_txs = self_interest_txs(chain, chain.directory(), owner, mode);
    if (c_txs.empty() || testers.empty()) continue;
    std::vector<DiffTestResult> rows;
    try {
      rows = audit_tx_set(chain, c_txs, testers, w, alpha, jobs);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kNoCBlocks) throw;
      continue;  // none of the owner's transactions confirmed in the window
    }
    for (auto& r : rows) out.push_back({owner, std::move(r)});
  }
  return out;
}

std::string run_selfinterest(const Inputs& in, const std::vector<std::string>& owners, const std::string& mode,
                             double alpha, int precision) {
  const auto m = parse_mode(mode);
  const auto chain = load(in);
  const auto rows = self_interest_results(chain, window_of(chain, in), owners, m, alpha, in.jobs);
  std::ostringstream s;
  s << "owner," << report::diff_tests_csv({}, precision);
  for (const auto& r : rows) {
    const auto line = report::diff_tests_csv(std::span(&r.result, 1), precision);
    s << report::csv_field(r.owner) << ',' << line.substr(line.find('\n') + 1);
  }
  return s.str();
}

Json darkfee_json(const ChainData& chain, const std::vector<std::string>& pools, const std::vector<double>& thresholds) {
  Json arr = Json::array();
  for (const auto& p : pools.empty() ? named_pools(chain) : pools) {
    for (const auto& b : darkfee_flags(chain, p, thresholds)) arr.push_back(report::to_json(b, p));
  }
  return arr;
}

std::string run_darkfee(const Inputs& in, const std::vector<std::string>& pools, const std::string& thresholds) {
  const auto t = parse_thresholds(thresholds);
  const auto chain = load(in);
  Json j;
  j["meta"] = meta(in, "darkfee");
  j["darkfee"] = darkfee_json(chain, pools, t);
  return dump(j);
}

CongestionReport congestion_of(const ChainData& chain, std::int64_t interval, std::int64_t capacity,
                               const std::string& snapshot_file) {
  SnapshotSeries series;
  if (!snapshot_file.empty()) {
    std::ifstream f(snapshot_file);
    if (!f) throw Error(ErrorKind::kIo, "cannot open " + snapshot_file);
    series = read_snapshots(f, chain);
  }
  return congestion_report(chain, series, interval, capacity);
}

std::string run_congestion(const Inputs& in, std::int64_t interval, std::int64_t capacity,
                           const std::string& snapshot_file) {
  if (interval <= 0 || capacity <= 0) throw UsageError("--interval and --capacity must be positive");
  const auto chain = load(in);
  Json j;
  j["meta"] = meta(in, "congestion");
  j["congestion"] = report::to_json(congestion_of(chain, interval, capacity, snapshot_file));
  return dump(j);
}

std::string run_feeshare(const Inputs& in) {
  const auto chain = load(in);
  return report::fee_share_csv(fee_revenue_share(chain, window_of(chain, in)));
}

std::string run_simulate(const std::string& config_path, const std::string& out_dir) {
  std::ifstream f(config_path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + config_path);
  std::stringstream buf;
  buf << f.rdbuf();
  const auto config = sim::parse_config(buf.str());
  const auto output = sim::generate(config);
  sim::write_output(output, out_dir);
  std::ostringstream s;
  s << "wrote " << output.chain.txs().size() << " transactions and " << output.chain.block_count()
    << " blocks to " << out_dir << '\n';
  return s.str();
}

std::string run_replay(const Inputs& in, const std::string& truth_path) {
  const auto chain = load(in);
  std::ifstream f(truth_path);
  if (!f) throw Error(ErrorKind::kIo, "cannot open " + truth_path);
  const auto truth = sim::read_ground_truth(f);
  const auto r = sim::replay_check(chain, truth);
  return "replay ok: " + std::to_string(r.blocks_checked) + " blocks match\n";
}

struct ReportArgs {
  ViolationArgs violations;
  std::string txset;
  std::vector<std::string> pools;
  std::string thresholds = "100,99,90,50,1";
  std::string mode = "both";
  double alpha = 0.01;
  std::int64_t interval = 15;
  std::int64_t capacity = 1'000'000;
};

std::string run_report(const Inputs& in, const ReportArgs& a) {
  if (!a.violations.seed && a.violations.snapshot_file.empty()) throw UsageError("report requires --seed");
  const auto thresholds = parse_thresholds(a.thresholds);
  const auto mode = parse_mode(a.mode);
  const auto chain = load(in);
  const auto w = window_of(chain, in);
  const auto heights = heights_in(chain, w);

  Json j;
  j["meta"] = meta(in, "report");
  j["baseline"] = Json::array();
  for (const auto& r : baseline_reports(chain, heights, in.jobs)) j["baseline"].push_back(report::to_json(r, chain));
  j["positions"] = Json::array();
  for (const auto& s : position_stats_all(chain, in.jobs, false)) {
    if (w.contains(s.height)) j["positions"].push_back(report::to_json(s));
  }
  j["violations"] = Json::array();
  for (const auto& v : violations_of(chain, a.violations)) j["violations"].push_back(report::to_json(v));
  j["diff_tests"] = Json::array();
  if (!a.txset.empty()) {
    const auto c_txs = resolve_txset(chain, a.txset);
    for (const auto& r : audit_tx_set(chain, c_txs, pools_or_active(chain, w, a.pools), w, a.alpha, in.jobs)) {
      auto row = report::to_json(r);
      row["tx_set"] = a.txset;
      j["diff_tests"].push_back(std::move(row));
    }
  } else {
    for (const auto& r : self_interest_results(chain, w, a.pools, mode, a.alpha, in.jobs)) {
      auto row = report::to_json(r.result);
      row["tx_set"] = "self_interest:" + r.owner;
      j["diff_tests"].push_back(std::move(row));
    }
  }
  j["darkfee"] = darkfee_json(chain, a.pools, thresholds);
  j["congestion"] = report::to_json(congestion_of(chain, a.interval, a.capacity, a.violations.snapshot_file));
  return dump(j);
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audit transaction prioritization in mined blocks against the fee-rate norm", "chain-audit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  Inputs in;
  std::optional<unsigned> jobs;
  app.add_option("--data-dir", in.data_dir, "Directory holding transactions.jsonl, blocks.jsonl, pools.json");
  app.add_option("--txs", in.txs, "Transactions JSONL file");
  app.add_option("--blocks", in.blocks, "Blocks JSONL file");
  app.add_option("--pools", in.pools, "Pool marker config (JSON)");
  app.add_option("--out,-o", in.out, "Write the report here instead of standard output");
  app.add_option("--jobs,-j", jobs, "Worker threads (default: $CHAIN_AUDIT_JOBS or 1)")->check(CLI::PositiveNumber);
  app.add_flag("--no-meta", in.no_meta, "Omit the timestamp from report metadata");
  app.add_option("--from", in.from, "First height of the analysis window");
  app.add_option("--to", in.to, "Last height of the analysis window");

  std::function<std::string()> action;

  auto* ingest = app.add_subcommand("ingest-check", "Validate inputs and summarize the chain");
  ingest->callback([&] { action = [&] { return run_ingest_check(in); }; });

  bool baseline_csv = false;
  auto* baseline = app.add_subcommand("baseline", "Compare each block with its norm-built baseline");
  baseline->add_flag("--csv", baseline_csv, "One CSV row per block instead of JSON");
  baseline->callback([&] { action = [&] { return run_baseline(in, baseline_csv); }; });

  bool per_tx = false;
  auto* positions = app.add_subcommand("positions", "Position prediction error (PPE) per block");
  positions->add_flag("--per-tx", per_tx, "JSON with the signed error of every transaction");
  positions->callback([&] { action = [&] { return run_positions(in, per_tx); }; });

  ViolationArgs va;
  auto* violations = app.add_subcommand("violations", "Count fee-rate ordering violations in mempool snapshots");
  violations->add_option("--epsilon", va.epsilon, "Arrival gap in seconds")->check(CLI::NonNegativeNumber);
  violations->add_option("--snapshots", va.snapshots, "Number of sampled snapshots");
  violations->add_option("--seed", va.seed, "Seed for snapshot sampling");
  violations->add_flag("--exclude-cpfp", va.exclude_cpfp, "Skip transactions that are CPFP in their block");
  violations->add_option("--snapshot-file", va.snapshot_file, "Explicit snapshots (JSONL of time and txids)");
  violations->callback([&] { action = [&] { return run_violations(in, va); }; });

  std::vector<std::string> dt_pools;
  std::string txset;
  double alpha = 0.01;
  int precision = 4;
  auto* difftest = app.add_subcommand("difftest", "Binomial differential-prioritization test of a transaction set");
  difftest->add_option("--pool", dt_pools, "Pool to test (repeatable; default: every active pool)");
  difftest->add_option("--txset", txset, "File with one txid per line")->required();
  difftest->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  difftest->add_option("--precision", precision, "Decimal places in the CSV")->check(CLI::Range(0, 17));
  difftest->callback([&] { action = [&] { return run_difftest(in, dt_pools, txset, alpha, precision); }; });

  std::vector<std::string> si_pools;
  std::string si_mode = "both";
  auto* selfinterest = app.add_subcommand("selfinterest", "Test every pool on the transactions touching its wallets");
  selfinterest->add_option("--pool", si_pools, "Wallet owner (repeatable; default: every named pool)");
  selfinterest->add_option("--mode", si_mode, "both, spends or receipts");
  selfinterest->add_option("--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  selfinterest->add_option("--precision", precision, "Decimal places in the CSV")->check(CLI::Range(0, 17));
  selfinterest->callback([&] { action = [&] { return run_selfinterest(in, si_pools, si_mode, alpha, precision); }; });

  std::vector<std::string> df_pools;
  std::string thresholds = "100,99,90,50,1";
  auto* darkfee = app.add_subcommand("darkfee", "Flag transactions placed far above their fee-rate merit");
  darkfee->add_option("--pool", df_pools, "Pool to scan (repeatable; default: every named pool)");
  darkfee->add_option("--thresholds", thresholds, "Comma-separated SPPE thresholds");
  darkfee->callback([&] { action = [&] { return run_darkfee(in, df_pools, thresholds); }; });

  std::int64_t interval = 15;
  std::int64_t capacity = 1'000'000;
  std::string cong_snapshots;
  auto* congestion = app.add_subcommand("congestion", "Mempool congestion and delay distributions");
  congestion->add_option("--interval", interval, "Sampling interval of the derived series, seconds");
  congestion->add_option("--capacity", capacity, "Block capacity in vbytes");
  congestion->add_option("--snapshot-file", cong_snapshots, "Explicit snapshot series (JSONL)");
  congestion->callback([&] { action = [&] { return run_congestion(in, interval, capacity, cong_snapshots); }; });

  auto* feeshare = app.add_subcommand("feeshare", "Fee share of miner revenue per block");
  feeshare->callback([&] { action = [&] { return run_feeshare(in); }; });

  std::string config_path;
  std::string out_dir;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic chain with ground truth");
  simulate->add_option("--config", config_path, "Simulator config (JSON)")->required();
  simulate->add_option("--out-dir", out_dir, "Output directory")->required();
  simulate->callback([&] { action = [&] { return run_simulate(config_path, out_dir); }; });

  std::string truth_path;
  auto* replay = app.add_subcommand("replay", "Check candidate sets against simulator ground truth");
  replay->add_option("--truth", truth_path, "ground_truth.jsonl from simulate")->required();
  replay->callback([&] { action = [&] { return run_replay(in, truth_path); }; });

  ReportArgs ra;
  auto* bundle = app.add_subcommand("report", "Full JSON report bundle");
  bundle->add_option("--seed", ra.violations.seed, "Seed for snapshot sampling");
  bundle->add_option("--snapshots", ra.violations.snapshots, "Number of sampled snapshots");
  bundle->add_option("--epsilon", ra.violations.epsilon, "Arrival gap in seconds")->check(CLI::NonNegativeNumber);
  bundle->add_flag("--exclude-cpfp", ra.violations.exclude_cpfp, "Skip CPFP transactions in violation counts");
  bundle->add_option("--snapshot-file", ra.violations.snapshot_file, "Explicit snapshot series (JSONL)");
  bundle->add_option("--txset", ra.txset, "Audit this set instead of the pools' self-interest sets");
  bundle->add_option("--pool", ra.pools, "Restrict pools (repeatable)");
  bundle->add_option("--thresholds", ra.thresholds, "Comma-separated SPPE thresholds");
  bundle->add_option("--mode", ra.mode, "Self-interest mode: both, spends or receipts");
  bundle->add_option("--alpha", ra.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  bundle->add_option("--interval", ra.interval, "Congestion sampling interval, seconds");
  bundle->add_option("--capacity", ra.capacity, "Block capacity in vbytes");
  bundle->callback([&] { action = [&] { return run_report(in, ra); }; });

  try {
    std::vector<std::string> argv(args.rbegin(), args.rend());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "chain-audit: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    in.jobs = jobs ? *jobs : default_jobs();
    emit(in, out, action());
    return kExitOk;
  } catch (const UsageError& e) {
    err << "chain-audit: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "chain-audit: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "chain-audit: " << e.what() << '\n';
    return kExitDataError;
  }
}

}  // namespace chainaudit::cli
