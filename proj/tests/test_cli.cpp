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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "chainaudit/cli.hpp"
#include "chainaudit/sim.hpp"

#include <json.hpp>

namespace {

using namespace chainaudit;
namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "chain_audit_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
    sim::SimConfig cfg;
    cfg.seed = 55;
    cfg.pools = {{"Alpha", 0.6}, {"Beta", 0.4}};
    cfg.blocks = 40;
    cfg.tx_rate = 0.2;
    cfg.cpfp_rate = 0.05;
    cfg.deviations.push_back({.kind = sim::DeviationSpec::Kind::kSelfInterestAccel,
                              .pools = {"Beta"},
                              .rate = 0.01,
                              .target_fee_rate = 2.0});
    const auto out = sim::generate(cfg);
    sim::write_output(out, root_ / "chain");
    std::ofstream cfg_file(root_ / "config.json");
    cfg_file << sim::encode_config(cfg);
    std::ofstream txset(root_ / "txset.txt");
    for (const auto& id : out.truth.labelled("self_interest:Beta")) txset << id << '\n';
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string data() { return (root_ / "chain").string(); }
  static fs::path root_;
};

fs::path CliTest::root_;

TEST_F(CliTest, UsageErrors) {
  const auto unknown = run({"no-such-command"});
  EXPECT_EQ(unknown.code, cli::kExitUsage);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--data-dir", data(), "violations"}).code, cli::kExitUsage);  // no --seed
  EXPECT_EQ(run({"--data-dir", data(), "report"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--data-dir", data(), "difftest"}).code, cli::kExitUsage);  // --txset required
  EXPECT_EQ(run({"--data-dir", data(), "selfinterest", "--mode", "sideways"}).code, cli::kExitUsage);
  EXPECT_EQ(run({"--jobs", "0", "--data-dir", data(), "feeshare"}).code, cli::kExitUsage);
}

TEST_F(CliTest, HelpAndVersion) {
  const auto help = run({"--help"});
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_NE(help.out.find("difftest"), std::string::npos);
  const auto sub = run({"violations", "--help"});
  EXPECT_EQ(sub.code, cli::kExitOk);
  EXPECT_NE(sub.out.find("--epsilon"), std::string::npos);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, cli::kExitOk);
  EXPECT_EQ(v.out, "0.1.0\n");
}

TEST_F(CliTest, DataErrors) {
  EXPECT_EQ(run({"--data-dir", (root_ / "missing").string(), "ingest-check"}).code, cli::kExitDataError);
  std::ofstream bad(root_ / "bad_txset.txt");
  bad << std::string(64, 'f') << '\n';
  bad.close();
  const auto r = run({"--data-dir", data(), "difftest", "--txset", (root_ / "bad_txset.txt").string()});
  EXPECT_EQ(r.code, cli::kExitDataError);
  EXPECT_NE(r.err.find("DanglingTxid"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("1 txid(s)"), std::string::npos) << r.err;
}

TEST_F(CliTest, IngestCheckSummary) {
  const auto r = run({"--data-dir", data(), "--no-meta", "ingest-check"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["blocks"], 40);
  EXPECT_EQ(j["first_height"], 0);
  EXPECT_EQ(j["meta"]["command"], "ingest-check");
  EXPECT_FALSE(j["meta"].contains("generated_at"));
  EXPECT_TRUE(Json::parse(run({"--data-dir", data(), "ingest-check"}).out)["meta"].contains("generated_at"));
}

TEST_F(CliTest, SimulateThenBaselineOverlapsFully) {
  auto cfg = sim::parse_config(slurp(root_ / "config.json"));
  cfg.deviations.clear();
  // packages shift the greedy cut, so exact agreement needs a CPFP-free chain
  cfg.cpfp_rate = 0.0;
  {
    std::ofstream f(root_ / "null.json");
    f << sim::encode_config(cfg);
  }
  const auto dir = (root_ / "null").string();
  const auto sim_run = run({"simulate", "--config", (root_ / "null.json").string(), "--out-dir", dir});
  ASSERT_EQ(sim_run.code, cli::kExitOk) << sim_run.err;
  const auto r = run({"--data-dir", dir, "baseline"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = Json::parse(r.out);
  ASSERT_EQ(j["baseline"].size(), 40u);
  for (const auto& b : j["baseline"]) EXPECT_EQ(b["overlap_ratio"].get<double>(), 1.0) << b["height"];
  const auto csv = run({"--data-dir", dir, "baseline", "--csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')),
            "height,capacity_vbytes,actual,baseline,overlap_ratio,overlap_ratio_vbytes,ignored_fraction,"
            "never_observed_fraction");
  const auto replay = run({"--data-dir", dir, "replay", "--truth", dir + "/ground_truth.jsonl"});
  EXPECT_EQ(replay.code, cli::kExitOk) << replay.err;
}

TEST_F(CliTest, DifftestCsvMatchesTableLayout) {
  const auto r = run({"--data-dir", data(), "difftest", "--pool", "Beta", "--txset", (root_ / "txset.txt").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string header, row, extra;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "pool,theta0,x,y,p_accel,p_decel,sppe");
  EXPECT_TRUE(std::regex_match(row, std::regex(R"(Beta,0\.\d{4},\d+,\d+,[01]\.\d{4},[01]\.\d{4},-?\d+\.\d{4})"))) << row;
  EXPECT_FALSE(std::getline(lines, extra));

  const auto all = run({"--data-dir", data(), "difftest", "--txset", (root_ / "txset.txt").string()});
  EXPECT_EQ(std::count(all.out.begin(), all.out.end(), '\n'), 3);  // header plus both pools

  const auto si = run({"--data-dir", data(), "selfinterest", "--pool", "Beta"});
  ASSERT_EQ(si.code, cli::kExitOk) << si.err;
  EXPECT_EQ(si.out.substr(0, si.out.find('\n')), "owner,pool,theta0,x,y,p_accel,p_decel,sppe");
}

TEST_F(CliTest, OtherSubcommands) {
  const auto pos = run({"--data-dir", data(), "positions"});
  ASSERT_EQ(pos.code, cli::kExitOk) << pos.err;
  EXPECT_EQ(pos.out.substr(0, 13), "height,n,ppe\n");
  const auto per = run({"--data-dir", data(), "--from", "3", "--to", "5", "positions", "--per-tx"});
  ASSERT_EQ(per.code, cli::kExitOk) << per.err;
  EXPECT_EQ(Json::parse(per.out)["positions"].size(), 3u);
  const auto vio = run({"--data-dir", data(), "violations", "--seed", "1", "--snapshots", "5", "--epsilon", "10"});
  ASSERT_EQ(vio.code, cli::kExitOk) << vio.err;
  EXPECT_EQ(std::count(vio.out.begin(), vio.out.end(), '\n'), 6);
  const auto dark = run({"--data-dir", data(), "darkfee", "--pool", "Alpha", "--thresholds", "99,50"});
  ASSERT_EQ(dark.code, cli::kExitOk) << dark.err;
  EXPECT_EQ(Json::parse(dark.out)["darkfee"].size(), 2u);
  EXPECT_EQ(run({"--data-dir", data(), "darkfee", "--thresholds", "x"}).code, cli::kExitUsage);
  const auto cong = run({"--data-dir", data(), "congestion", "--interval", "60"});
  ASSERT_EQ(cong.code, cli::kExitOk) << cong.err;
  EXPECT_EQ(Json::parse(cong.out)["congestion"]["interval_seconds"], 60);
  const auto fee = run({"--data-dir", data(), "feeshare"});
  ASSERT_EQ(fee.code, cli::kExitOk) << fee.err;
  EXPECT_NE(fee.out.find("\naggregate,,,"), std::string::npos);
}

TEST_F(CliTest, ReportIsByteIdenticalAcrossRunsAndJobs) {
  const std::vector<std::string> base{"--data-dir", data(), "--no-meta", "report", "--seed", "3"};
  auto with_jobs = [&](const std::string& j) {
    auto args = base;
    args.insert(args.begin(), {"--jobs", j});
    return run(args);
  };
  const auto a = with_jobs("1");
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(with_jobs("1").out, a.out);
  EXPECT_EQ(with_jobs("4").out, a.out);
  const auto j = Json::parse(a.out);
  for (const char* key : {"meta", "baseline", "positions", "violations", "diff_tests", "darkfee", "congestion"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  bool beta_tested = false;
  for (const auto& row : j["diff_tests"]) beta_tested |= row["tx_set"] == "self_interest:Beta";
  EXPECT_TRUE(beta_tested);

  const auto file = (root_ / "report.json").string();
  const auto to_file = run({"--data-dir", data(), "--no-meta", "--out", file, "report", "--seed", "3"});
  ASSERT_EQ(to_file.code, cli::kExitOk);
  EXPECT_TRUE(to_file.out.empty());
  EXPECT_EQ(slurp(file), a.out);
}

TEST_F(CliTest, JobsFromEnvironment) {
  ::setenv("CHAIN_AUDIT_JOBS", "3", 1);
  const auto r = run({"--data-dir", data(), "--no-meta", "baseline"});
  ::unsetenv("CHAIN_AUDIT_JOBS");
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_EQ(r.out, run({"--data-dir", data(), "--no-meta", "baseline"}).out);
}

}  // namespace
