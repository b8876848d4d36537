// Copyright 2026 The ssmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ssmatch/report.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "ssmatch/harness.hpp"
#include "test_support.hpp"

namespace ssmatch {
namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ssmatch_report_" + name)).string();
}

TEST(RunReport, JsonRoundTrip) {
  RunReport r;
  r.command = "ssmatch run g.txt ensemble";
  r.variant = "ensemble";
  r.gamma = 3.513;
  r.epsilon = 0.5;
  r.delta = 3.0 / 14.0;
  r.q = 14;
  r.best_copy = 3;
  r.seed = 18446744073709551615ull;
  r.stream_path = "g.txt";
  r.stream_hash = "0123456789abcdef";
  r.num_vertices = 12;
  r.num_edges = 30;
  r.file_passes = 1;
  r.edges_read_per_copy = 30;
  r.matching = {{0, 1, 0.1 + 0.2}, {2, 3, 1e-300}};
  r.weight = 0.1 + 0.2 + 1e-300;
  r.stored_edge_peak = 9;
  r.opt_weight = 7.0 / 3.0;
  r.ratio = 1.0 / 3.0;
  r.certificate = Json{{"chain_holds", true}};
  r.wall_time_ms = 0.25;
  const std::string text = to_json(r).dump();
  EXPECT_EQ(run_report_from_json(Json::parse(text)), r);

  RunReport bare;
  bare.command = "x";
  bare.variant = "deterministic";
  EXPECT_EQ(run_report_from_json(Json::parse(to_json(bare).dump())), bare);
  EXPECT_THROW(run_report_from_json(Json::parse("{}")), ValidationError);
}

TEST(CmdRun, TightFileDeterministic) {
  const std::string path = temp_path("tight.txt");
  write_edge_stream_file(path, tight_instance(TightExampleConfig{2.0, 3, 1e-6}));
  RunOptions opt;
  opt.stream_path = path;
  opt.gamma = 2.0;
  opt.epsilon = 0.01;
  opt.oracle = true;
  opt.certificate = true;
  const RunReport r = cmd_run(opt);
  EXPECT_EQ(r.weight, 8.0);
  EXPECT_EQ(r.file_passes, 1u);
  EXPECT_EQ(r.edges_read_per_copy, 15u);
  ASSERT_TRUE(r.ratio);
  EXPECT_NEAR(*r.ratio, tight_instance_opt(TightExampleConfig{2.0, 3, 1e-6}) / 8.0, 1e-12);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(r.certificate->at("chain_holds").get<bool>());
  EXPECT_EQ(run_report_from_json(Json::parse(to_json(r).dump())), r);
  std::filesystem::remove(path);
}

TEST(CmdRun, EnsembleChoosesQ) {
  const std::string path = temp_path("g.txt");
  write_edge_stream_file(path, random_instance(RandomInstanceConfig{12, 30, UniformLaw{1, 100}, 7}));
  RunOptions opt;
  opt.stream_path = path;
  opt.variant = Variant::ensemble;
  opt.gamma = 3.513;
  opt.epsilon = 0.5;
  const RunReport seq = cmd_run(opt);
  EXPECT_EQ(seq.q, 14);
  opt.parallel = true;
  const RunReport par = cmd_run(opt);
  EXPECT_EQ(par.matching, seq.matching);
  EXPECT_EQ(par.best_copy, seq.best_copy);
  std::filesystem::remove(path);
}

// A report carries what is needed to rerun it: same inputs, same matching.
TEST(CmdRun, ReproducibleFromReport) {
  const std::string path = temp_path("repro.txt");
  write_edge_stream_file(path, random_instance(RandomInstanceConfig{30, 200, ExpClassesLaw{2, 8}, 4}));
  RunOptions opt;
  opt.stream_path = path;
  opt.variant = Variant::shifted;
  opt.seed = 77;
  opt.permute_seed = 5;
  const RunReport first = cmd_run(opt);
  const RunReport parsed = run_report_from_json(Json::parse(to_json(first).dump()));
  RunOptions again;
  again.stream_path = parsed.stream_path;
  again.variant = parse_variant(parsed.variant);
  again.gamma = parsed.gamma;
  again.epsilon = parsed.epsilon;
  again.seed = parsed.seed;
  again.permute_seed = parsed.permute_seed;
  const RunReport second = cmd_run(again);
  EXPECT_EQ(second.stream_hash, first.stream_hash);
  EXPECT_EQ(second.delta, first.delta);
  EXPECT_EQ(second.matching, first.matching);
  std::filesystem::remove(path);
}

TEST(CmdRun, Errors) {
  RunOptions opt;
  opt.stream_path = "/nonexistent/x.txt";
  EXPECT_THROW(cmd_run(opt), IoError);
  const std::string path = temp_path("big.txt");
  write_edge_stream_file(path, random_instance(RandomInstanceConfig{40, 100, UniformLaw{1, 2}, 1}));
  opt.stream_path = path;
  opt.oracle = true;
  EXPECT_THROW(cmd_run(opt), InstanceTooLarge);
  std::filesystem::remove(path);
}

TEST(CmdSweep, HeaderOnlyWithoutSeeds) {
  SweepOptions opt;
  std::ostringstream csv;
  EXPECT_TRUE(cmd_sweep(opt, csv).empty());
  EXPECT_EQ(csv.str(), std::string(kSweepHeader) + "\n");
}

TEST(CmdSweep, RatiosWithinBounds) {
  SweepOptions opt;
  opt.seeds = {1, 2, 3, 4};
  opt.jobs = 3;
  std::ostringstream csv;
  std::ostringstream jsonl;
  const auto rows = cmd_sweep(opt, csv, &jsonl);
  ASSERT_EQ(rows.size(), opt.gammas.size() * opt.seeds.size() * 2);
  double best_bound = 1e9;
  double best_gamma = 0;
  for (const SweepRow& r : rows) {
    ASSERT_TRUE(r.ratio);
    EXPECT_LE(*r.ratio, r.bound + opt.epsilon);
    if (r.randomized_bound < best_bound) {
      best_bound = r.randomized_bound;
      best_gamma = r.gamma;
    }
  }
  EXPECT_EQ(best_gamma, 3.513);
  EXPECT_NEAR(best_bound, 4.9108, 1e-3);
  std::istringstream lines(jsonl.str());
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    EXPECT_NO_THROW(Json::parse(line));
    ++count;
  }
  EXPECT_EQ(count, rows.size());

  std::ostringstream serial;
  opt.jobs = 1;
  cmd_sweep(opt, serial);
  EXPECT_EQ(serial.str(), csv.str());
}

TEST(CmdSweep, BlankRatioAboveOracleLimit) {
  SweepOptions opt;
  opt.seeds = {1};
  opt.gammas = {2.0};
  opt.n = 40;
  opt.m = 100;
  std::ostringstream csv;
  const auto rows = cmd_sweep(opt, csv);
  for (const SweepRow& r : rows) {
    EXPECT_FALSE(r.opt_weight);
    EXPECT_FALSE(r.ratio);
  }
  EXPECT_NE(csv.str().find(",,,"), std::string::npos);
}

TEST(CmdAdversary, JsonAndTranscript) {
  AdversaryOptions opt;
  opt.victim = "threshold:1";
  opt.C = 4.9;
  opt.transcript_path = temp_path("transcript.jsonl");
  const Json j = cmd_adversary(opt);
  EXPECT_GE(j.at("achieved_ratio").get<double>(), 4.9 * (1 - 1e-9));
  std::ifstream in(opt.transcript_path);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    const Json rec = Json::parse(line);
    EXPECT_TRUE(rec.contains("label"));
    EXPECT_TRUE(rec.contains("held_after"));
    ++count;
  }
  EXPECT_EQ(count, j.at("edges_presented").get<std::size_t>());
  std::filesystem::remove(opt.transcript_path);

  opt.victim = "nobody";
  EXPECT_THROW(cmd_adversary(opt), ValidationError);
}

TEST(CmdVerifySequences, Ok) {
  const Json j = cmd_verify_sequences(4.9);
  EXPECT_TRUE(j.at("ok").get<bool>());
  EXPECT_EQ(j.at("n").get<std::size_t>(), 35u);
}

TEST(DefaultSeed, ReadsEnvironment) {
  ::setenv(kSeedEnv, "42", 1);
  EXPECT_EQ(default_seed(), 42u);
  ::setenv(kSeedEnv, "x", 1);
  EXPECT_THROW(default_seed(), ValidationError);
  ::unsetenv(kSeedEnv);
  EXPECT_EQ(default_seed(9), 9u);
}

}  // namespace
}  // namespace ssmatch
