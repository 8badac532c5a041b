/*
 * Copyright 2026 The Cascade Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Drives the built command-line tool end to end.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

Outcome RunCli(const std::string& args) {
  const std::string command =
      std::string("'") + CASCADE_CLI_PATH + "' " + args + " 2>&1";
  Outcome outcome;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return outcome;
  std::array<char, 4096> buffer;
  size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    outcome.output.append(buffer.data(), n);
  }
  const int raw = pclose(pipe);
  outcome.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return outcome;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("cascade_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const {
    return "'" + (dir_ / name).string() + "'";
  }

  void Spit(const std::string& name, const std::string& text) const {
    std::ofstream out(dir_ / name);
    out << text;
  }

  fs::path dir_;
};

TEST_F(CliTest, WienerOfSingleEdge) {
  Spit("two.jsonl",
       "{\"cascade_id\":\"c\",\"node_id\":\"r\",\"timestamp\":0}\n"
       "{\"cascade_id\":\"c\",\"node_id\":\"a\",\"parent_id\":\"r\","
       "\"timestamp\":1}\n");
  const Outcome out = RunCli("wiener --in " + Path("two.jsonl"));
  EXPECT_EQ(out.status, 0) << out.output;
  EXPECT_EQ(out.output, "c\t1\n");
}

TEST_F(CliTest, MissingInputNamesPath) {
  const Outcome out = RunCli("wiener --in " + Path("absent.jsonl"));
  EXPECT_NE(out.status, 0);
  EXPECT_NE(out.output.find("absent.jsonl"), std::string::npos) << out.output;
}

TEST_F(CliTest, MalformedInputFails) {
  Spit("bad.jsonl", "{\"cascade_id\":\"c\",\"node_id\":\"r\",\"timestamp\":0}\n"
                    "{\"cascade_id\":\"c\",\"node_id\":\"a\","
                    "\"parent_id\":\"q\",\"timestamp\":1}\n");
  const Outcome out = RunCli("wiener --in " + Path("bad.jsonl"));
  EXPECT_EQ(out.status, 1);
  EXPECT_NE(out.output.find("DanglingParent"), std::string::npos) << out.output;
}

TEST_F(CliTest, HelpOnEverySubcommand) {
  for (const char* cmd :
       {"", "generate", "featurize", "label", "train", "evaluate",
        "rank-features", "wiener", "stats", "stats fit-alpha", "stats gini",
        "stats median", "report", "run"}) {
    const Outcome out = RunCli(std::string(cmd) + " --help");
    EXPECT_EQ(out.status, 0) << cmd << "\n" << out.output;
    EXPECT_NE(out.output.find("Usage"), std::string::npos) << cmd;
  }
}

TEST_F(CliTest, UnknownSubcommandFails) {
  EXPECT_NE(RunCli("frobnicate").status, 0);
  EXPECT_NE(RunCli("").status, 0);
}

TEST_F(CliTest, Stats) {
  Spit("x.txt", "2\n4\n8\n");
  Outcome out = RunCli("stats gini --in " + Path("x.txt"));
  EXPECT_EQ(out.status, 0) << out.output;
  EXPECT_NEAR(std::stod(out.output), 2.0 / 7.0, 1e-12);

  out = RunCli("stats median --alpha 2 --xmin 5");
  EXPECT_EQ(out.status, 0) << out.output;
  EXPECT_EQ(std::stod(out.output), 10.0);

  out = RunCli("stats fit-alpha --xmin 1 --in " + Path("x.txt"));
  EXPECT_EQ(out.status, 0) << out.output;
  EXPECT_GT(std::stod(out.output), 1.0);

  out = RunCli("stats median --alpha 1 --xmin 5");
  EXPECT_EQ(out.status, 1);
  EXPECT_NE(out.output.find("AlphaOutOfRange"), std::string::npos);
}

TEST_F(CliTest, GenerateThroughEvaluate) {
  Spit("params.txt",
       "n_nodes = 2000\nn_cascades = 800\nmax_size = 300\nseed = 6\n");
  Outcome out = RunCli("generate --params " + Path("params.txt") +
                    " --out-events " + Path("e.jsonl") + " --out-graph " +
                    Path("g.edges") + " --out-content " + Path("c.jsonl"));
  ASSERT_EQ(out.status, 0) << out.output;

  const std::string data = " --in " + Path("e.jsonl") + " --graph " +
                           Path("g.edges") + " --content " + Path("c.jsonl");
  out = RunCli("featurize --k 5" + data + " --out " + Path("f.csv"));
  ASSERT_EQ(out.status, 0) << out.output;
  EXPECT_TRUE(fs::exists(dir_ / "f.csv"));

  out = RunCli("label growth --k 5" + data + " --out " + Path("l.csv"));
  ASSERT_EQ(out.status, 0) << out.output;

  out = RunCli("--threads 2 train --folds 5 --in " + Path("l.csv") +
            " --model-out " + Path("m.txt"));
  ASSERT_EQ(out.status, 0) << out.output;
  EXPECT_NE(out.output.find("accuracy"), std::string::npos) << out.output;
  EXPECT_TRUE(fs::exists(dir_ / "m.txt"));

  out = RunCli("evaluate --in " + Path("l.csv") + " --model " + Path("m.txt"));
  ASSERT_EQ(out.status, 0) << out.output;
  EXPECT_NE(out.output.find("auc"), std::string::npos) << out.output;

  out = RunCli("rank-features --folds 3 --in " + Path("l.csv") + " --out " +
            Path("rank.csv"));
  ASSERT_EQ(out.status, 0) << out.output;
  std::ifstream rank(dir_ / "rank.csv");
  std::string header;
  std::getline(rank, header);
  EXPECT_EQ(header, "rank,feature,accuracy,pearson_log_size");
}

TEST_F(CliTest, RunWritesManifest) {
  Spit("run.cfg",
       "seed = 2\nk = 5\nfolds = 3\nsynth.n_nodes = 1500\n"
       "synth.n_cascades = 400\nsynth.max_size = 200\n");
  const Outcome out =
      RunCli("--out-dir " + Path("out") + " run --config " + Path("run.cfg"));
  ASSERT_EQ(out.status, 0) << out.output;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "manifest.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "metrics.txt"));

  Spit("bad.cfg", "k = 5\nwhatever = 1\n");
  const Outcome bad =
      RunCli("--out-dir " + Path("out2") + " run --config " + Path("bad.cfg"));
  EXPECT_EQ(bad.status, 1);
  EXPECT_NE(bad.output.find("whatever"), std::string::npos) << bad.output;
}

}  // namespace
