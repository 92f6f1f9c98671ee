// Copyright 2026 The oralread Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/pipeline.hpp"
#include "fixture.hpp"

namespace oralread {
namespace {

using nlohmann::json;
using testing::ReadFile;
using testing::ReadTree;
using testing::TempDir;
using testing::WriteFile;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

constexpr const char* kCorpus = R"({
  "version": 1,
  "records": [
    {"id": "a", "prompt": "de grote kat zit op de mat",
     "reference": {"text": "de grote kat zit op de mat"},
     "hypotheses": {"m1": {"text": "de groot kat zit de mat"},
                    "m2": {"text": "de grote kat zit op de mat"}}},
    {"id": "b", "prompt": "het huis is groot",
     "reference": {"text": "het woning is groot"},
     "hypotheses": {"m1": {"text": "het huis is groot"},
                    "m2": {"text": "het woning is erg groot"}}},
    {"id": "c", "prompt": "wij lopen naar school",
     "reference": {"text": "wij lo lopen naar school"},
     "hypotheses": {"m1": {"text": "wij lo lopen naar school"},
                    "m2": {"text": "wij lopen naar"}}}
  ]
})";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = dir_ / "corpus.json";
    emb_ = dir_ / "emb.txt";
    WriteFile(corpus_, kCorpus);
    WriteFile(emb_, testing::EmbeddingsText(testing::DutchLexicon()));
  }

  std::vector<std::string> Base(const std::string& cmd, const std::string& out = "out") {
    return {cmd, "--corpus", corpus_.string(), "--embeddings", emb_.string(), "--out",
            (dir_ / out).string()};
  }

  TempDir dir_;
  std::filesystem::path corpus_;
  std::filesystem::path emb_;
};

TEST_F(CliTest, MissingCorpusIsDataErrorNamingPath) {
  const auto missing = (dir_ / "nope.json").string();
  const CliRun r = Cli({"evaluate", "--corpus", missing, "--out", (dir_ / "o").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Cli({"evaluate", "--no-such-flag"}).code, 1);
  EXPECT_EQ(Cli({}).code, 1);
  EXPECT_EQ(Cli({"evaluate", "--corpus", corpus_.string(), "--missing-embeddings", "maybe"}).code,
            1);
  EXPECT_EQ(Cli({"--help"}).code, 0);
}

TEST_F(CliTest, CorpusWithoutHypothesesIsDataError) {
  WriteFile(corpus_, R"({"version": 1, "records": [
    {"id": "a", "prompt": "de kat", "reference": {"text": "de kat"}, "hypotheses": {}}]})");
  const CliRun r = Cli(Base("evaluate"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("hypotheses"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnsupportedAnalysisIsDataError) {
  auto args = Base("evaluate");
  args.insert(args.end(), {"--analyses", "attempts"});
  EXPECT_EQ(Cli(args).code, 2);
  args = Base("evaluate");
  args.insert(args.end(), {"--analyses", "per"});
  EXPECT_EQ(Cli(args).code, 2);
}

TEST_F(CliTest, MissingEmbeddings) {
  const std::vector<std::string> args = {"evaluate", "--corpus", corpus_.string(), "--out",
                                         (dir_ / "o").string()};
  EXPECT_EQ(Cli(args).code, 2);
  auto degrade = args;
  degrade.insert(degrade.end(), {"--missing-embeddings", "degrade"});
  const CliRun r = Cli(degrade);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "o" / "evaluate" / "report.json"));
}

TEST_F(CliTest, PerfectRecognitionYieldsEmptyErrorLists) {
  WriteFile(corpus_, R"({"version": 1, "records": [
    {"id": "a", "prompt": "de kat zit", "reference": {"text": "de kat zit"},
     "hypotheses": {"m": {"text": "De kat zit."}}}]})");
  const CliRun r = Cli(Base("detect"));
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(ReadFile(dir_ / "out" / "detect" / "a.m.json"));
  EXPECT_TRUE(doc["truth_errors"].empty());
  EXPECT_TRUE(doc["predicted_errors"].empty());
  EXPECT_EQ(doc["prompt_hypothesis"]["counts"]["match"], 3);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  for (const char* cmd : {"detect", "classify", "evaluate"}) {
    auto one = Base(cmd, "one");
    auto two = Base(cmd, "two");
    two.insert(two.end(), {"--jobs", "4"});
    ASSERT_EQ(Cli(one).code, 0) << cmd;
    ASSERT_EQ(Cli(two).code, 0) << cmd;
    const auto a = ReadTree(dir_ / "one" / cmd);
    const auto b = ReadTree(dir_ / "two" / cmd);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, b) << cmd;
  }
}

TEST_F(CliTest, EvaluateMicroAveragesOverRecords) {
  ASSERT_EQ(Cli(Base("detect")).code, 0);
  ASSERT_EQ(Cli(Base("evaluate")).code, 0);
  const json report = json::parse(ReadFile(dir_ / "out" / "evaluate" / "report.json"));
  EXPECT_EQ(report["averaging"], "micro");
  for (const auto& m : report["models"]) {
    const std::string model = m["model"];
    std::size_t predicted = 0, truth = 0, subs = 0, dels = 0, inss = 0, ref_len = 0;
    for (const char* id : {"a", "b", "c"}) {
      const json d = json::parse(
          ReadFile(dir_ / "out" / "detect" / (std::string(id) + "." + model + ".json")));
      predicted += d["predicted_errors"].size();
      truth += d["truth_errors"].size();
      (void)d;
    }
    EXPECT_EQ(m["predicted_errors"], predicted) << model;
    EXPECT_EQ(m["truth_errors"], truth) << model;
    const auto& wc = m["word_counts"];
    subs = wc["sub"];
    dels = wc["del"];
    inss = wc["ins"];
    ref_len = wc["ref_len"];
    EXPECT_DOUBLE_EQ(m["wer"].get<double>(),
                     static_cast<double>(subs + dels + inss) / static_cast<double>(ref_len));
    const auto& all = m["error_detection"]["all"];
    EXPECT_EQ(all["tp"].get<std::size_t>() + all["fp"].get<std::size_t>(), predicted);
    EXPECT_EQ(all["tp"].get<std::size_t>() + all["fn"].get<std::size_t>(), truth);
  }
}

TEST_F(CliTest, CategorySharesSumToHundred) {
  ASSERT_EQ(Cli(Base("evaluate")).code, 0);
  const json report = json::parse(ReadFile(dir_ / "out" / "evaluate" / "report.json"));
  for (const auto& m : report["models"]) {
    double sum = 0;
    for (const char* k : {"insertion", "substitution", "deletion"}) {
      sum += m["error_detection"][k]["share_percent"].get<double>();
    }
    EXPECT_NEAR(sum, 100.0, 1e-9);
  }
  std::map<EditKind, std::size_t> thirds = {
      {EditKind::kIns, 1}, {EditKind::kSub, 1}, {EditKind::kDel, 1}};
  const auto shares = cli::CategoryShares(thirds);
  double sum = 0;
  for (const auto& [k, v] : shares) sum += v;
  EXPECT_NEAR(sum, 100.0, 1e-9);
}

TEST_F(CliTest, ConfusionsTopK) {
  auto args = Base("confusions");
  args.insert(args.end(), {"--model", "m2", "--top-k", "1"});
  const CliRun r = Cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string tsv = ReadFile(dir_ / "out" / "confusions" / "m2.word.tsv");
  std::istringstream lines(tsv);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 2u) << tsv;
  EXPECT_EQ(tsv.rfind("Confusion pairs(C)\tCnum\tDeletion(D)\tDnum\tInsertion(I)\tInum\n", 0), 0u);

  args.insert(args.end(), {"--level", "phoneme"});
  EXPECT_EQ(Cli(args).code, 2);
}

TEST_F(CliTest, FailedRunLeavesNoPartialOutput) {
  ASSERT_EQ(Cli(Base("evaluate")).code, 0);
  const auto before = ReadTree(dir_ / "out" / "evaluate");
  auto args = Base("evaluate");
  args.insert(args.end(), {"--model", "ghost"});
  EXPECT_EQ(Cli(args).code, 2);
  EXPECT_FALSE(std::filesystem::exists(dir_ / "out" / ".evaluate.partial"));
  EXPECT_EQ(ReadTree(dir_ / "out" / "evaluate"), before);
}

TEST_F(CliTest, InjectThenClassifyRecoversTruth) {
  std::string records;
  for (int i = 0; i < 5; ++i) {
    if (i) records += ",";
    records += R"({"id": "p)" + std::to_string(i) + R"(", "prompt": ")" +
               testing::RandomPrompt(500 + i, 16).Joined() +
               R"(", "reference": {"text": ""}, "hypotheses": {}})";
  }
  WriteFile(corpus_, R"({"version": 1, "records": [)" + records + "]}");
  auto args = Base("inject");
  args.insert(args.end(), {"--inject", "SS=1,OS=1,O=1,D=1,I_m=1,restart=1", "--seed", "7"});
  const CliRun inj = Cli(args);
  ASSERT_EQ(inj.code, 0) << inj.err;

  const auto injected = dir_ / "out" / "inject" / "corpus.json";
  const json truth = json::parse(ReadFile(dir_ / "out" / "inject" / "truth.json"));
  const CliRun cls = Cli({"classify", "--corpus", injected.string(), "--embeddings",
                       emb_.string(), "--out", (dir_ / "cls").string()});
  ASSERT_EQ(cls.code, 0) << cls.err;

  std::size_t compared = 0;
  for (const auto& rec : truth["records"]) {
    const std::string id = rec["id"];
    const json doc = json::parse(ReadFile(dir_ / "cls" / "classify" / (id + ".injected.json")));
    ASSERT_EQ(doc["predicted"].size(), rec["truth"].size()) << id;
    for (std::size_t i = 0; i < rec["truth"].size(); ++i) {
      EXPECT_EQ(doc["predicted"][i]["label"], rec["truth"][i]["label"]) << id << " " << i;
      EXPECT_EQ(doc["predicted"][i]["location"], rec["truth"][i]["location"]) << id << " " << i;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 30u);
}

TEST_F(CliTest, NormalizeText) {
  const CliRun r = Cli({"normalize", "Hij zag 21 Katten!"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "hij zag eenentwintig katten\n");
}

}  // namespace
}  // namespace oralread
