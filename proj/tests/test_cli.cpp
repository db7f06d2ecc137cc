// Copyright 2026 The persona Authors
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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "persona/io.hpp"
#include "persona/report.hpp"
#include "test_util.hpp"

using namespace persona;
namespace fs = std::filesystem;

namespace {

/// Runs the CLI; `args` may carry its own redirections.
int run(const std::string& args, bool quiet = true) {
  const std::string cmd = std::string(PERSONA_CLI) + " " + args + (quiet ? " >/dev/null 2>&1" : " 2>/dev/null");
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Small synthetic corpus shared by the CLI tests.
fs::path synth_dir() {
  static const fs::path dir = [] {
    auto d = fixtures::scratch_dir("cli_synth");
    EXPECT_EQ(run("synth --out " + d.string() + " --users 30 --tweets 12 --vocab 300 --dim 8 --seed 4"), 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST(Cli, CleanFiltersStdin) {
  const auto dir = fixtures::scratch_dir("cli_clean");
  write_file_atomic(dir / "in.txt", "Check THIS out http://t.co/x #cool 2017!!\n@Bob hi\n");
  ASSERT_EQ(run("clean < " + (dir / "in.txt").string() + " > " + (dir / "out.txt").string(), false), 0);
  EXPECT_EQ(read_file(dir / "out.txt"), "check this out\nbob hi\n");
  ASSERT_EQ(run("clean --drop-mentions < " + (dir / "in.txt").string() + " > " + (dir / "out2.txt").string(), false), 0);
  EXPECT_EQ(read_file(dir / "out2.txt"), "check this out\nhi\n");
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  const auto d = synth_dir();
  EXPECT_EQ(run("train --corpus " + (d / "corpus.jsonl").string() + " --out " + (d / "t_missing").string()), 1);
  EXPECT_EQ(run("train --corpus " + (d / "corpus.jsonl").string() + " --embeddings /nonexistent --out " +
                (d / "t_missing").string()),
            1);
  EXPECT_EQ(run("eval --setting bogus --corpus " + (d / "corpus.jsonl").string() + " --out " + (d / "e").string()),
            1);
  EXPECT_EQ(run("--help"), 0);
}

TEST(Cli, DataErrorsExitTwo) {
  const auto dir = fixtures::scratch_dir("cli_bad");
  write_file_atomic(dir / "bad.jsonl", "{not json\n");
  write_file_atomic(dir / "emb.txt", "a 1 2\n");
  EXPECT_EQ(run("train --corpus " + (dir / "bad.jsonl").string() + " --embeddings " + (dir / "emb.txt").string() +
                " --out " + (dir / "o").string()),
            2);
}

TEST(Cli, TrainIsByteIdenticalForSameSeed) {
  const auto d = synth_dir();
  const std::string base = "train --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                           (d / "embeddings.txt").string() + " --restarts 1 --seed 2 --out ";
  ASSERT_EQ(run(base + (d / "t1").string()), 0);
  ASSERT_EQ(run(base + (d / "t2").string()), 0);
  EXPECT_EQ(read_file(d / "t1" / "bundle.json"), read_file(d / "t2" / "bundle.json"));
  EXPECT_TRUE(fs::exists(d / "t1" / "train_summary.txt"));
}

TEST(Cli, PredictWritesRowsAndErrorSidecar) {
  const auto d = synth_dir();
  ASSERT_EQ(run("train --model ridge --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                (d / "embeddings.txt").string() + " --out " + (d / "tr").string()),
            0);
  auto corpus = read_file(d / "corpus.jsonl");
  corpus += R"({"user_id":"ghost","tweets":["qqqq xxxx 123"]})" "\n";
  write_file_atomic(d / "with_ghost.jsonl", corpus);
  ASSERT_EQ(run("predict --bundle " + (d / "tr" / "bundle.json").string() + " --corpus " +
                (d / "with_ghost.jsonl").string() + " --embeddings " + (d / "embeddings.txt").string() + " --out " +
                (d / "pr").string()),
            0);
  const auto table = parse_predictions(read_file(d / "pr" / "predictions.csv"));
  EXPECT_EQ(table.user_ids.size(), 30u);
  const auto errors = read_file(d / "pr" / "prediction_errors.csv");
  EXPECT_NE(errors.find("ghost"), std::string::npos);
}

TEST(Cli, PredictWithOtherEmbeddingsExitsTwo) {
  const auto d = synth_dir();
  ASSERT_EQ(run("train --model ridge --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                (d / "embeddings.txt").string() + " --out " + (d / "tr2").string()),
            0);
  const auto other = fixtures::scratch_dir("cli_other");
  ASSERT_EQ(run("synth --out " + other.string() + " --users 5 --tweets 3 --vocab 300 --dim 8 --seed 5"), 0);
  EXPECT_EQ(run("predict --bundle " + (d / "tr2" / "bundle.json").string() + " --corpus " +
                (d / "corpus.jsonl").string() + " --embeddings " + (other / "embeddings.txt").string() +
                " --out " + (d / "pr2").string()),
            2);
}

TEST(Cli, ConfigFileFillsUnsetFlagsOnly) {
  const auto d = synth_dir();
  write_file_atomic(d / "run.cfg", "# defaults\nmodel = ridge\nseed=9\nembeddings=" + (d / "embeddings.txt").string() +
                                       "\ncorpus=" + (d / "corpus.jsonl").string() + "\n");
  ASSERT_EQ(run("train --config " + (d / "run.cfg").string() + " --out " + (d / "c1").string()), 0);
  ASSERT_EQ(run("train --model ridge --seed 9 --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                (d / "embeddings.txt").string() + " --out " + (d / "c2").string()),
            0);
  EXPECT_EQ(read_file(d / "c1" / "bundle.json"), read_file(d / "c2" / "bundle.json"));
  ASSERT_EQ(run("train --config " + (d / "run.cfg").string() + " --seed 10 --out " + (d / "c3").string()), 0);
  ASSERT_EQ(run("train --model ridge --seed 10 --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                (d / "embeddings.txt").string() + " --out " + (d / "c4").string()),
            0);
  EXPECT_EQ(read_file(d / "c3" / "bundle.json"), read_file(d / "c4" / "bundle.json"));
  write_file_atomic(d / "bad.cfg", "nonsense_key=1\n");
  EXPECT_EQ(run("train --config " + (d / "bad.cfg").string() + " --out " + (d / "c5").string()), 1);
}

TEST(Cli, EvalFullWritesParseableCsv) {
  const auto d = synth_dir();
  ASSERT_EQ(run("eval --setting full --methods embedding+ridge,lexicon+ridge --folds 3 --corpus " +
                (d / "corpus.jsonl").string() + " --embeddings " + (d / "embeddings.txt").string() + " --lexicon " +
                (d / "lexicon.tsv").string() + " --out " + (d / "ef").string()),
            0);
  const auto rows = parse_csv(read_file(d / "ef" / "full.csv"));
  std::size_t r_rows = 0;
  for (const auto& r : rows) r_rows += r.metric == "pearson_r" ? 1 : 0;
  EXPECT_EQ(r_rows, 12u);
}

TEST(Cli, EvalSamplingWritesDeterministicSvg) {
  const auto d = synth_dir();
  const std::string base = "eval --setting sampling --methods embedding+ridge --folds 3 --subsets 2 --tweet-counts 3,12 "
                           "--corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                           (d / "embeddings.txt").string() + " --out ";
  ASSERT_EQ(run(base + (d / "s1").string()), 0);
  ASSERT_EQ(run(base + (d / "s2").string()), 0);
  EXPECT_EQ(read_file(d / "s1" / "sampling.svg"), read_file(d / "s2" / "sampling.svg"));
  EXPECT_EQ(read_file(d / "s1" / "sampling.csv"), read_file(d / "s2" / "sampling.csv"));
  EXPECT_EQ(run("eval --setting sampling --tweet-counts 5,3 --corpus " + (d / "corpus.jsonl").string() +
                " --embeddings " + (d / "embeddings.txt").string() + " --lexicon " + (d / "lexicon.tsv").string() +
                " --out " + (d / "s3").string()),
            1);
}

TEST(Cli, CoverageReport) {
  const auto d = synth_dir();
  ASSERT_EQ(run("coverage --corpus " + (d / "corpus.jsonl").string() + " --embeddings " +
                (d / "embeddings.txt").string() + " --out " + (d / "cov").string()),
            0);
  const auto rows = parse_csv(read_file(d / "cov" / "coverage.csv"));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0].feature, "embedding");
  EXPECT_EQ(rows[0].value, 1.0);
}
