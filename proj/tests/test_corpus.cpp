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

#include <cmath>

#include "persona/corpus.hpp"
#include "persona/error.hpp"
#include "test_util.hpp"

using namespace persona;

namespace {
const char* kTwoUsers =
    R"({"user_id":"u1","traits":{"o":0.5,"c":0.1,"e":0.2,"a":0.3,"n":0.4},"tweets":["hi there","RT copy"]})"
    "\n"
    R"({"user_id":"u2","traits":{"o":0.7,"c":0.1,"e":0.2,"a":0.3,"n":0.4},"tweets":["yo"]})"
    "\n";
}

TEST(NormalizeScore, MapsRawRangeToUnitInterval) {
  EXPECT_DOUBLE_EQ(normalize_score(30, 10, 50), 0.5);
  EXPECT_DOUBLE_EQ(normalize_score(10, 10, 50), 0.0);
  EXPECT_DOUBLE_EQ(normalize_score(50, 10, 50), 1.0);
  EXPECT_THROW(normalize_score(51, 10, 50), DataError);
  EXPECT_THROW(normalize_score(1, 5, 5), DataError);
}

TEST(ParseCorpus, ReadsRecordsAndStats) {
  const auto c = parse_corpus(kTwoUsers);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].user_id, "u1");
  EXPECT_EQ(c[0].tweets.size(), 2u);
  const auto s = corpus_stats(c);
  EXPECT_DOUBLE_EQ(s.trait_mean[0], 0.6);
  EXPECT_NEAR(s.trait_std[0], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(s.trait_std[1], 0.0);
  EXPECT_DOUBLE_EQ(s.tweet_count_mean, 1.5);
}

TEST(ParseCorpus, DropsRetweetsAndSmallUsers) {
  LoadOptions o;
  o.drop_retweets = true;
  o.min_tweets = 1;
  LoadSummary sum;
  const auto c = parse_corpus(kTwoUsers, o, &sum);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].tweets.size(), 1u);
  EXPECT_EQ(sum.retweets_dropped, 1u);
  o.min_tweets = 2;
  o.drop_retweets = false;
  const auto c2 = parse_corpus(kTwoUsers, o, &sum);
  ASSERT_EQ(c2.size(), 1u);
  EXPECT_EQ(sum.users_dropped, 1u);
}

TEST(ParseCorpus, UsersWithoutTweetsAreAlwaysDropped) {
  const auto c = parse_corpus(R"({"user_id":"x","traits":{"o":0,"c":0,"e":0,"a":0,"n":0},"tweets":[]})");
  EXPECT_TRUE(c.empty());
}

TEST(ParseCorpus, RawScaleNormalizes) {
  LoadOptions o;
  o.raw_scale = RawScale{10, 50};
  const auto c = parse_corpus(R"({"user_id":"x","traits":{"o":30,"c":10,"e":50,"a":20,"n":40},"tweets":["a"]})", o);
  EXPECT_DOUBLE_EQ(c[0].traits[Trait::o], 0.5);
  EXPECT_DOUBLE_EQ(c[0].traits[Trait::e], 1.0);
}

TEST(ParseCorpus, ErrorsNameTheLine) {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      parse_corpus(text);
      FAIL() << "no error for " << text;
    } catch (const DataError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error(std::string(kTwoUsers) + "{not json\n", "<corpus>:3:");
  expect_error(std::string(kTwoUsers) + R"({"user_id":"u1","traits":{"o":0,"c":0,"e":0,"a":0,"n":0},"tweets":["a"]})",
               "duplicate");
  expect_error(R"({"user_id":"x","traits":{"o":1.5,"c":0,"e":0,"a":0,"n":0},"tweets":["a"]})", "<corpus>:1:");
  expect_error(R"({"user_id":"x","traits":{"o":0,"c":0,"e":0,"a":0},"tweets":["a"]})", "o,c,e,a,n");
  expect_error(R"({"user_id":"x","tweets":["a"]})", "traits");
}

TEST(ParseCorpus, TraitsOptionalForPredictionInput) {
  LoadOptions o;
  o.require_traits = false;
  const auto c = parse_corpus(R"({"user_id":"x","tweets":["a"]})", o);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(std::isnan(c[0].traits[Trait::n]));
}

TEST(Corpus, SaveLoadRoundTripIsExact) {
  const auto w = fixtures::small_world(20, 15, 0.1, 5);
  const auto dir = fixtures::scratch_dir("corpus_rt");
  save_corpus(dir / "c.jsonl", w.corpus);
  const auto back = load_corpus(dir / "c.jsonl");
  ASSERT_EQ(back.size(), w.corpus.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].user_id, w.corpus[i].user_id);
    EXPECT_EQ(back[i].tweets, w.corpus[i].tweets);
    EXPECT_EQ(back[i].traits, w.corpus[i].traits);
  }
  EXPECT_EQ(format_corpus(back), format_corpus(w.corpus));
}

TEST(GenerateSynthetic, IsPureFunctionOfOptions) {
  const auto a = fixtures::small_world(10, 8, 0.15, 9);
  const auto b = fixtures::small_world(10, 8, 0.15, 9);
  EXPECT_EQ(format_corpus(a.corpus), format_corpus(b.corpus));
  const auto c = fixtures::small_world(10, 8, 0.15, 10);
  EXPECT_NE(format_corpus(a.corpus), format_corpus(c.corpus));
}

TEST(GenerateSynthetic, TraitsInUnitIntervalAndShapeRespected) {
  const auto w = fixtures::small_world(40, 12, 0.3, 2);
  ASSERT_EQ(w.corpus.size(), 40u);
  for (const auto& r : w.corpus) {
    EXPECT_EQ(r.tweets.size(), 12u);
    for (double v : r.traits.values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(GenerateSynthetic, LinkSeedSharesTraitFunction) {
  const auto table = make_synthetic_embeddings(300, 8, 4, 1);
  SynthOptions o;
  o.n_users = 5;
  o.tweets_per_user = 10;
  o.noise_std = 0.0;
  o.n_topics = 4;
  o.link_seed = 77;
  o.seed = 1;
  const auto a = generate_synthetic(o, table);
  o.seed = 2;
  o.id_prefix = "other";
  const auto b = generate_synthetic(o, table);
  EXPECT_NE(a[0].tweets, b[0].tweets);
  EXPECT_EQ(b[0].user_id.rfind("other", 0), 0u);
  // Rebuilding corpus a with the same link seed reproduces it.
  o.seed = 1;
  o.id_prefix = "user";
  EXPECT_EQ(format_corpus(generate_synthetic(o, table)), format_corpus(a));
}

TEST(GenerateSynthetic, NoiseStdControlsSignalShare) {
  // With noise equal to the signal scale about half the trait variance is noise.
  const auto w = fixtures::small_world(600, 30, kSynthSignalStd, 3);
  const auto s = corpus_stats(w.corpus);
  for (double sd : s.trait_std) EXPECT_NEAR(sd, std::sqrt(2.0) * kSynthSignalStd, 0.04);
}
