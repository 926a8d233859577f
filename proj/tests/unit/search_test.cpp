#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "forge/error.hpp"
#include "forge/mock_providers.hpp"
#include "forge/search.hpp"

namespace forge {
namespace {

Challenge ch(std::size_t i, std::string title, std::string action) {
  return {challenge_id(i), std::move(title), "", "wish", std::move(action), "https://a.com/" + std::to_string(i), Origin::kFixture};
}

std::vector<Challenge> corpus() {
  return {ch(0, "Early riser", "Wake up 30 minutes earlier"),
          ch(1, "Sleep hygiene", "Turn off screens an hour before bed to wake up feeling refreshed"),
          ch(2, "Breakfast", "Sit at the breakfast table"),
          ch(3, "SAT prep", "Solve ten SAT practice problems to prepare for the SAT"),
          ch(4, "Hydration", "Drink eight glasses of water"),
          ch(5, "Energy walk", "Take a brisk walk to feel more energetic"),
          ch(6, "Stress journal", "Write down three things that stress you and one response"),
          ch(7, "Breathing", "Practice box breathing for five minutes to feel less stressed")};
}

struct Fixture {
  MockJudgeTable table;
  Providers providers;
  ChallengeStore store;

  explicit Fixture(MockJudgeTable t = {})
      : table(t), providers(make_mock_providers(t, 0, 2)), store(build_store(corpus(), *providers.embedder)) {}
};

TEST(CheckRequest, Bounds) {
  EXPECT_NO_THROW(check_request({"wish", 5, 50, true}));
  for (const SearchRequest& bad : {SearchRequest{"", 5, 50, true}, SearchRequest{"  ", 5, 50, true}, SearchRequest{"w", 0, 50, true},
                                   SearchRequest{"w", 51, 200, true}, SearchRequest{"w", 10, 5, true}, SearchRequest{"w", 5, 201, true}}) {
    try {
      check_request(bad);
      FAIL() << bad.wish << " " << bad.k << " " << bad.retrieve_k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidRequest);
    }
  }
}

TEST(Retrieve, IdenticalTextRanksFirst) {
  Fixture f;
  const auto c = retrieve(f.store, *f.providers.embedder, "Drink eight glasses of water", 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(f.store.challenges()[c[0].index].id, challenge_id(4));
  EXPECT_NEAR(c[0].retrieval_score, 1.0, 1e-6);
}

TEST(Retrieve, EmptyStore) {
  auto providers = make_mock_providers({});
  const ChallengeStore empty({}, {}, 0, providers.embedder->tag());
  EXPECT_TRUE(retrieve(empty, *providers.embedder, "anything", 5).empty());
}

TEST(Retrieve, ProviderMismatch) {
  Fixture f;
  MockEmbedder other(99);
  try {
    retrieve(f.store, other, "walk", 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProviderMismatch);
  }
}

class FailingEmbedder final : public Embedder {
 public:
  explicit FailingEmbedder(std::string tag) : tag_(std::move(tag)) {}
  std::string tag() const override { return tag_; }

 protected:
  std::vector<EmbeddingVector> embed_raw(std::span<const std::string>) override {
    throw Error(ErrorCode::kProviderUnavailable, "offline");
  }

 private:
  std::string tag_;
};

TEST(Retrieve, EmbeddingFailureIsServiceUnavailable) {
  Fixture f;
  FailingEmbedder failing(f.store.provider_tag());
  try {
    retrieve(f.store, failing, "walk", 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kServiceUnavailable);
  }
}

TEST(Rerank, EmptyAndSingle) {
  Fixture f;
  bool degraded = false;
  EXPECT_TRUE(rerank_candidates(f.store, *f.providers.reranker, "w", {}, degraded).empty());
  const auto one = rerank_candidates(f.store, *f.providers.reranker, "w", {{3, 0.5, std::nullopt, false}}, degraded);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].index, 3u);
  EXPECT_FALSE(degraded);
}

TEST(Rerank, OrderEqualsCosineOrder) {
  Fixture f;
  const std::string wish = "feel less stressed and more energetic";
  bool degraded = false;
  auto cands = retrieve(f.store, *f.providers.embedder, wish, 8);
  std::reverse(cands.begin(), cands.end());
  const auto out = rerank_candidates(f.store, *f.providers.reranker, wish, cands, degraded);
  ASSERT_EQ(out.size(), cands.size());
  const auto q = f.providers.embedder->embed(wish);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double prev = dot(q, f.providers.embedder->embed(f.store.challenges()[out[i - 1].index].daily_action));
    const double cur = dot(q, f.providers.embedder->embed(f.store.challenges()[out[i].index].daily_action));
    EXPECT_GE(prev, cur);
  }
}

TEST(Validate, DropsContradictionAndInsufficientData) {
  MockJudgeTable table;
  table.set_relevant("wake up feeling refreshed", "Wake up 30 minutes earlier", false);
  table.set_relevant("prepare for the SAT", "Sit at the breakfast table", false);
  Fixture f(table);
  bool degraded = false;
  const std::vector<Candidate> all{{0, 0.9, {}, false}, {1, 0.8, {}, false}, {2, 0.7, {}, false}};
  const auto woke = validate_candidates(f.store, *f.providers.judge, "wake up feeling refreshed", all, degraded);
  ASSERT_EQ(woke.size(), 2u);
  EXPECT_EQ(woke[0].index, 1u);
  EXPECT_TRUE(woke[0].validated);
  const auto sat = validate_candidates(f.store, *f.providers.judge, "prepare for the SAT", all, degraded);
  ASSERT_EQ(sat.size(), 2u);
  EXPECT_EQ(sat[1].index, 1u);
  EXPECT_FALSE(degraded);
}

TEST(Validate, AllRelevantIsIdentityOnIndices) {
  Fixture f;
  bool degraded = false;
  const std::vector<Candidate> all{{5, 0.9, {}, false}, {2, 0.8, {}, false}};
  const auto out = validate_candidates(f.store, *f.providers.judge, "anything", all, degraded);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].index, 5u);
  EXPECT_EQ(out[1].index, 2u);
}

TEST(Validate, OnlyTopTwentyExamined) {
  std::vector<Challenge> cs;
  for (std::size_t i = 0; i < 30; ++i) cs.push_back(ch(i, "T", "action number " + std::to_string(i)));
  auto providers = make_mock_providers({});
  const auto store = build_store(cs, *providers.embedder);
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < 30; ++i) cands.push_back({i, 0.0, {}, false});
  bool degraded = false;
  EXPECT_EQ(validate_candidates(store, *providers.judge, "w", cands, degraded).size(), kValidationDepth);
}

TEST(Validate, JudgeFailureDegrades) {
  MockJudgeTable table;
  table.unavailable.insert("doomed wish");
  Fixture f(table);
  bool degraded = false;
  const std::vector<Candidate> all{{0, 0.9, {}, false}};
  const auto out = validate_candidates(f.store, *f.providers.judge, "doomed wish", all, degraded);
  EXPECT_TRUE(degraded);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].validated);
}

TEST(Search, RanksAndTruncates) {
  Fixture f;
  const auto r = search(f.store, f.providers, {"be more energetic", 2, 50, true});
  ASSERT_EQ(r.results.size(), 2u);
  EXPECT_EQ(r.results[0].rank, 1u);
  EXPECT_EQ(r.results[1].rank, 2u);
  EXPECT_EQ(r.results[0].challenge.id, challenge_id(5));
  EXPECT_TRUE(r.results[0].validated);
  EXPECT_TRUE(r.results[0].rerank_score.has_value());
  EXPECT_FALSE(r.degraded);
}

TEST(Search, WithoutValidationNothingIsValidated) {
  Fixture f;
  const auto r = search(f.store, f.providers, {"be more energetic", 8, 50, false});
  EXPECT_EQ(r.results.size(), 8u);
  for (const auto& x : r.results) EXPECT_FALSE(x.validated);
}

TEST(Search, EmptyWishRejected) {
  Fixture f;
  EXPECT_THROW(search(f.store, f.providers, {"", 3, 50, true}), Error);
}

class BrokenReranker final : public Reranker {
 public:
  std::string tag() const override { return "broken"; }

 protected:
  std::vector<RerankHit> rerank_raw(const std::string&, std::span<const std::string>) override {
    throw Error(ErrorCode::kProviderUnavailable, "down");
  }
};

TEST(Search, RerankFailureDegradesButAnswers) {
  Fixture f;
  f.providers.reranker = std::make_shared<BrokenReranker>();
  const auto r = search(f.store, f.providers, {"be more energetic", 3, 50, false});
  EXPECT_TRUE(r.degraded);
  EXPECT_EQ(r.results.size(), 3u);
  for (std::size_t i = 1; i < r.results.size(); ++i) EXPECT_GE(r.results[i - 1].retrieval_score, r.results[i].retrieval_score);
}

TEST(SearchResponse, JsonShape) {
  Fixture f;
  const nlohmann::json j = search(f.store, f.providers, {"drink water", 1, 50, true});
  EXPECT_EQ(j.at("query"), "drink water");
  EXPECT_EQ(j.at("degraded"), false);
  ASSERT_EQ(j.at("results").size(), 1u);
  for (const char* key : {"id", "title", "wish", "daily_action", "source_url", "rank", "retrieval_score", "rerank_score", "validated"}) {
    EXPECT_TRUE(j.at("results")[0].contains(key)) << key;
  }
}

TEST(SearchProperties, ValidationOutputIsSubsequenceOfInput) {
  std::vector<Challenge> cs;
  for (std::size_t i = 0; i < 40; ++i) cs.push_back(ch(i, "T", "act " + std::to_string(i)));
  std::mt19937_64 rng(17);
  MockJudgeTable table;
  for (std::size_t i = 0; i < 40; ++i) table.set_relevant("w", cs[i].daily_action, rng() % 2 == 0);
  auto providers = make_mock_providers(table);
  const auto store = build_store(cs, *providers.embedder);
  for (int t = 0; t < 50; ++t) {
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < 40; ++i) {
      if (rng() % 2) cands.push_back({i, 0.0, {}, false});
    }
    std::shuffle(cands.begin(), cands.end(), rng);
    bool degraded = false;
    const auto out = validate_candidates(store, *providers.judge, "w", cands, degraded);
    std::size_t pos = 0;
    for (const auto& o : out) {
      while (pos < cands.size() && cands[pos].index != o.index) ++pos;
      ASSERT_LT(pos, cands.size());
      ++pos;
    }
  }
}

}  // namespace
}  // namespace forge
