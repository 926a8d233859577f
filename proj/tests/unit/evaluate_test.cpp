#include <gtest/gtest.h>

#include <filesystem>

#include "forge/error.hpp"
#include "forge/evaluate.hpp"
#include "forge/mock_providers.hpp"
#include "oracles.hpp"

namespace forge {
namespace {

TEST(QueryTier, RoundTrip) {
  for (auto t : {QueryTier::kGeneral, QueryTier::kFairlySpecific, QueryTier::kUltraSpecific}) {
    EXPECT_EQ(parse_tier(to_string(t)), t);
  }
  EXPECT_EQ(to_string(QueryTier::kFairlySpecific), "fairly_specific");
  EXPECT_FALSE(parse_tier("extreme").has_value());
}

TEST(LoadLabeledQueries, ParsesAndRejects) {
  const auto dir = std::filesystem::temp_directory_path() / "forge_eval_queries";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.jsonl";
  write_file(good, R"({"id":"q1","text":"sleep better","tier":"general","relevant_ids":["c00001"]}
{"id":"q2","text":"run a 5k","tier":"ultra_specific","relevant_ids":[]}
)");
  const auto qs = load_labeled_queries(good);
  ASSERT_EQ(qs.size(), 2u);
  EXPECT_EQ(qs[0].relevant_ids, (RelevantIds{"c00001"}));
  EXPECT_EQ(qs[1].tier, QueryTier::kUltraSpecific);

  const auto dup = dir / "dup.jsonl";
  write_file(dup, R"({"id":"q1","text":"a","tier":"general","relevant_ids":[]}
{"id":"q1","text":"b","tier":"general","relevant_ids":[]}
)");
  EXPECT_THROW(load_labeled_queries(dup), Error);
  const auto tier = dir / "tier.jsonl";
  write_file(tier, R"({"id":"q1","text":"a","tier":"vague","relevant_ids":[]})" "\n");
  EXPECT_THROW(load_labeled_queries(tier), Error);
  std::filesystem::remove_all(dir);
}

TEST(ScoreRanking, CurvesMatchPointMetrics) {
  const RankedIds ranked{"a", "x", "b", "y", "c"};
  const RelevantIds relevant{"a", "b", "c", "d"};
  const auto m = score_ranking(ranked, relevant);
  EXPECT_EQ(m.hit3, 1);
  EXPECT_NEAR(m.at3.precision, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.at3.recall, 2.0 / 3.0, 1e-12);  // min(k, |relevant|) denominator
  EXPECT_NEAR(m.at20.precision, 3.0 / 20.0, 1e-12);
  EXPECT_NEAR(m.at20.recall, 0.75, 1e-12);
  EXPECT_NEAR(m.ndcg20, testing::ndcg_oracle(ranked, relevant, 20), 1e-12);
  ASSERT_EQ(m.precision_curve.size(), kPrDepth);
  ASSERT_EQ(m.recall_curve.size(), kPrDepth);
  for (std::size_t r = 1; r <= kPrDepth; ++r) {
    const auto p = testing::prf_oracle(ranked, relevant, r);
    EXPECT_NEAR(m.precision_curve[r - 1], p.precision, 1e-12);
    EXPECT_NEAR(m.recall_curve[r - 1], p.recall, 1e-12);
  }
  EXPECT_EQ(m.returned, 5u);
}

TEST(Aggregate, SkipsFailedRowsAndSplitsTiers) {
  QueryMetrics a = score_ranking({"a"}, {"a"});
  a.query_id = "q1";
  a.tier = QueryTier::kGeneral;
  a.validated = true;
  QueryMetrics b = score_ranking({"x"}, {"a"});
  b.query_id = "q2";
  b.tier = QueryTier::kUltraSpecific;
  b.validated = true;
  QueryMetrics c;
  c.query_id = "q3";
  c.validated = true;
  c.failed = true;
  QueryMetrics other = score_ranking({"a"}, {"a"});
  other.validated = false;
  const auto r = aggregate({a, b, c, other}, true);
  EXPECT_EQ(r.failed_queries, 1u);
  EXPECT_EQ(r.aggregates.size(), 4u);
  EXPECT_EQ(r.aggregates.at("overall").queries, 2u);
  EXPECT_NEAR(r.aggregates.at("overall").hit3, 0.5, 1e-12);
  EXPECT_NEAR(r.aggregates.at("general").hit3, 1.0, 1e-12);
  EXPECT_NEAR(r.aggregates.at("ultra_specific").hit3, 0.0, 1e-12);
  EXPECT_EQ(r.aggregates.at("fairly_specific").queries, 0u);
  ASSERT_EQ(r.pr_points.size(), kPrDepth);
  EXPECT_NEAR(r.pr_points[0].precision, 0.5, 1e-12);
  EXPECT_NEAR(r.pr_points[0].recall, 0.5, 1e-12);
}

struct EvalFixture {
  std::vector<Challenge> cs;
  MockJudgeTable table;
  std::vector<LabeledQuery> queries;

  EvalFixture() {
    const char* actions[] = {"Drink eight glasses of water", "Take a brisk morning walk", "Walk ten thousand steps",
                             "Read ten pages of a book", "Meditate for ten minutes", "Stretch for five minutes"};
    for (std::size_t i = 0; i < 6; ++i) {
      cs.push_back({challenge_id(i), "T", "", "w", actions[i], "https://a.com/" + std::to_string(i), Origin::kFixture});
    }
    queries = {{"q1", "walk more", QueryTier::kGeneral, {challenge_id(1), challenge_id(2)}},
               {"q2", "read a book", QueryTier::kFairlySpecific, {challenge_id(3)}}};
    for (const auto& c : cs) {
      table.set_relevant("walk more", c.daily_action, c.id == challenge_id(1) || c.id == challenge_id(2));
      table.set_relevant("read a book", c.daily_action, c.id == challenge_id(3));
    }
  }
};

TEST(EvaluateSearch, ProducesBothConfigurations) {
  EvalFixture f;
  auto providers = make_mock_providers(f.table, 0, 2);
  const auto store = build_store(f.cs, *providers.embedder);
  const auto report = evaluate_search(store, providers, f.queries);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.rows[0].query_id, "q1");
  EXPECT_FALSE(report.rows[0].validated);
  EXPECT_TRUE(report.rows[1].validated);
  EXPECT_EQ(report.rows[2].query_id, "q2");
  EXPECT_TRUE(report.with_filtering.validated);
  EXPECT_FALSE(report.without_filtering.validated);
  // validation keeps only judged-relevant items here, so precision can only rise
  EXPECT_GE(report.with_filtering.aggregates.at("overall").precision3,
            report.without_filtering.aggregates.at("overall").precision3);
  EXPECT_EQ(report.rows[1].returned, 2u);
  EXPECT_EQ(report.rows[0].returned, 6u);

  const auto j = report_to_json(report);
  EXPECT_EQ(j.at("rows").size(), 4u);
  const auto csv = report_to_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("q1,general,with_filtering,0,2,1,0.666667"), std::string::npos);
  const auto pr = pr_points_to_csv(report);
  EXPECT_EQ(std::count(pr.begin(), pr.end(), '\n'), 41);
}

TEST(EvaluateSearch, FailedQueriesAreCountedNotAveraged) {
  EvalFixture f;
  f.table.unavailable.insert("read a book");
  auto providers = make_mock_providers(f.table, 0, 2);
  const auto store = build_store(f.cs, *providers.embedder);
  const auto report = evaluate_search(store, providers, f.queries);
  EXPECT_EQ(report.with_filtering.failed_queries, 1u);
  EXPECT_EQ(report.without_filtering.failed_queries, 0u);
  EXPECT_EQ(report.with_filtering.aggregates.at("overall").queries, 1u);
}

TEST(EvaluateSearch, DeterministicAcrossConcurrency) {
  EvalFixture f;
  auto p1 = make_mock_providers(f.table, 0, 1);
  auto p8 = make_mock_providers(f.table, 0, 8);
  const auto store = build_store(f.cs, *p1.embedder);
  EXPECT_EQ(report_to_json(evaluate_search(store, p1, f.queries, {50, 1})),
            report_to_json(evaluate_search(store, p8, f.queries, {50, 8})));
}

TEST(EvaluateSearch, EmptyQueriesRejected) {
  EvalFixture f;
  auto providers = make_mock_providers(f.table);
  const auto store = build_store(f.cs, *providers.embedder);
  EXPECT_THROW(evaluate_search(store, providers, {}), Error);
}

}  // namespace
}  // namespace forge
