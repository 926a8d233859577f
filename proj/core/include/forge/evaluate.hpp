#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "forge/metrics.hpp"
#include "forge/providers.hpp"
#include "forge/store.hpp"

namespace forge {

enum class QueryTier { kGeneral, kFairlySpecific, kUltraSpecific };

std::string_view to_string(QueryTier tier);
std::optional<QueryTier> parse_tier(std::string_view text);

struct LabeledQuery {
  std::string id;
  std::string text;
  QueryTier tier = QueryTier::kGeneral;
  RelevantIds relevant_ids;
};

/// JSONL {id, text, tier, relevant_ids}. Throws Error(kParseError).
std::vector<LabeledQuery> load_labeled_queries(const std::filesystem::path& path);

inline constexpr std::size_t kPrDepth = 20;

struct QueryMetrics {
  std::string query_id;
  QueryTier tier = QueryTier::kGeneral;
  bool validated = false;  // configuration: with or without filtering
  bool failed = false;
  std::string error;
  bool empty_relevant = false;
  std::size_t returned = 0;
  int hit3 = 0;
  PrfScores at3;
  PrfScores at20;
  double ndcg20 = 0.0;
  std::vector<double> precision_curve;  // ranks 1..20
  std::vector<double> recall_curve;
};

struct MetricAggregate {
  std::size_t queries = 0;
  double hit3 = 0.0;
  double precision3 = 0.0;
  double recall3 = 0.0;
  double f1_3 = 0.0;
  double precision20 = 0.0;
  double recall20 = 0.0;
  double f1_20 = 0.0;
  double ndcg20 = 0.0;
};

struct PrPoint {
  std::size_t rank = 0;
  double precision = 0.0;
  double recall = 0.0;
};

struct ConfigurationReport {
  bool validated = false;
  std::size_t failed_queries = 0;
  // Keys: "overall", "general", "fairly_specific", "ultra_specific".
  std::map<std::string, MetricAggregate> aggregates;
  std::vector<PrPoint> pr_points;  // macro-averaged over successful queries
};

struct EvalConfig {
  std::size_t retrieve_k = 50;
  std::size_t max_in_flight = 8;
};

struct EvalReport {
  std::vector<QueryMetrics> rows;  // sorted by (query id, validated)
  ConfigurationReport with_filtering;
  ConfigurationReport without_filtering;
  EvalConfig config;
};

/// Runs every query with validation on and off (k = 20) and aggregates.
/// Provider failures, including degraded responses, mark the row failed.
/// Throws Error(kEmptyInput) when there are no queries.
EvalReport evaluate_search(const ChallengeStore& store, Providers& providers,
                           const std::vector<LabeledQuery>& queries, const EvalConfig& config = {});

/// Metrics of a single ranked list.
QueryMetrics score_ranking(const RankedIds& ranked, const RelevantIds& relevant);

/// Macro averages over rows that did not fail.
ConfigurationReport aggregate(const std::vector<QueryMetrics>& rows, bool validated);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);
std::string pr_points_to_csv(const EvalReport& report);

}  // namespace forge
