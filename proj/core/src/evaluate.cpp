#include "forge/evaluate.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "forge/error.hpp"
#include "forge/parallel.hpp"
#include "forge/search.hpp"

namespace forge {
namespace {

constexpr std::size_t kEvalK = 20;
constexpr std::size_t kTopK = 3;

std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

nlohmann::json to_json(const MetricAggregate& a) {
  return {{"queries", a.queries},       {"hit@3", a.hit3},         {"precision@3", a.precision3},
          {"recall@3", a.recall3},      {"f1@3", a.f1_3},          {"precision@20", a.precision20},
          {"recall@20", a.recall20},    {"f1@20", a.f1_20},        {"ndcg@20", a.ndcg20}};
}

nlohmann::json to_json(const ConfigurationReport& r) {
  nlohmann::json aggregates = nlohmann::json::object();
  for (const auto& [key, agg] : r.aggregates) aggregates[key] = to_json(agg);
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.pr_points) points.push_back({{"rank", p.rank}, {"precision", p.precision}, {"recall", p.recall}});
  return {{"validated", r.validated}, {"failed_queries", r.failed_queries}, {"aggregates", aggregates},
          {"pr_points", points}};
}

nlohmann::json to_json(const QueryMetrics& m) {
  nlohmann::json j{{"query_id", m.query_id},
                   {"tier", to_string(m.tier)},
                   {"validated", m.validated},
                   {"failed", m.failed}};
  if (m.failed) {
    j["error"] = m.error;
    return j;
  }
  j["empty_relevant"] = m.empty_relevant;
  j["returned"] = m.returned;
  j["hit@3"] = m.hit3;
  j["precision@3"] = m.at3.precision;
  j["recall@3"] = m.at3.recall;
  j["f1@3"] = m.at3.f1;
  j["precision@20"] = m.at20.precision;
  j["recall@20"] = m.at20.recall;
  j["f1@20"] = m.at20.f1;
  j["ndcg@20"] = m.ndcg20;
  return j;
}

}  // namespace

std::string_view to_string(QueryTier tier) {
  switch (tier) {
    case QueryTier::kGeneral:
      return "general";
    case QueryTier::kFairlySpecific:
      return "fairly_specific";
    case QueryTier::kUltraSpecific:
      return "ultra_specific";
  }
  return "general";
}

std::optional<QueryTier> parse_tier(std::string_view text) {
  if (text == "general") return QueryTier::kGeneral;
  if (text == "fairly_specific") return QueryTier::kFairlySpecific;
  if (text == "ultra_specific") return QueryTier::kUltraSpecific;
  return std::nullopt;
}

std::vector<LabeledQuery> load_labeled_queries(const std::filesystem::path& path) {
  std::vector<LabeledQuery> out;
  std::set<std::string> ids;
  for (const auto& row : read_jsonl(path)) {
    try {
      LabeledQuery q;
      q.id = row.at("id").get<std::string>();
      q.text = row.at("text").get<std::string>();
      const auto tier = parse_tier(row.value("tier", std::string("general")));
      if (!tier) throw Error(ErrorCode::kParseError, "unknown tier in " + path.string());
      q.tier = *tier;
      for (const auto& id : row.at("relevant_ids")) q.relevant_ids.insert(id.get<std::string>());
      if (!ids.insert(q.id).second) throw Error(ErrorCode::kParseError, "duplicate query id " + q.id);
      out.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
  }
  return out;
}

QueryMetrics score_ranking(const RankedIds& ranked, const RelevantIds& relevant) {
  QueryMetrics m;
  m.returned = ranked.size();
  m.empty_relevant = relevant.empty();
  m.hit3 = hit_at_k(ranked, relevant, kTopK);
  m.at3 = prf_at_k(ranked, relevant, kTopK);
  m.at20 = prf_at_k(ranked, relevant, kEvalK);
  m.ndcg20 = ndcg_at_k(ranked, relevant, kEvalK);
  for (std::size_t r = 1; r <= kPrDepth; ++r) {
    const auto s = prf_at_k(ranked, relevant, r);
    m.precision_curve.push_back(s.precision);
    m.recall_curve.push_back(s.recall);
  }
  return m;
}

ConfigurationReport aggregate(const std::vector<QueryMetrics>& rows, bool validated) {
  ConfigurationReport report;
  report.validated = validated;
  std::vector<const QueryMetrics*> selected;
  for (const auto& row : rows) {
    if (row.validated != validated) continue;
    if (row.failed) {
      ++report.failed_queries;
      continue;
    }
    selected.push_back(&row);
  }
  std::sort(selected.begin(), selected.end(),
            [](const QueryMetrics* a, const QueryMetrics* b) { return a->query_id < b->query_id; });

  auto reduce = [&](std::optional<QueryTier> tier) {
    MetricAggregate a;
    for (const auto* m : selected) {
      if (tier && m->tier != *tier) continue;
      ++a.queries;
      a.hit3 += m->hit3;
      a.precision3 += m->at3.precision;
      a.recall3 += m->at3.recall;
      a.f1_3 += m->at3.f1;
      a.precision20 += m->at20.precision;
      a.recall20 += m->at20.recall;
      a.f1_20 += m->at20.f1;
      a.ndcg20 += m->ndcg20;
    }
    if (a.queries > 0) {
      const double n = static_cast<double>(a.queries);
      for (double* v : {&a.hit3, &a.precision3, &a.recall3, &a.f1_3, &a.precision20, &a.recall20, &a.f1_20,
                        &a.ndcg20}) {
        *v /= n;
      }
    }
    return a;
  };
  report.aggregates["overall"] = reduce(std::nullopt);
  for (auto tier : {QueryTier::kGeneral, QueryTier::kFairlySpecific, QueryTier::kUltraSpecific}) {
    report.aggregates[std::string(to_string(tier))] = reduce(tier);
  }

  for (std::size_t r = 1; r <= kPrDepth; ++r) {
    PrPoint p{r, 0.0, 0.0};
    for (const auto* m : selected) {
      p.precision += m->precision_curve[r - 1];
      p.recall += m->recall_curve[r - 1];
    }
    if (!selected.empty()) {
      p.precision /= static_cast<double>(selected.size());
      p.recall /= static_cast<double>(selected.size());
    }
    report.pr_points.push_back(p);
  }
  return report;
}

EvalReport evaluate_search(const ChallengeStore& store, Providers& providers,
                           const std::vector<LabeledQuery>& queries, const EvalConfig& config) {
  if (queries.empty()) throw Error(ErrorCode::kEmptyInput, "no labeled queries to evaluate");
  EvalReport report;
  report.config = config;
  auto rows = parallel_map(queries.size() * 2, config.max_in_flight, [&](std::size_t i) {
    const auto& q = queries[i / 2];
    const bool validated = i % 2 == 0;
    QueryMetrics m;
    try {
      const auto response = search(store, providers, {q.text, kEvalK, std::max(config.retrieve_k, kEvalK), validated});
      if (response.degraded) throw Error(ErrorCode::kProviderUnavailable, "degraded response for query " + q.id);
      RankedIds ranked;
      for (const auto& r : response.results) ranked.push_back(r.challenge.id);
      m = score_ranking(ranked, q.relevant_ids);
    } catch (const Error& e) {
      m.failed = true;
      m.error = e.what();
    }
    m.query_id = q.id;
    m.tier = q.tier;
    m.validated = validated;
    return m;
  });
  std::sort(rows.begin(), rows.end(), [](const QueryMetrics& a, const QueryMetrics& b) {
    if (a.query_id != b.query_id) return a.query_id < b.query_id;
    return a.validated < b.validated;
  });
  report.rows = std::move(rows);
  report.with_filtering = aggregate(report.rows, true);
  report.without_filtering = aggregate(report.rows, false);
  return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : report.rows) rows.push_back(to_json(m));
  return {{"config", {{"k", kEvalK}, {"retrieve_k", report.config.retrieve_k}, {"pr_depth", kPrDepth}}},
          {"failed_queries",
           {{"with_filtering", report.with_filtering.failed_queries},
            {"without_filtering", report.without_filtering.failed_queries}}},
          {"with_filtering", to_json(report.with_filtering)},
          {"without_filtering", to_json(report.without_filtering)},
          {"rows", rows}};
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "query_id,tier,configuration,failed,returned,hit@3,precision@3,recall@3,f1@3,precision@20,recall@20,"
        "f1@20,ndcg@20\n";
  for (const auto& m : report.rows) {
    os << m.query_id << ',' << to_string(m.tier) << ',' << (m.validated ? "with_filtering" : "without_filtering")
       << ',' << (m.failed ? 1 : 0) << ',' << m.returned << ',' << m.hit3 << ',' << fixed(m.at3.precision) << ','
       << fixed(m.at3.recall) << ',' << fixed(m.at3.f1) << ',' << fixed(m.at20.precision) << ','
       << fixed(m.at20.recall) << ',' << fixed(m.at20.f1) << ',' << fixed(m.ndcg20) << '\n';
  }
  return os.str();
}

std::string pr_points_to_csv(const EvalReport& report) {
  std::ostringstream os;
  os << "configuration,rank,precision,recall\n";
  for (const auto* r : {&report.with_filtering, &report.without_filtering}) {
    for (const auto& p : r->pr_points) {
      os << (r->validated ? "with_filtering" : "without_filtering") << ',' << p.rank << ',' << fixed(p.precision)
         << ',' << fixed(p.recall) << '\n';
    }
  }
  return os.str();
}

}  // namespace forge
