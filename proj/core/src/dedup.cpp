#include "forge/dedup.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "forge/error.hpp"
#include "forge/minhash.hpp"
#include "forge/parallel.hpp"

namespace forge {
namespace {

std::size_t code_points(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

class StageTimer {
 public:
  StageTimer(DedupAudit& audit, std::string name)
      : audit_(audit), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    audit_.timings[name_] += std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
  }

 private:
  DedupAudit& audit_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

bool uses_prefilter(DedupMethod m) {
  return m == DedupMethod::kFull || m == DedupMethod::kNoJudge || m == DedupMethod::kNoCorrelation;
}

bool uses_judge(DedupMethod m) { return m == DedupMethod::kFull || m == DedupMethod::kNoCorrelation; }

bool uses_greedy(DedupMethod m) { return m == DedupMethod::kFull || m == DedupMethod::kNoJudge; }

}  // namespace

PrefilterResult prefilter_pairs(const std::vector<Challenge>& challenges, const Stopwords& stopwords,
                                const PrefilterThresholds& thresholds) {
  struct Kept {
    const Challenge* challenge;
    std::string action;
    std::string title;
  };
  PrefilterResult result;
  std::vector<Kept> kept;
  std::unordered_map<std::string, std::string> first_with_action;

  for (const auto& c : challenges) {
    std::string action = normalize_for_match(c.daily_action, stopwords).normalized;
    std::string title = normalize_for_match(c.title, stopwords).normalized;

    std::optional<std::string> keeper;
    if (!action.empty()) {
      if (const auto it = first_with_action.find(action); it != first_with_action.end()) {
        keeper = it->second;
      } else {
        for (const auto& k : kept) {
          if (k.action.empty()) continue;
          const double longest = static_cast<double>(std::max(k.action.size(), action.size()));
          const double gap = std::abs(static_cast<double>(k.action.size()) - static_cast<double>(action.size()));
          if (gap > (1.0 - thresholds.action_similarity) * longest) continue;
          if (levenshtein_similarity(k.action, action) >= thresholds.action_similarity &&
              levenshtein_similarity(k.title, title) >= thresholds.title_similarity) {
            keeper = k.challenge->id;
            break;
          }
        }
      }
    }

    if (keeper) {
      result.removed.emplace(c.id, *keeper);
      continue;
    }
    if (!action.empty()) first_with_action.emplace(action, c.id);
    kept.push_back({&c, std::move(action), std::move(title)});
    result.survivors.push_back(c);
  }
  return result;
}

std::string_view to_string(Band band) {
  switch (band) {
    case Band::kMatch: return "match";
    case Band::kAmbiguous: return "ambiguous";
    case Band::kNonMatch: return "non_match";
  }
  return "non_match";
}

Band classify_similarity(double similarity, const BandThresholds& thresholds) {
  if (similarity >= thresholds.high) return Band::kMatch;
  if (similarity < thresholds.low) return Band::kNonMatch;
  return Band::kAmbiguous;
}

BandingResult pairwise_band(const std::vector<std::string>& ids,
                            const std::vector<EmbeddingVector>& vectors,
                            const BandThresholds& thresholds) {
  if (!(thresholds.low >= 0.0 && thresholds.low < thresholds.high && thresholds.high <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "band thresholds need 0 <= low < high <= 1");
  }
  if (ids.size() != vectors.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "ids and vectors differ in length");
  }
  for (const auto& v : vectors) {
    if (v.dim() != vectors.front().dim()) throw Error(ErrorCode::kDimensionMismatch, "ragged vectors");
  }

  BandingResult result;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double sim = dot(vectors[i], vectors[j]);
      const Band band = classify_similarity(sim, thresholds);
      if (band == Band::kNonMatch) {
        ++result.non_match;
        continue;
      }
      PairVerdict v;
      v.a_id = std::min(ids[i], ids[j]);
      v.b_id = std::max(ids[i], ids[j]);
      v.similarity = sim;
      v.band = band;
      v.final = band == Band::kMatch;
      result.pairs.push_back(std::move(v));
    }
  }
  return result;
}

JudgeBandStats judge_band(std::vector<PairVerdict>& pairs,
                          const std::map<std::string, const Challenge*>& by_id, Judge& judge,
                          std::size_t max_in_flight) {
  std::vector<std::size_t> ambiguous;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].band == Band::kAmbiguous) ambiguous.push_back(i);
  }

  // -1 failure, 0 distinct, 1 duplicate.
  const auto verdicts = parallel_map(ambiguous.size(), max_in_flight, [&](std::size_t k) -> int {
    const PairVerdict& pair = pairs[ambiguous[k]];
    try {
      const Challenge& a = *by_id.at(pair.a_id);
      const Challenge& b = *by_id.at(pair.b_id);
      JudgeRequest request;
      request.template_id = "pair";
      request.bindings = {{"a_title", a.title},
                          {"a_action", a.daily_action},
                          {"b_title", b.title},
                          {"b_action", b.daily_action}};
      return judge.judge_json(request).value.at("duplicate").get<bool>() ? 1 : 0;
    } catch (const Error& e) {
      spdlog::warn("pair ({}, {}) left unmatched: {}", pair.a_id, pair.b_id, e.what());
      return -1;
    }
  });

  JudgeBandStats stats;
  for (std::size_t k = 0; k < ambiguous.size(); ++k) {
    PairVerdict& pair = pairs[ambiguous[k]];
    ++stats.judged;
    if (verdicts[k] < 0) {
      ++stats.failures;
      pair.judge_verdict.reset();
      pair.final = false;
      continue;
    }
    pair.judge_verdict = verdicts[k] == 1;
    pair.final = *pair.judge_verdict;
    if (pair.final) ++stats.judged_true;
  }
  return stats;
}

MatchGraph build_match_graph(const std::vector<std::string>& ids, const std::vector<PairVerdict>& pairs) {
  MatchGraph graph(ids);
  for (const auto& p : pairs) {
    if (p.final) graph.add_edge(p.a_id, p.b_id);
  }
  return graph;
}

MatchGraph minhash_pairs(const std::vector<Challenge>& challenges, const Stopwords& stopwords,
                         const MinHashOptions& options) {
  if (!(options.jaccard_threshold > 0.0 && options.jaccard_threshold <= 1.0)) {
    throw Error(ErrorCode::kDomainError, "jaccard threshold must lie in (0, 1]");
  }
  const MinHasher hasher(options.num_permutations, options.seed);
  std::vector<std::vector<std::uint64_t>> signatures;
  std::vector<std::string> ids;
  signatures.reserve(challenges.size());
  for (const auto& c : challenges) {
    ids.push_back(c.id);
    const auto normalized = normalize_for_match(c.daily_action, stopwords).normalized;
    signatures.push_back(hasher.signature(char_shingles(normalized, options.shingle_size)));
  }
  MatchGraph graph(ids);
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    for (std::size_t j = i + 1; j < signatures.size(); ++j) {
      if (MinHasher::estimate(signatures[i], signatures[j]) >= options.jaccard_threshold) {
        graph.add_edge(ids[i], ids[j]);
      }
    }
  }
  return graph;
}

std::vector<Challenge> pick_representatives(std::vector<Cluster>& clusters,
                                            const std::vector<Challenge>& challenges) {
  std::unordered_map<std::string, const Challenge*> by_id;
  for (const auto& c : challenges) by_id.emplace(c.id, &c);

  std::vector<Challenge> out;
  out.reserve(clusters.size());
  for (auto& cluster : clusters) {
    const Challenge* best = nullptr;
    std::size_t best_len = 0;
    for (const auto& id : cluster.member_ids) {
      const Challenge* c = by_id.at(id);
      const std::size_t len = code_points(c->description);
      if (!best || len > best_len || (len == best_len && c->id < best->id)) {
        best = c;
        best_len = len;
      }
    }
    if (!best) throw Error(ErrorCode::kInvalidRequest, "empty cluster");
    cluster.representative_id = best->id;
    out.push_back(*best);
  }
  std::sort(out.begin(), out.end(), [](const Challenge& a, const Challenge& b) { return a.id < b.id; });
  return out;
}

std::string_view to_string(DedupMethod method) {
  switch (method) {
    case DedupMethod::kFull: return "full";
    case DedupMethod::kNoJudge: return "no_judge";
    case DedupMethod::kNoCorrelation: return "no_correlation";
    case DedupMethod::kVectorTransitive: return "vector_transitive";
    case DedupMethod::kMinHash: return "minhash";
  }
  return "full";
}

std::optional<DedupMethod> parse_dedup_method(std::string_view text) {
  for (auto m : {DedupMethod::kFull, DedupMethod::kNoJudge, DedupMethod::kNoCorrelation,
                 DedupMethod::kVectorTransitive, DedupMethod::kMinHash}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const DedupAudit& audit) {
  j = nlohmann::json{{"input", audit.input},
                     {"prefilter_removed", audit.prefilter_removed},
                     {"pairs_match", audit.pairs_match},
                     {"pairs_ambiguous", audit.pairs_ambiguous},
                     {"judge_true", audit.judge_true},
                     {"judge_failures", audit.judge_failures},
                     {"clusters", audit.clusters},
                     {"output", audit.output}};
}

void to_json(nlohmann::json& j, const RemovedEntry& entry) {
  j = nlohmann::json{{"removed_id", entry.removed_id}, {"kept_id", entry.kept_id}, {"stage", entry.stage}};
}

DedupOutcome dedup_run(const std::vector<Challenge>& challenges, Providers& providers,
                       const Stopwords& stopwords, const DedupConfig& config) {
  DedupOutcome outcome;
  DedupAudit& audit = outcome.audit;
  audit.input = challenges.size();

  std::vector<Challenge> survivors;
  std::map<std::string, std::string> prefilter_removed;
  if (uses_prefilter(config.method)) {
    StageTimer timer(audit, "prefilter");
    auto pre = prefilter_pairs(challenges, stopwords, config.prefilter);
    survivors = std::move(pre.survivors);
    prefilter_removed = std::move(pre.removed);
  } else {
    survivors = challenges;
  }
  audit.prefilter_removed = prefilter_removed.size();

  std::vector<std::string> ids;
  ids.reserve(survivors.size());
  for (const auto& c : survivors) ids.push_back(c.id);

  MatchGraph graph(ids);
  if (config.method == DedupMethod::kMinHash) {
    StageTimer timer(audit, "minhash");
    graph = minhash_pairs(survivors, stopwords, config.minhash);
    audit.pairs_match = graph.edge_count();
  } else if (survivors.size() > 1) {
    std::vector<EmbeddingVector> vectors;
    {
      StageTimer timer(audit, "embed");
      std::vector<std::string> actions;
      actions.reserve(survivors.size());
      for (const auto& c : survivors) actions.push_back(c.daily_action);
      vectors = providers.embedder->embed_batch(actions);
    }
    BandingResult banding;
    {
      StageTimer timer(audit, "band");
      banding = pairwise_band(ids, vectors, config.bands);
    }
    for (const auto& p : banding.pairs) {
      if (p.band == Band::kMatch) ++audit.pairs_match;
      if (p.band == Band::kAmbiguous) ++audit.pairs_ambiguous;
    }
    if (uses_judge(config.method)) {
      StageTimer timer(audit, "judge");
      std::map<std::string, const Challenge*> by_id;
      for (const auto& c : survivors) by_id.emplace(c.id, &c);
      const auto stats = judge_band(banding.pairs, by_id, *providers.judge, config.max_in_flight);
      audit.judge_true = stats.judged_true;
      audit.judge_failures = stats.failures;
    }
    graph = build_match_graph(ids, banding.pairs);
  }

  std::vector<Cluster> clusters;
  {
    StageTimer timer(audit, "cluster");
    clusters = uses_greedy(config.method) ? cluster_greedy(ids, graph) : cluster_transitive(graph);
  }
  outcome.deduplicated = pick_representatives(clusters, survivors);
  audit.clusters = clusters.size();
  audit.output = outcome.deduplicated.size();

  std::unordered_map<std::string, std::string> representative_of;
  for (const auto& cluster : clusters) {
    for (const auto& member : cluster.member_ids) {
      representative_of.emplace(member, cluster.representative_id);
      if (member != cluster.representative_id) {
        outcome.removed.push_back({member, cluster.representative_id, "cluster"});
      }
    }
  }
  for (const auto& [removed, kept] : prefilter_removed) {
    outcome.removed.push_back({removed, representative_of.at(kept), "prefilter"});
  }
  std::sort(outcome.removed.begin(), outcome.removed.end(),
            [](const RemovedEntry& a, const RemovedEntry& b) { return a.removed_id < b.removed_id; });
  return outcome;
}

}  // namespace forge
