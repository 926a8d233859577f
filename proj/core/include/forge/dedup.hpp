#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/clustering.hpp"
#include "forge/model.hpp"
#include "forge/providers.hpp"
#include "forge/text_match.hpp"

namespace forge {

struct PrefilterThresholds {
  double action_similarity = 0.92;
  double title_similarity = 0.80;
};

struct PrefilterResult {
  std::vector<Challenge> survivors;
  std::map<std::string, std::string> removed;  // removed id -> kept id
};

/// Removes a challenge in favor of the earliest surviving one whose normalized
/// daily action is equal, or whose daily action and title are both within the
/// Levenshtein similarity thresholds.
PrefilterResult prefilter_pairs(const std::vector<Challenge>& challenges, const Stopwords& stopwords,
                                const PrefilterThresholds& thresholds = {});

enum class Band { kMatch, kAmbiguous, kNonMatch };

std::string_view to_string(Band band);

struct BandThresholds {
  double low = 0.625;
  double high = 0.7;
};

/// sim >= high is a match, sim < low a non-match, anything between ambiguous.
Band classify_similarity(double similarity, const BandThresholds& thresholds);

struct PairVerdict {
  std::string a_id;  // a_id < b_id
  std::string b_id;
  double similarity = 0.0;
  Band band = Band::kNonMatch;
  std::optional<bool> judge_verdict;
  bool final = false;
};

struct BandingResult {
  std::vector<PairVerdict> pairs;  // match and ambiguous only, in (i, j) scan order
  std::size_t non_match = 0;
};

/// Exhaustive pairwise dot products over unit vectors. Non-matches are
/// counted but not stored. Throws Error(kDimensionMismatch) or
/// Error(kDomainError) for thresholds outside 0 <= low < high <= 1.
BandingResult pairwise_band(const std::vector<std::string>& ids,
                            const std::vector<EmbeddingVector>& vectors,
                            const BandThresholds& thresholds);

struct JudgeBandStats {
  std::size_t judged = 0;
  std::size_t judged_true = 0;
  std::size_t failures = 0;
};

/// Resolves ambiguous pairs with the pair template. A failed judgment leaves
/// the pair a non-match and is counted. Other bands pass through untouched.
JudgeBandStats judge_band(std::vector<PairVerdict>& pairs,
                          const std::map<std::string, const Challenge*>& by_id, Judge& judge,
                          std::size_t max_in_flight = 8);

/// Graph of pairs whose final flag is set.
MatchGraph build_match_graph(const std::vector<std::string>& ids,
                             const std::vector<PairVerdict>& pairs);

struct MinHashOptions {
  double jaccard_threshold = 0.5;
  std::size_t num_permutations = 128;
  std::size_t shingle_size = 3;
  std::uint64_t seed = 1;
};

/// Edges between challenges whose estimated Jaccard similarity of normalized
/// daily-action shingles reaches the threshold.
MatchGraph minhash_pairs(const std::vector<Challenge>& challenges, const Stopwords& stopwords,
                         const MinHashOptions& options = {});

/// Sets each cluster's representative (longest description in code points,
/// ties to the smallest id) and returns one challenge per cluster ordered by id.
std::vector<Challenge> pick_representatives(std::vector<Cluster>& clusters,
                                            const std::vector<Challenge>& challenges);

enum class DedupMethod {
  kFull,              // prefilter, bands, judge, greedy clustering
  kNoJudge,           // ablation: vector matches only, greedy clustering
  kNoCorrelation,     // ablation: full matching, transitive clustering
  kVectorTransitive,  // baseline: vector matches only, transitive clustering
  kMinHash,           // baseline: MinHash matches, transitive clustering
};

std::string_view to_string(DedupMethod method);
std::optional<DedupMethod> parse_dedup_method(std::string_view text);

struct DedupConfig {
  DedupMethod method = DedupMethod::kFull;
  BandThresholds bands;
  PrefilterThresholds prefilter;
  MinHashOptions minhash;
  std::size_t max_in_flight = 8;
};

struct RemovedEntry {
  std::string removed_id;
  std::string kept_id;
  std::string stage;  // "prefilter" or "cluster"

  bool operator==(const RemovedEntry&) const = default;
};

struct DedupAudit {
  std::size_t input = 0;
  std::size_t prefilter_removed = 0;
  std::size_t pairs_match = 0;
  std::size_t pairs_ambiguous = 0;
  std::size_t judge_true = 0;
  std::size_t judge_failures = 0;
  std::size_t clusters = 0;
  std::size_t output = 0;
  std::map<std::string, std::chrono::milliseconds> timings;  // not serialized
};

/// Counts only, so the serialized audit is reproducible.
void to_json(nlohmann::json& j, const DedupAudit& audit);
void to_json(nlohmann::json& j, const RemovedEntry& entry);

struct DedupOutcome {
  std::vector<Challenge> deduplicated;
  std::vector<RemovedEntry> removed;  // ordered by removed id; kept ids are survivors
  DedupAudit audit;
};

/// Runs the configured method. Embeddings are taken of daily actions.
DedupOutcome dedup_run(const std::vector<Challenge>& challenges, Providers& providers,
                       const Stopwords& stopwords, const DedupConfig& config = {});

}  // namespace forge
