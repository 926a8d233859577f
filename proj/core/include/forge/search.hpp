#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "forge/model.hpp"
#include "forge/providers.hpp"
#include "forge/store.hpp"

namespace forge {

inline constexpr std::size_t kMaxResults = 50;
inline constexpr std::size_t kMaxRetrieve = 200;
inline constexpr std::size_t kValidationDepth = 20;

struct SearchRequest {
  std::string wish;
  std::size_t k = 5;
  std::size_t retrieve_k = 50;
  bool validate = true;
};

/// Throws Error(kInvalidRequest) unless the wish is nonempty and
/// 1 <= k <= min(50, retrieve_k), retrieve_k <= 200.
void check_request(const SearchRequest& request);

struct Candidate {
  std::size_t index;  // position in the store
  double retrieval_score = 0.0;
  std::optional<double> rerank_score;
  bool validated = false;
};

struct SearchResult {
  Challenge challenge;
  double retrieval_score = 0.0;
  std::optional<double> rerank_score;
  bool validated = false;
  std::size_t rank = 0;
};

struct SearchResponse {
  std::string query;
  bool degraded = false;
  std::vector<SearchResult> results;
};

void to_json(nlohmann::json& j, const SearchResult& r);
void to_json(nlohmann::json& j, const SearchResponse& r);

/// Embeds the wish and takes the exact top `retrieve_k`. Embedding failures
/// surface as Error(kServiceUnavailable); a store built by a different
/// embedder is Error(kProviderMismatch).
std::vector<Candidate> retrieve(const ChallengeStore& store, Embedder& embedder,
                                const std::string& wish, std::size_t retrieve_k);

/// Reorders by reranker relevance over daily actions. On provider failure the
/// input order is kept and `degraded` is set.
std::vector<Candidate> rerank_candidates(const ChallengeStore& store, Reranker& reranker,
                                         const std::string& wish, std::vector<Candidate> candidates,
                                         bool& degraded);

/// One judge call over the first min(20, n) candidates; keeps those judged
/// relevant, in order, and drops the rest. On judge failure the input is
/// returned unchanged and `degraded` is set.
std::vector<Candidate> validate_candidates(const ChallengeStore& store, Judge& judge,
                                           const std::string& wish,
                                           std::vector<Candidate> candidates, bool& degraded);

/// retrieve -> rerank -> validate (optional) -> truncate to k -> rank.
SearchResponse search(const ChallengeStore& store, Providers& providers,
                      const SearchRequest& request);

}  // namespace forge
