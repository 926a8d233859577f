#include "forge/search.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "forge/error.hpp"

namespace forge {

void check_request(const SearchRequest& request) {
  if (request.wish.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kInvalidRequest, "wish must be nonempty");
  }
  if (request.retrieve_k == 0 || request.retrieve_k > kMaxRetrieve) {
    throw Error(ErrorCode::kInvalidRequest,
                "retrieve_k must be in 1.." + std::to_string(kMaxRetrieve));
  }
  const std::size_t max_k = std::min(kMaxResults, request.retrieve_k);
  if (request.k == 0 || request.k > max_k) {
    throw Error(ErrorCode::kInvalidRequest, "k must be in 1.." + std::to_string(max_k));
  }
}

void to_json(nlohmann::json& j, const SearchResult& r) {
  j = r.challenge;
  j["rank"] = r.rank;
  j["retrieval_score"] = r.retrieval_score;
  j["rerank_score"] = r.rerank_score ? nlohmann::json(*r.rerank_score) : nlohmann::json();
  j["validated"] = r.validated;
}

void to_json(nlohmann::json& j, const SearchResponse& r) {
  j = nlohmann::json{{"query", r.query}, {"degraded", r.degraded}, {"results", r.results}};
}

std::vector<Candidate> retrieve(const ChallengeStore& store, Embedder& embedder, const std::string& wish,
                                std::size_t retrieve_k) {
  if (store.provider_tag() != embedder.tag()) {
    throw Error(ErrorCode::kProviderMismatch, "store was built with '" + store.provider_tag() +
                                                  "' but the embedder is '" + embedder.tag() + "'");
  }
  if (store.empty()) return {};
  EmbeddingVector query;
  try {
    query = embedder.embed(wish);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kEmptyInput) throw Error(ErrorCode::kInvalidRequest, e.what());
    throw Error(ErrorCode::kServiceUnavailable, std::string("embedding failed: ") + e.what());
  }
  std::vector<Candidate> out;
  for (const auto& hit : topk_indices(store, query, retrieve_k)) {
    out.push_back(Candidate{hit.index, hit.score, std::nullopt, false});
  }
  return out;
}

std::vector<Candidate> rerank_candidates(const ChallengeStore& store, Reranker& reranker,
                                         const std::string& wish, std::vector<Candidate> candidates,
                                         bool& degraded) {
  if (candidates.empty()) return candidates;
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const auto& c : candidates) texts.push_back(store.challenges()[c.index].daily_action);
  std::vector<RerankHit> hits;
  try {
    hits = reranker.rerank(wish, texts);
  } catch (const Error& e) {
    spdlog::warn("rerank failed, keeping retrieval order: {}", e.what());
    degraded = true;
    return candidates;
  }
  std::vector<Candidate> out;
  out.reserve(hits.size());
  for (const auto& hit : hits) {
    Candidate c = candidates[hit.index];
    c.rerank_score = hit.score;
    out.push_back(c);
  }
  return out;
}

std::vector<Candidate> validate_candidates(const ChallengeStore& store, Judge& judge, const std::string& wish,
                                           std::vector<Candidate> candidates, bool& degraded) {
  if (candidates.empty()) return candidates;
  const std::size_t depth = std::min(kValidationDepth, candidates.size());
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < depth; ++i) {
    const auto& c = store.challenges()[candidates[i].index];
    items.push_back({{"title", c.title}, {"daily_action", c.daily_action}});
  }
  nlohmann::json flags;
  try {
    flags = judge.judge_json({"validate", {{"wish", wish}, {"items", items}}, ""}).value;
  } catch (const Error& e) {
    spdlog::warn("validation failed, returning unvalidated results: {}", e.what());
    degraded = true;
    return candidates;
  }
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < depth; ++i) {
    if (flags.at(i).get<bool>()) {
      Candidate c = candidates[i];
      c.validated = true;
      out.push_back(c);
    }
  }
  return out;
}

SearchResponse search(const ChallengeStore& store, Providers& providers, const SearchRequest& request) {
  check_request(request);
  SearchResponse response;
  response.query = request.wish;
  auto candidates = retrieve(store, *providers.embedder, request.wish, request.retrieve_k);
  if (providers.reranker) {
    candidates = rerank_candidates(store, *providers.reranker, request.wish, std::move(candidates),
                                   response.degraded);
  }
  if (request.validate) {
    if (providers.judge) {
      candidates = validate_candidates(store, *providers.judge, request.wish, std::move(candidates),
                                       response.degraded);
    } else {
      response.degraded = true;
    }
  }
  if (candidates.size() > request.k) candidates.resize(request.k);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    response.results.push_back(
        SearchResult{store.challenges()[c.index], c.retrieval_score, c.rerank_score, c.validated, i + 1});
  }
  return response;
}

}  // namespace forge
