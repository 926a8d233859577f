#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/providers.hpp"

namespace forge {

/// Hashed bag of tokens: lowercase, split on non-alphanumerics, hash each
/// token into one of `dim` buckets, count, L2-normalize. The seed perturbs
/// the hash. Texts with no tokens land in a single fixed bucket.
class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::uint64_t seed = 0, std::size_t dim = 64);

  std::string tag() const override;
  std::size_t dim() const noexcept { return dim_; }

  static std::vector<std::string> tokenize(std::string_view text);

 protected:
  std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) override;

 private:
  std::uint64_t seed_;
  std::size_t dim_;
};

/// Scores candidates by cosine between mock embeddings of query and candidate.
class MockReranker final : public Reranker {
 public:
  explicit MockReranker(std::shared_ptr<MockEmbedder> embedder);
  std::string tag() const override;

 protected:
  std::vector<RerankHit> rerank_raw(const std::string& query,
                                    std::span<const std::string> candidates) override;

 private:
  std::shared_ptr<MockEmbedder> embedder_;
};

/// Lookup tables answering each built-in template. Unlisted keys fall back
/// to the defaults. Pair keys are unordered.
struct MockJudgeTable {
  std::map<std::string, int> page_scores;  // url -> 0..10
  int default_score = 0;

  std::map<std::string, nlohmann::json> extractions;  // url -> array of items

  std::map<std::pair<std::string, std::string>, bool> duplicates;  // daily actions
  bool default_duplicate = false;

  std::map<std::pair<std::string, std::string>, bool> relevance;  // (wish, daily action)
  bool default_relevant = true;

  // Keys (url, or "a\x1f" "b" for pairs, or wish for validation) whose calls
  // fail with kProviderUnavailable.
  std::set<std::string> unavailable;

  void set_duplicate(const std::string& action_a, const std::string& action_b, bool value);
  void set_relevant(const std::string& wish, const std::string& action, bool value);

  /// Reads the JSON table format used by fixtures:
  /// {"page_scores": {url: n}, "default_score": n, "extractions": {url: [...]},
  ///  "duplicates": [[a, b, bool]], "default_duplicate": bool,
  ///  "relevance": [[wish, action, bool]], "default_relevant": bool,
  ///  "unavailable": [key]}
  static MockJudgeTable from_json(const nlohmann::json& j);
  static MockJudgeTable load(const std::filesystem::path& path);
};

class MockJudgeBackend final : public JudgeBackend {
 public:
  using Responder = std::function<std::string(const JudgeRequest&, bool reformat)>;

  explicit MockJudgeBackend(MockJudgeTable table);
  explicit MockJudgeBackend(Responder responder);

  std::string complete(const JudgeRequest& request, const std::string& prompt,
                       bool reformat) override;
  std::string tag() const override { return "mock-judge"; }

 private:
  Responder responder_;
};

/// Convenience bundle of mock providers sharing one embedder.
Providers make_mock_providers(MockJudgeTable table, std::uint64_t seed = 0,
                              std::size_t max_in_flight = 8);

}  // namespace forge
