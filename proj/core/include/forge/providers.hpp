#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<float> values) : values_(std::move(values)) {}

  std::size_t dim() const noexcept { return values_.size(); }
  const std::vector<float>& values() const noexcept { return values_; }
  std::span<const float> view() const noexcept { return values_; }

  double norm() const;
  /// Scales to unit L2 norm. A zero vector is left unchanged.
  void normalize();

  bool operator==(const EmbeddingVector&) const = default;

 private:
  std::vector<float> values_;
};

/// Inner product accumulated in double. Throws Error(kDimensionMismatch).
double dot(const EmbeddingVector& a, const EmbeddingVector& b);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double jitter = 0.25;  // +/- fraction applied to each backoff
};

// Pauses between attempts: initial_backoff * 2^(attempt-1), jittered.
std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt);

// Embedding

class Embedder {
 public:
  virtual ~Embedder() = default;

  /// One unit-normalized vector per input, in input order.
  /// Throws Error(kEmptyInput) on an empty list or an empty text.
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts);
  EmbeddingVector embed(const std::string& text);

  /// Identifies the embedding configuration; stored next to persisted vectors.
  virtual std::string tag() const = 0;

  std::size_t calls() const noexcept { return calls_.load(); }

 protected:
  virtual std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

// Structured judgments

struct JudgeRequest {
  std::string template_id;
  nlohmann::json bindings = nlohmann::json::object();
  std::string schema_id;  // empty: use the template's schema
};

struct JudgeResponse {
  nlohmann::json value;
  std::string raw;
};

struct PromptTemplate {
  std::string id;
  std::string text;
  std::string schema_id;
  std::vector<std::string> variables;  // {{name}} placeholders found in text
};

class PromptRegistry {
 public:
  /// The page_filter, extract, pair and validate templates shipped with the library.
  static PromptRegistry builtin();

  /// Built-in templates, with any <id>.txt file in `dir` replacing the text.
  static PromptRegistry with_overrides(const std::filesystem::path& dir);

  void add(PromptTemplate tmpl);
  const PromptTemplate* find(std::string_view id) const;

  /// Substitutes bindings into the template. Strings are inserted verbatim,
  /// other JSON values as compact JSON.
  /// Throws Error(kUnknownTemplate) or Error(kMissingBinding).
  std::string render(const JudgeRequest& request) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

/// Returns the canonical value when `value` conforms to the schema, nullopt otherwise.
/// Schemas: "likelihood" {score: int 0..10}; "duplicate" {duplicate: bool};
/// "challenge_list" array of objects with string fields (bare or under
/// "challenges"); "relevance_list" array of bools, one per bindings["items"]
/// entry (bare or under "relevant").
std::optional<nlohmann::json> conform_to_schema(std::string_view schema_id,
                                                const nlohmann::json& value,
                                                const nlohmann::json& bindings);

/// Extracts the first JSON value from model output, tolerating markdown fences.
std::optional<nlohmann::json> parse_model_json(std::string_view raw);

class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  /// Raw model reply. `reformat` is set on the retry after a non-conforming reply.
  virtual std::string complete(const JudgeRequest& request, const std::string& prompt,
                               bool reformat) = 0;
  virtual std::string tag() const = 0;
};

class Judge {
 public:
  explicit Judge(std::shared_ptr<JudgeBackend> backend,
                 PromptRegistry prompts = PromptRegistry::builtin());

  /// Renders the template, queries the backend and validates the reply. A
  /// non-conforming reply gets one reformat retry before Error(kSchemaViolation).
  JudgeResponse judge_json(const JudgeRequest& request);

  const PromptRegistry& prompts() const noexcept { return prompts_; }
  std::string tag() const { return backend_->tag(); }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::shared_ptr<JudgeBackend> backend_;
  PromptRegistry prompts_;
  std::atomic<std::size_t> calls_{0};
};

// Reranking

struct RerankHit {
  std::size_t index;
  double score;

  bool operator==(const RerankHit&) const = default;
};

class Reranker {
 public:
  virtual ~Reranker() = default;

  /// A permutation of candidate indices, scores non-increasing (ties by index).
  /// Throws Error(kEmptyInput) on no candidates.
  std::vector<RerankHit> rerank(const std::string& query, std::span<const std::string> candidates);

  virtual std::string tag() const = 0;
  std::size_t calls() const noexcept { return calls_.load(); }

 protected:
  virtual std::vector<RerankHit> rerank_raw(const std::string& query,
                                            std::span<const std::string> candidates) = 0;

 private:
  std::atomic<std::size_t> calls_{0};
};

// Wiring

struct Providers {
  std::shared_ptr<Embedder> embedder;
  std::shared_ptr<Judge> judge;
  std::shared_ptr<Reranker> reranker;
  std::size_t max_in_flight = 8;
};

struct ProviderSettings {
  std::string mode = "mock";  // "mock" or "remote"
  std::string embedding_model = "text-embedding-3-large";
  std::string judge_model = "gemini-2.0-flash";
  std::string rerank_model = "bge-reranker-v2-m3";
  std::string embedding_base_url;
  std::string judge_base_url;
  std::string rerank_base_url;
  std::size_t mock_dim = 64;
  std::uint64_t seed = 0;
  std::size_t max_in_flight = 8;
  RetryPolicy retry;
  std::optional<std::filesystem::path> mock_table;
  std::optional<std::filesystem::path> prompts_dir;
};

/// Builds mock or remote providers. Remote credentials come from the
/// EMBED_API_KEY, JUDGE_API_KEY and RERANK_API_KEY environment variables.
Providers make_providers(const ProviderSettings& settings);

}  // namespace forge
