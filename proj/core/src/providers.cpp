#include "forge/providers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>

#include "forge/error.hpp"
#include "forge/mock_providers.hpp"
#include "forge/remote_providers.hpp"

namespace forge {

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (float v : values_) sum += static_cast<double>(v) * v;
  return std::sqrt(sum);
}

void EmbeddingVector::normalize() {
  const double n = norm();
  if (n == 0.0) return;
  for (float& v : values_) v = static_cast<float>(v / n);
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "vector dims " + std::to_string(a.dim()) + " and " +
                                                   std::to_string(b.dim()));
  }
  double sum = 0.0;
  const auto& x = a.values();
  const auto& y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) sum += static_cast<double>(x[i]) * y[i];
  return sum;
}

std::chrono::milliseconds backoff_delay(const RetryPolicy& policy, int attempt) {
  thread_local std::mt19937_64 rng{std::random_device{}()};
  const double base = static_cast<double>(policy.initial_backoff.count()) *
                      std::pow(2.0, std::max(0, attempt - 1));
  std::uniform_real_distribution<double> spread(1.0 - policy.jitter, 1.0 + policy.jitter);
  return std::chrono::milliseconds(static_cast<long long>(base * spread(rng)));
}

std::vector<EmbeddingVector> Embedder::embed_batch(std::span<const std::string> texts) {
  if (texts.empty()) throw Error(ErrorCode::kEmptyInput, "embed_batch: no texts");
  for (const auto& t : texts) {
    if (t.empty()) throw Error(ErrorCode::kEmptyInput, "embed_batch: empty text");
  }
  ++calls_;
  auto vectors = embed_raw(texts);
  if (vectors.size() != texts.size()) {
    throw Error(ErrorCode::kProviderUnavailable, "embedding provider returned " +
                                                     std::to_string(vectors.size()) + " vectors for " +
                                                     std::to_string(texts.size()) + " texts");
  }
  for (auto& v : vectors) {
    if (v.dim() == 0 || v.dim() != vectors.front().dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "embedding provider returned ragged vectors");
    }
    v.normalize();
  }
  return vectors;
}

EmbeddingVector Embedder::embed(const std::string& text) {
  return std::move(embed_batch(std::span<const std::string>(&text, 1)).front());
}

Judge::Judge(std::shared_ptr<JudgeBackend> backend, PromptRegistry prompts)
    : backend_(std::move(backend)), prompts_(std::move(prompts)) {}

JudgeResponse Judge::judge_json(const JudgeRequest& request) {
  const PromptTemplate* tmpl = prompts_.find(request.template_id);
  if (!tmpl) throw Error(ErrorCode::kUnknownTemplate, "unknown template '" + request.template_id + "'");
  const std::string& schema = request.schema_id.empty() ? tmpl->schema_id : request.schema_id;
  const std::string prompt = prompts_.render(request);

  std::string raw;
  for (int attempt = 0; attempt < 2; ++attempt) {
    ++calls_;
    raw = backend_->complete(request, prompt, attempt > 0);
    if (auto parsed = parse_model_json(raw)) {
      if (auto value = conform_to_schema(schema, *parsed, request.bindings)) {
        return JudgeResponse{std::move(*value), raw};
      }
    }
  }
  throw Error(ErrorCode::kSchemaViolation, "judge reply for '" + request.template_id +
                                               "' does not match schema '" + schema + "'");
}

std::vector<RerankHit> Reranker::rerank(const std::string& query,
                                        std::span<const std::string> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::kEmptyInput, "rerank: no candidates");
  ++calls_;
  auto hits = rerank_raw(query, candidates);

  std::vector<bool> seen(candidates.size(), false);
  for (const auto& hit : hits) {
    if (hit.index >= candidates.size() || seen[hit.index]) {
      throw Error(ErrorCode::kProviderUnavailable, "reranker returned an invalid permutation");
    }
    seen[hit.index] = true;
  }
  if (hits.size() != candidates.size()) {
    throw Error(ErrorCode::kProviderUnavailable, "reranker dropped candidates");
  }
  std::stable_sort(hits.begin(), hits.end(), [](const RerankHit& a, const RerankHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });
  return hits;
}

namespace {

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace

Providers make_providers(const ProviderSettings& settings) {
  PromptRegistry prompts = settings.prompts_dir ? PromptRegistry::with_overrides(*settings.prompts_dir)
                                                : PromptRegistry::builtin();
  Providers p;
  p.max_in_flight = settings.max_in_flight;

  if (settings.mode == "mock") {
    MockJudgeTable table = settings.mock_table ? MockJudgeTable::load(*settings.mock_table)
                                               : MockJudgeTable{};
    auto embedder = std::make_shared<MockEmbedder>(settings.seed, settings.mock_dim);
    p.embedder = embedder;
    p.reranker = std::make_shared<MockReranker>(embedder);
    p.judge = std::make_shared<Judge>(std::make_shared<MockJudgeBackend>(std::move(table)),
                                      std::move(prompts));
    return p;
  }
  if (settings.mode == "remote") {
    RemoteOptions options;
    options.retry = settings.retry;
    options.max_in_flight = settings.max_in_flight;
    p.embedder = std::make_shared<RemoteEmbedder>(
        HttpEndpoint{settings.embedding_base_url, env_or_empty("EMBED_API_KEY")},
        settings.embedding_model, options);
    if (!settings.rerank_base_url.empty()) {
      p.reranker = std::make_shared<RemoteReranker>(
          HttpEndpoint{settings.rerank_base_url, env_or_empty("RERANK_API_KEY")},
          settings.rerank_model, options);
    }
    p.judge = std::make_shared<Judge>(
        std::make_shared<RemoteJudgeBackend>(
            HttpEndpoint{settings.judge_base_url, env_or_empty("JUDGE_API_KEY")},
            settings.judge_model, options),
        std::move(prompts));
    return p;
  }
  throw Error(ErrorCode::kConfigError, "providers.mode must be 'mock' or 'remote', got '" +
                                           settings.mode + "'");
}

}  // namespace forge
