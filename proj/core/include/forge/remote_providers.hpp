#pragma once

#include <chrono>
#include <string>

#include "forge/providers.hpp"

namespace forge {

struct HttpEndpoint {
  std::string base_url;  // scheme://host[:port][/prefix]
  std::string api_key;
  std::chrono::seconds timeout{60};
};

struct RemoteOptions {
  RetryPolicy retry;
  std::size_t max_in_flight = 8;
  std::size_t batch_size = 64;
};

/// OpenAI-style POST {base}/embeddings {model, input} -> {data: [{index, embedding}]}.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(HttpEndpoint endpoint, std::string model, RemoteOptions options = {});
  std::string tag() const override;

 protected:
  std::vector<EmbeddingVector> embed_raw(std::span<const std::string> texts) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  RemoteOptions options_;
};

/// OpenAI-compatible chat completion with a JSON response format:
/// POST {base}/chat/completions -> choices[0].message.content.
class RemoteJudgeBackend final : public JudgeBackend {
 public:
  RemoteJudgeBackend(HttpEndpoint endpoint, std::string model, RemoteOptions options = {});
  std::string complete(const JudgeRequest& request, const std::string& prompt,
                       bool reformat) override;
  std::string tag() const override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  RemoteOptions options_;
};

/// POST {base}/rerank {model, query, documents} -> {data: [{index, score}]}.
class RemoteReranker final : public Reranker {
 public:
  RemoteReranker(HttpEndpoint endpoint, std::string model, RemoteOptions options = {});
  std::string tag() const override;

 protected:
  std::vector<RerankHit> rerank_raw(const std::string& query,
                                    std::span<const std::string> candidates) override;

 private:
  HttpEndpoint endpoint_;
  std::string model_;
  RemoteOptions options_;
};

/// POSTs JSON with bearer auth, retrying transport failures, 429 and 5xx per
/// the policy. Other statuses and exhausted retries raise kProviderUnavailable.
nlohmann::json post_json(const HttpEndpoint& endpoint, const std::string& path,
                         const nlohmann::json& body, const RetryPolicy& retry);

}  // namespace forge
