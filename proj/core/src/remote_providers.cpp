#include "forge/remote_providers.hpp"

#include <httplib.h>

#include <thread>

#include "forge/error.hpp"
#include "forge/parallel.hpp"

namespace forge {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (base_url.empty() || scheme_end == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "provider base_url must be absolute, got '" + base_url + "'");
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  SplitUrl out;
  out.origin = base_url.substr(0, path_start);
  if (path_start != std::string::npos) out.prefix = base_url.substr(path_start);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint, const std::string& path,
                         const nlohmann::json& body, const RetryPolicy& retry) {
  const SplitUrl url = split_base_url(endpoint.base_url);
  const std::string payload = body.dump();
  std::string last_error;

  const int attempts = std::max(1, retry.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    httplib::Client client(url.origin);
    client.set_connection_timeout(endpoint.timeout);
    client.set_read_timeout(endpoint.timeout);
    client.set_write_timeout(endpoint.timeout);
    if (!endpoint.api_key.empty()) client.set_bearer_token_auth(endpoint.api_key);

    auto res = client.Post(url.prefix + path, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
    } else if (res->status >= 200 && res->status < 300) {
      auto parsed = nlohmann::json::parse(res->body, nullptr, false);
      if (parsed.is_discarded()) {
        throw Error(ErrorCode::kProviderUnavailable, url.origin + path + " returned non-JSON body");
      }
      return parsed;
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
    } else {
      throw Error(ErrorCode::kProviderUnavailable,
                  url.origin + path + " returned HTTP " + std::to_string(res->status));
    }
    if (attempt < attempts) std::this_thread::sleep_for(backoff_delay(retry, attempt));
  }
  throw Error(ErrorCode::kProviderUnavailable, url.origin + path + " failed after " +
                                                   std::to_string(attempts) + " attempts: " + last_error);
}

RemoteEmbedder::RemoteEmbedder(HttpEndpoint endpoint, std::string model, RemoteOptions options)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), options_(options) {}

std::string RemoteEmbedder::tag() const { return "remote/" + model_; }

std::vector<EmbeddingVector> RemoteEmbedder::embed_raw(std::span<const std::string> texts) {
  const std::size_t batch = std::max<std::size_t>(1, options_.batch_size);
  const std::size_t n_batches = (texts.size() + batch - 1) / batch;

  auto batches = parallel_map(n_batches, options_.max_in_flight, [&](std::size_t b) {
    const auto first = texts.begin() + static_cast<std::ptrdiff_t>(b * batch);
    const auto last = texts.begin() + static_cast<std::ptrdiff_t>(std::min(texts.size(), (b + 1) * batch));
    const nlohmann::json body{{"model", model_}, {"input", std::vector<std::string>(first, last)}};
    const auto reply = post_json(endpoint_, "/embeddings", body, options_.retry);

    std::vector<EmbeddingVector> out(static_cast<std::size_t>(last - first));
    try {
      std::size_t position = 0;
      for (const auto& item : reply.at("data")) {
        const std::size_t index = item.contains("index") ? item.at("index").get<std::size_t>() : position;
        if (index >= out.size()) throw Error(ErrorCode::kProviderUnavailable, "embedding index out of range");
        out[index] = EmbeddingVector(item.at("embedding").get<std::vector<float>>());
        ++position;
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kProviderUnavailable, std::string("malformed embedding reply: ") + e.what());
    }
    return out;
  });

  std::vector<EmbeddingVector> vectors;
  vectors.reserve(texts.size());
  for (auto& b : batches) {
    for (auto& v : b) vectors.push_back(std::move(v));
  }
  return vectors;
}

RemoteJudgeBackend::RemoteJudgeBackend(HttpEndpoint endpoint, std::string model, RemoteOptions options)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), options_(options) {}

std::string RemoteJudgeBackend::tag() const { return "remote/" + model_; }

std::string RemoteJudgeBackend::complete(const JudgeRequest&, const std::string& prompt,
                                         bool reformat) {
  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", "You reply with a single JSON value and nothing else."}});
  messages.push_back({{"role", "user"}, {"content", prompt}});
  if (reformat) {
    messages.push_back({{"role", "user"},
                        {"content",
                         "Your previous reply was not valid JSON in the requested format. "
                         "Reply again with JSON only."}});
  }
  const nlohmann::json body{{"model", model_},
                            {"messages", messages},
                            {"temperature", 0},
                            {"response_format", {{"type", "json_object"}}}};
  const auto reply = post_json(endpoint_, "/chat/completions", body, options_.retry);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProviderUnavailable, std::string("malformed chat reply: ") + e.what());
  }
}

RemoteReranker::RemoteReranker(HttpEndpoint endpoint, std::string model, RemoteOptions options)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), options_(options) {}

std::string RemoteReranker::tag() const { return "remote/" + model_; }

std::vector<RerankHit> RemoteReranker::rerank_raw(const std::string& query,
                                                  std::span<const std::string> candidates) {
  const nlohmann::json body{{"model", model_},
                            {"query", query},
                            {"documents", std::vector<std::string>(candidates.begin(), candidates.end())},
                            {"top_n", candidates.size()},
                            {"return_documents", false}};
  const auto reply = post_json(endpoint_, "/rerank", body, options_.retry);
  std::vector<RerankHit> hits;
  try {
    const auto& rows = reply.contains("data") ? reply.at("data") : reply.at("results");
    for (const auto& row : rows) {
      const double score = row.contains("score") ? row.at("score").get<double>()
                                                 : row.at("relevance_score").get<double>();
      hits.push_back({row.at("index").get<std::size_t>(), score});
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProviderUnavailable, std::string("malformed rerank reply: ") + e.what());
  }
  return hits;
}

}  // namespace forge
