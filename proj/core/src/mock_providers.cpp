#include "forge/mock_providers.hpp"

#include <cctype>

#include "forge/error.hpp"
#include "forge/model.hpp"

namespace forge {
namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::pair<std::string, std::string> unordered_key(const std::string& a, const std::string& b) {
  return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string binding(const JudgeRequest& request, const char* name) {
  if (!request.bindings.contains(name) || !request.bindings.at(name).is_string()) return {};
  return request.bindings.at(name).get<std::string>();
}

[[noreturn]] void unavailable(const std::string& key) {
  throw Error(ErrorCode::kProviderUnavailable, "mock judge unavailable for '" + key + "'");
}

std::string answer_from_table(const MockJudgeTable& table, const JudgeRequest& request) {
  const std::string& id = request.template_id;
  if (id == "page_filter") {
    const std::string url = binding(request, "url");
    if (table.unavailable.count(url)) unavailable(url);
    const auto it = table.page_scores.find(url);
    return nlohmann::json{{"score", it == table.page_scores.end() ? table.default_score : it->second}}
        .dump();
  }
  if (id == "extract") {
    const std::string url = binding(request, "url");
    if (table.unavailable.count(url)) unavailable(url);
    const auto it = table.extractions.find(url);
    return nlohmann::json{
        {"challenges", it == table.extractions.end() ? nlohmann::json::array() : it->second}}
        .dump();
  }
  if (id == "pair") {
    const auto key = unordered_key(binding(request, "a_action"), binding(request, "b_action"));
    if (table.unavailable.count(key.first + '\x1f' + key.second)) unavailable(key.first);
    const auto it = table.duplicates.find(key);
    return nlohmann::json{
        {"duplicate", it == table.duplicates.end() ? table.default_duplicate : it->second}}
        .dump();
  }
  if (id == "validate") {
    const std::string wish = binding(request, "wish");
    if (table.unavailable.count(wish)) unavailable(wish);
    nlohmann::json flags = nlohmann::json::array();
    if (request.bindings.contains("items")) {
      for (const auto& item : request.bindings.at("items")) {
        const std::string action = item.value("daily_action", std::string());
        const auto it = table.relevance.find({wish, action});
        flags.push_back(it == table.relevance.end() ? table.default_relevant : it->second);
      }
    }
    return nlohmann::json{{"relevant", flags}}.dump();
  }
  return "I am not sure how to answer that.";
}

}  // namespace

MockEmbedder::MockEmbedder(std::uint64_t seed, std::size_t dim) : seed_(seed), dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kConfigError, "mock embedder dim must be positive");
}

std::string MockEmbedder::tag() const {
  return "mock-hashbag/dim=" + std::to_string(dim_) + "/seed=" + std::to_string(seed_);
}

std::vector<std::string> MockEmbedder::tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<EmbeddingVector> MockEmbedder::embed_raw(std::span<const std::string> texts) {
  const std::uint64_t salt = mix(seed_);
  auto bucket = [&](std::string_view token) {
    return static_cast<std::size_t>(mix(fnv1a(token) ^ salt) % dim_);
  };
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<float> counts(dim_, 0.0f);
    const auto tokens = tokenize(text);
    if (tokens.empty()) {
      counts[bucket("")] = 1.0f;
    }
    for (const auto& token : tokens) counts[bucket(token)] += 1.0f;
    out.emplace_back(std::move(counts));
  }
  return out;
}

MockReranker::MockReranker(std::shared_ptr<MockEmbedder> embedder) : embedder_(std::move(embedder)) {}

std::string MockReranker::tag() const { return "mock-cosine-rerank/" + embedder_->tag(); }

std::vector<RerankHit> MockReranker::rerank_raw(const std::string& query,
                                                std::span<const std::string> candidates) {
  const EmbeddingVector q = embedder_->embed(query);
  const auto vectors = embedder_->embed_batch(candidates);
  std::vector<RerankHit> hits;
  hits.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) hits.push_back({i, dot(q, vectors[i])});
  return hits;
}

void MockJudgeTable::set_duplicate(const std::string& action_a, const std::string& action_b,
                                   bool value) {
  duplicates[unordered_key(action_a, action_b)] = value;
}

void MockJudgeTable::set_relevant(const std::string& wish, const std::string& action, bool value) {
  relevance[{wish, action}] = value;
}

MockJudgeTable MockJudgeTable::from_json(const nlohmann::json& j) {
  MockJudgeTable t;
  try {
    if (j.contains("page_scores")) {
      for (const auto& [url, score] : j.at("page_scores").items()) {
        t.page_scores[normalize_url(url)] = score.get<int>();
      }
    }
    t.default_score = j.value("default_score", 0);
    if (j.contains("extractions")) {
      for (const auto& [url, items] : j.at("extractions").items()) {
        t.extractions[normalize_url(url)] = items;
      }
    }
    if (j.contains("duplicates")) {
      for (const auto& row : j.at("duplicates")) {
        t.set_duplicate(row.at(0).get<std::string>(), row.at(1).get<std::string>(), row.at(2).get<bool>());
      }
    }
    t.default_duplicate = j.value("default_duplicate", false);
    if (j.contains("relevance")) {
      for (const auto& row : j.at("relevance")) {
        t.set_relevant(row.at(0).get<std::string>(), row.at(1).get<std::string>(), row.at(2).get<bool>());
      }
    }
    t.default_relevant = j.value("default_relevant", true);
    if (j.contains("unavailable")) {
      for (const auto& key : j.at("unavailable")) t.unavailable.insert(key.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, std::string("malformed mock judge table: ") + e.what());
  }
  return t;
}

MockJudgeTable MockJudgeTable::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + e.what());
  }
}

MockJudgeBackend::MockJudgeBackend(MockJudgeTable table)
    : responder_([t = std::move(table)](const JudgeRequest& request, bool) {
        return answer_from_table(t, request);
      }) {}

MockJudgeBackend::MockJudgeBackend(Responder responder) : responder_(std::move(responder)) {}

std::string MockJudgeBackend::complete(const JudgeRequest& request, const std::string&,
                                       bool reformat) {
  return responder_(request, reformat);
}

Providers make_mock_providers(MockJudgeTable table, std::uint64_t seed, std::size_t max_in_flight) {
  Providers p;
  auto embedder = std::make_shared<MockEmbedder>(seed);
  p.embedder = embedder;
  p.reranker = std::make_shared<MockReranker>(embedder);
  p.judge = std::make_shared<Judge>(std::make_shared<MockJudgeBackend>(std::move(table)));
  p.max_in_flight = max_in_flight;
  return p;
}

}  // namespace forge
