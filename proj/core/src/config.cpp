#include "forge/config.hpp"

#include <fstream>

#include "forge/checksum.hpp"
#include "forge/error.hpp"

namespace forge {
namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::kConfigError, message); }

// Overlays `user` onto `base`; every user key must exist in the defaults.
void merge_into(nlohmann::json& base, const nlohmann::json& user, const std::string& prefix) {
  if (!user.is_object()) config_error("config section '" + prefix + "' must be an object");
  for (const auto& [key, value] : user.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!base.contains(key)) config_error("unknown config key '" + path + "'");
    auto& slot = base[key];
    if (slot.is_object() && !value.is_null()) {
      merge_into(slot, value, path);
    } else {
      slot = value;
    }
  }
}

const nlohmann::json& at_path(const nlohmann::json& j, const std::string& path) {
  const nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (!node->is_object() || !node->contains(key)) config_error("missing config key '" + path + "'");
    node = &node->at(key);
    if (dot == std::string::npos) return *node;
    start = dot + 1;
  }
}

template <typename T>
T get(const nlohmann::json& j, const std::string& path) {
  const auto& node = at_path(j, path);
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!node.is_boolean()) config_error("'" + path + "' must be true or false");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!node.is_number_integer() || node.get<std::int64_t>() < 0) config_error("'" + path + "' must be a non-negative integer");
    } else if constexpr (std::is_integral_v<T>) {
      if (!node.is_number_integer()) config_error("'" + path + "' must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!node.is_number()) config_error("'" + path + "' must be a number");
    }
    return node.get<T>();
  } catch (const nlohmann::json::exception& e) {
    config_error("'" + path + "': " + e.what());
  }
}

std::optional<std::filesystem::path> optional_path(const nlohmann::json& j, const std::string& path,
                                                   const std::filesystem::path& base_dir) {
  const auto& node = at_path(j, path);
  if (node.is_null()) return std::nullopt;
  if (!node.is_string() || node.get<std::string>().empty()) config_error("'" + path + "' must be a path string or null");
  std::filesystem::path p = node.get<std::string>();
  return p.is_absolute() ? p : (base_dir / p).lexically_normal();
}

std::string url_or_empty(const nlohmann::json& j, const std::string& path) {
  const auto& node = at_path(j, path);
  if (node.is_null()) return {};
  if (!node.is_string()) config_error("'" + path + "' must be a string");
  return node.get<std::string>();
}

}  // namespace

nlohmann::json default_config_json() {
  const ProviderSettings p;
  const DedupConfig d;
  return {
      {"seed", 42},
      {"providers",
       {{"mode", p.mode},
        {"embedding", {{"model", p.embedding_model}, {"base_url", "https://api.openai.com/v1"}, {"dim", p.mock_dim}}},
        {"judge",
         {{"model", p.judge_model}, {"base_url", "https://generativelanguage.googleapis.com/v1beta/openai"}}},
        {"rerank", {{"model", p.rerank_model}, {"base_url", nullptr}}},
        {"max_in_flight", p.max_in_flight},
        {"retry", {{"max_attempts", p.retry.max_attempts}, {"initial_backoff_ms", p.retry.initial_backoff.count()}}},
        {"mock", {{"table", nullptr}}}}},
      {"dedup",
       {{"method", to_string(d.method)},
        {"low", d.bands.low},
        {"high", d.bands.high},
        {"prefilter_action", d.prefilter.action_similarity},
        {"prefilter_title", d.prefilter.title_similarity},
        {"jaccard_threshold", d.minhash.jaccard_threshold}}},
      {"collect", {{"keep_threshold", 6}}},
      {"paths",
       {{"serp", nlohmann::json::array()},
        {"pages", nullptr},
        {"stopwords", nullptr},
        {"blocklist", nullptr},
        {"queries", nullptr},
        {"prompts", nullptr},
        {"static_dir", nullptr},
        {"work_dir", "forge_out"}}},
      {"search", {{"k", 5}, {"retrieve_k", 50}, {"validate", true}}},
      {"serve", {{"host", "127.0.0.1"}, {"port", 8080}}},
      {"audit", {{"sample_size", 100}}},
  };
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) config_error("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  auto value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) config_error("bad override key: " + key);
    if (!node->is_object()) *node = nlohmann::json::object();
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

PipelineConfig config_from_json(const nlohmann::json& user, const std::filesystem::path& base_dir) {
  nlohmann::json merged = default_config_json();
  if (!user.is_null()) merge_into(merged, user, "");

  PipelineConfig c;
  c.effective = merged;
  c.seed = get<std::uint64_t>(merged, "seed");

  auto& p = c.providers;
  p.mode = get<std::string>(merged, "providers.mode");
  if (p.mode != "mock" && p.mode != "remote") config_error("providers.mode must be 'mock' or 'remote'");
  p.embedding_model = get<std::string>(merged, "providers.embedding.model");
  p.embedding_base_url = url_or_empty(merged, "providers.embedding.base_url");
  p.mock_dim = get<std::size_t>(merged, "providers.embedding.dim");
  if (p.mock_dim == 0) config_error("providers.embedding.dim must be positive");
  p.judge_model = get<std::string>(merged, "providers.judge.model");
  p.judge_base_url = url_or_empty(merged, "providers.judge.base_url");
  p.rerank_model = get<std::string>(merged, "providers.rerank.model");
  p.rerank_base_url = url_or_empty(merged, "providers.rerank.base_url");
  p.max_in_flight = get<std::size_t>(merged, "providers.max_in_flight");
  if (p.max_in_flight == 0) config_error("providers.max_in_flight must be positive");
  p.retry.max_attempts = get<int>(merged, "providers.retry.max_attempts");
  if (p.retry.max_attempts < 1) config_error("providers.retry.max_attempts must be at least 1");
  p.retry.initial_backoff = std::chrono::milliseconds(get<std::size_t>(merged, "providers.retry.initial_backoff_ms"));
  p.mock_table = optional_path(merged, "providers.mock.table", base_dir);
  p.prompts_dir = optional_path(merged, "paths.prompts", base_dir);
  p.seed = c.seed;

  auto& d = c.dedup;
  const auto method = parse_dedup_method(get<std::string>(merged, "dedup.method"));
  if (!method) config_error("unknown dedup.method '" + get<std::string>(merged, "dedup.method") + "'");
  d.method = *method;
  d.bands.low = get<double>(merged, "dedup.low");
  d.bands.high = get<double>(merged, "dedup.high");
  if (!(0.0 <= d.bands.low && d.bands.low < d.bands.high && d.bands.high <= 1.0)) {
    config_error("dedup thresholds need 0 <= low < high <= 1");
  }
  d.prefilter.action_similarity = get<double>(merged, "dedup.prefilter_action");
  d.prefilter.title_similarity = get<double>(merged, "dedup.prefilter_title");
  d.minhash.jaccard_threshold = get<double>(merged, "dedup.jaccard_threshold");
  for (double v : {d.prefilter.action_similarity, d.prefilter.title_similarity, d.minhash.jaccard_threshold}) {
    if (!(v >= 0.0 && v <= 1.0)) config_error("dedup similarity thresholds must lie in [0, 1]");
  }
  d.max_in_flight = p.max_in_flight;

  c.keep_threshold = get<int>(merged, "collect.keep_threshold");
  if (c.keep_threshold < 0 || c.keep_threshold > 10) config_error("collect.keep_threshold must be in 0..10");

  const auto& serp = at_path(merged, "paths.serp");
  if (serp.is_string()) {
    c.paths.serp.push_back(*optional_path(merged, "paths.serp", base_dir));
  } else if (serp.is_array()) {
    for (const auto& entry : serp) {
      if (!entry.is_string()) config_error("paths.serp entries must be strings");
      std::filesystem::path path = entry.get<std::string>();
      c.paths.serp.push_back(path.is_absolute() ? path : (base_dir / path).lexically_normal());
    }
  } else {
    config_error("paths.serp must be a path or a list of paths");
  }
  c.paths.pages = optional_path(merged, "paths.pages", base_dir);
  c.paths.stopwords = optional_path(merged, "paths.stopwords", base_dir);
  c.paths.blocklist = optional_path(merged, "paths.blocklist", base_dir);
  c.paths.queries = optional_path(merged, "paths.queries", base_dir);
  c.paths.static_dir = optional_path(merged, "paths.static_dir", base_dir);
  c.paths.work_dir = *optional_path(merged, "paths.work_dir", base_dir);

  c.search_k = get<std::size_t>(merged, "search.k");
  c.retrieve_k = get<std::size_t>(merged, "search.retrieve_k");
  c.search_validate = get<bool>(merged, "search.validate");
  c.serve_host = get<std::string>(merged, "serve.host");
  c.serve_port = get<int>(merged, "serve.port");
  if (c.serve_port < 0 || c.serve_port > 65535) config_error("serve.port must be in 0..65535");
  c.audit_sample = get<std::size_t>(merged, "audit.sample_size");
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  nlohmann::json user = nlohmann::json::object();
  std::filesystem::path base_dir = std::filesystem::current_path();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) config_error("cannot read config file " + path.string());
    user = nlohmann::json::parse(in, nullptr, false);
    if (user.is_discarded()) config_error("config file " + path.string() + " is not valid JSON");
    base_dir = std::filesystem::absolute(path).parent_path();
  }
  for (const auto& o : overrides) apply_override(user, o);
  return config_from_json(user, base_dir);
}

std::string config_hash(const PipelineConfig& config) { return sha256_hex(config.effective.dump()); }

}  // namespace forge
