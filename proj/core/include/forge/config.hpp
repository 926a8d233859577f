#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/dedup.hpp"
#include "forge/providers.hpp"

namespace forge {

struct PipelinePaths {
  std::vector<std::filesystem::path> serp;
  std::optional<std::filesystem::path> pages;
  std::optional<std::filesystem::path> stopwords;  // built-in list when unset
  std::optional<std::filesystem::path> blocklist;  // built-in list when unset
  std::optional<std::filesystem::path> queries;    // labeled evaluation queries
  std::optional<std::filesystem::path> static_dir;
  std::filesystem::path work_dir = "forge_out";
};

struct PipelineConfig {
  ProviderSettings providers;
  DedupConfig dedup;
  int keep_threshold = 6;
  PipelinePaths paths;
  std::uint64_t seed = 42;
  std::size_t search_k = 5;
  std::size_t retrieve_k = 50;
  bool search_validate = true;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  std::size_t audit_sample = 100;

  nlohmann::json effective;  // merged JSON the fields were read from
};

/// Every key with its default value.
nlohmann::json default_config_json();

/// Applies "a.b.c=value" overrides; values parse as JSON, else as strings.
void apply_override(nlohmann::json& config, const std::string& assignment);

/// Merges `user` over the defaults and reads the typed fields. Relative paths
/// resolve against `base_dir`. Throws Error(kConfigError).
PipelineConfig config_from_json(const nlohmann::json& user, const std::filesystem::path& base_dir);

PipelineConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

/// SHA-256 of the effective configuration's canonical dump.
std::string config_hash(const PipelineConfig& config);

}  // namespace forge
