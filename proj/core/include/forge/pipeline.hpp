#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/config.hpp"
#include "forge/error.hpp"

namespace forge {

enum class Stage { kCollect, kFilter, kExtract, kDedup, kIndex, kSearch, kServe, kEval, kAudit };

std::string_view to_string(Stage stage);
std::optional<Stage> parse_stage(std::string_view text);

// Artifact names inside the work directory.
namespace artifacts {
inline constexpr std::string_view kSerpResults = "serp_results.jsonl";
inline constexpr std::string_view kPagesFiltered = "pages_filtered.jsonl";
inline constexpr std::string_view kFilterReport = "filter_report.json";
inline constexpr std::string_view kChallenges = "challenges.jsonl";
inline constexpr std::string_view kExtractionReport = "extraction_report.json";
inline constexpr std::string_view kChallengesDedup = "challenges_dedup.jsonl";
inline constexpr std::string_view kDedupAudit = "dedup_audit.json";
inline constexpr std::string_view kRemovedMap = "removed_map.jsonl";
inline constexpr std::string_view kStore = "challenges.store";
inline constexpr std::string_view kEvalReport = "eval_report.json";
inline constexpr std::string_view kEvalCsv = "eval_report.csv";
inline constexpr std::string_view kPrPoints = "pr_points.csv";
inline constexpr std::string_view kAuditPrecision = "audit_precision.jsonl";
inline constexpr std::string_view kAuditRecall = "audit_recall.jsonl";
inline constexpr std::string_view kManifest = "manifest.json";
}  // namespace artifacts

struct StageOptions {
  std::optional<std::string> wish;  // search
  std::optional<std::size_t> k;     // search
  std::optional<bool> validate;     // search
  std::ostream* out = nullptr;      // search output; stdout when null
};

struct StageResult {
  std::vector<std::filesystem::path> outputs;
  nlohmann::json counts = nlohmann::json::object();
};

/// Runs one stage. Inputs must exist (Error(kMissingInput) otherwise); outputs
/// go to the work directory and are recorded in manifest.json together with
/// the config hash, seed, input and output checksums and counts.
StageResult run_stage(Stage stage, const PipelineConfig& config, const StageOptions& options = {});

/// 0 ok, 2 config, 3 missing input, 4 provider, 5 internal.
int exit_code_for(ErrorCode code);

}  // namespace forge
