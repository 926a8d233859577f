#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

enum class Origin { kExtracted, kFixture };

std::string_view to_string(Origin origin);
std::optional<Origin> parse_origin(std::string_view text);

/// One 30-day challenge: a wish paired with a daily action, plus the title and
/// description lifted from the source page.
struct Challenge {
  std::string id;
  std::string title;
  std::string description;
  std::string wish;
  std::string daily_action;
  std::string source_url;
  Origin created_from = Origin::kExtracted;

  bool operator==(const Challenge&) const = default;
};

struct SearchResultRecord {
  std::string url;
  std::string title;
  std::string snippet;
  std::string query_id;

  bool operator==(const SearchResultRecord&) const = default;
};

struct PageDocument {
  std::string url;
  std::string title;
  std::string snippet;
  std::string text;
  std::optional<int> likelihood;

  bool operator==(const PageDocument&) const = default;
};

struct CorpusStats {
  std::size_t n_raw_results = 0;
  std::size_t n_unique_urls = 0;
  std::size_t n_filtered_pages = 0;
  std::size_t n_extracted = 0;
  std::size_t n_deduped = 0;
};

// Validation

enum class FieldErrorKind { kMissingField, kEmptyField, kBadUrl };

struct FieldError {
  FieldErrorKind kind;
  std::string field;

  bool operator==(const FieldError&) const = default;
};

std::string describe(const FieldError& error);

using RawFields = std::map<std::string, std::string>;
using ValidationResult = std::variant<Challenge, std::vector<FieldError>>;

/// Checks a raw record against the Challenge invariants. Every violation is
/// reported, not just the first. The URL may be given as "source_url" or
/// "url"; it is normalized on success. "description", "id" and
/// "created_from" are optional.
ValidationResult validate_challenge(const RawFields& record);

/// Canonical form of an absolute URL: lowercase scheme and host, no default
/// port, no fragment, no trailing slash, tracking parameters (utm_*, fbclid,
/// gclid) dropped and the remaining query parameters sorted.
/// Throws Error(kBadUrl) when the input is not an absolute URL.
std::string normalize_url(std::string_view raw);

/// Host part of a normalized URL ("https://www.a.com/x" -> "www.a.com").
std::string url_host(std::string_view normalized_url);

/// Registrable base domain, e.g. "www.pinterest.co.uk" -> "pinterest.co.uk".
/// Uses a compact table of common multi-label public suffixes rather than the
/// full public suffix list.
std::string base_domain(std::string_view host);

/// Challenge ids are "c" followed by a zero-padded insertion counter.
std::string challenge_id(std::size_t counter);

// JSON mapping. Field names match the struct member names.
void to_json(nlohmann::json& j, const Challenge& c);
void from_json(const nlohmann::json& j, Challenge& c);
void to_json(nlohmann::json& j, const SearchResultRecord& r);
void from_json(const nlohmann::json& j, SearchResultRecord& r);
void to_json(nlohmann::json& j, const PageDocument& d);
void from_json(const nlohmann::json& j, PageDocument& d);
void to_json(nlohmann::json& j, const CorpusStats& s);

// JSONL helpers. Reading reports malformed lines as Error(kParseError) with
// "file:line" in the message.
std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);
std::vector<nlohmann::json> parse_jsonl(std::string_view content, std::string_view source_name);
void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows);

template <typename T>
std::vector<nlohmann::json> to_json_rows(const std::vector<T>& items) {
  std::vector<nlohmann::json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.emplace_back(item);
  return rows;
}

std::vector<Challenge> read_challenges(const std::filesystem::path& path);
void write_challenges(const std::filesystem::path& path, const std::vector<Challenge>& challenges);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace forge
