#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "forge/model.hpp"
#include "forge/providers.hpp"

namespace forge {

enum class QueryTheme { kGeneral, kThemed };

struct SearchQuery {
  std::string id;
  std::string text;
  QueryTheme theme = QueryTheme::kGeneral;
};

class QuerySet {
 public:
  /// The 25 collection queries (11 general, 14 themed).
  static QuerySet defaults();
  static QuerySet parse(std::string_view jsonl, std::string_view source_name);
  static QuerySet load(const std::filesystem::path& path);

  /// Throws Error(kParseError) on duplicate ids.
  explicit QuerySet(std::vector<SearchQuery> queries);

  const std::vector<SearchQuery>& queries() const noexcept { return queries_; }

 private:
  std::vector<SearchQuery> queries_;
};

class Blocklist {
 public:
  Blocklist() = default;
  explicit Blocklist(const std::set<std::string>& domains);

  /// The 12 social-media and e-commerce base domains.
  static Blocklist defaults();
  /// One domain per line; "#" starts a comment.
  static Blocklist parse(std::string_view content);
  static Blocklist load(const std::filesystem::path& path);

  bool blocks(std::string_view normalized_url) const;
  const std::set<std::string>& domains() const noexcept { return domains_; }

 private:
  std::set<std::string> domains_;
};

struct IngestResult {
  std::vector<SearchResultRecord> records;  // url holds the normalized URL
  std::size_t n_raw_results = 0;
  std::size_t n_bad_urls = 0;
};

/// Reads SERP fixture files (JSONL {query_id, url, title, snippet}) and keeps
/// the first record per normalized URL, in first-seen order. Records whose URL
/// does not parse are skipped and counted. Throws Error(kParseError).
IngestResult ingest_serp(const std::vector<std::filesystem::path>& files);
IngestResult ingest_records(const std::vector<SearchResultRecord>& raw);

/// Drops records whose registrable base domain is blocked.
std::vector<SearchResultRecord> apply_blocklist(const std::vector<SearchResultRecord>& records,
                                                const Blocklist& blocklist);

/// Visible text of an HTML document: script, style, nav, header, footer, head
/// and similar subtrees are removed, block elements become line breaks and
/// whitespace is collapsed. Never fails; malformed markup degrades gracefully.
std::string html_to_text(std::string_view html);

/// Page fetching is pluggable; the fixture fetcher serves stored HTML.
class PageFetcher {
 public:
  virtual ~PageFetcher() = default;
  virtual std::optional<std::string> fetch(const std::string& normalized_url) = 0;
};

/// Serves pages from a JSONL file of {url, html}.
class FixtureFetcher final : public PageFetcher {
 public:
  explicit FixtureFetcher(std::map<std::string, std::string> pages);
  static FixtureFetcher load(const std::filesystem::path& path);
  std::optional<std::string> fetch(const std::string& normalized_url) override;

 private:
  std::map<std::string, std::string> pages_;
};

inline constexpr std::size_t kScoreTextLimit = 4000;

/// Likelihood (0..10) that the page holds usable challenges, asked of the
/// judge with title, snippet and the first 4,000 characters of text.
int score_page(Judge& judge, const PageDocument& doc);

struct FilterOptions {
  int keep_threshold = 6;
  std::size_t max_in_flight = 8;
};

struct FilterReport {
  std::size_t input = 0;
  std::size_t blocked = 0;
  std::size_t fetch_missing = 0;
  std::size_t empty_text = 0;
  std::size_t unscored = 0;  // judge failures, excluded with a warning
  std::size_t dropped = 0;   // scored below the threshold
  std::size_t kept = 0;
};

void to_json(nlohmann::json& j, const FilterReport& r);

struct FilterResult {
  std::vector<PageDocument> kept;    // likelihood set and >= threshold
  std::vector<PageDocument> scored;  // every page that received a score
  FilterReport report;
};

/// Blocklist, fetch, extract text and score. Pages keep input order.
FilterResult filter_pages(const std::vector<SearchResultRecord>& records, const Blocklist& blocklist,
                          PageFetcher& fetcher, Judge& judge, const FilterOptions& options);

}  // namespace forge
