#include "forge/collect.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "forge/embedded_data.hpp"
#include "forge/error.hpp"
#include "forge/parallel.hpp"

namespace forge {
namespace {

std::string trim_lower(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// First `limit` code points of a UTF-8 string.
std::string utf8_prefix(std::string_view text, std::size_t limit) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      if (count == limit) break;
      ++count;
    }
    ++i;
  }
  return std::string(text.substr(0, i));
}

}  // namespace

QuerySet::QuerySet(std::vector<SearchQuery> queries) : queries_(std::move(queries)) {
  std::unordered_set<std::string> ids;
  for (const auto& q : queries_) {
    if (!ids.insert(q.id).second) throw Error(ErrorCode::kParseError, "duplicate query id " + q.id);
  }
}

QuerySet QuerySet::defaults() { return parse(*embedded::lookup("queries"), "<builtin queries>"); }

QuerySet QuerySet::parse(std::string_view jsonl, std::string_view source_name) {
  std::vector<SearchQuery> queries;
  for (const auto& row : parse_jsonl(jsonl, source_name)) {
    try {
      SearchQuery q;
      q.id = row.at("id").get<std::string>();
      q.text = row.at("text").get<std::string>();
      q.theme = row.value("theme", std::string("general")) == "themed" ? QueryTheme::kThemed
                                                                       : QueryTheme::kGeneral;
      queries.push_back(std::move(q));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string(source_name) + ": " + e.what());
    }
  }
  return QuerySet(std::move(queries));
}

QuerySet QuerySet::load(const std::filesystem::path& path) {
  return parse(read_file(path), path.string());
}

Blocklist::Blocklist(const std::set<std::string>& domains) {
  for (const auto& d : domains) {
    const std::string entry = trim_lower(d);
    if (!entry.empty()) domains_.insert(entry);
  }
}

Blocklist Blocklist::defaults() { return parse(*embedded::lookup("blocklist")); }

Blocklist Blocklist::parse(std::string_view content) {
  std::set<std::string> domains;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string entry = trim_lower(line);
    if (entry.empty()) continue;
    if (entry.find("://") != std::string::npos) entry = url_host(normalize_url(entry));
    domains.insert(entry);
  }
  return Blocklist(domains);
}

Blocklist Blocklist::load(const std::filesystem::path& path) { return parse(read_file(path)); }

bool Blocklist::blocks(std::string_view normalized_url) const {
  if (domains_.empty()) return false;
  try {
    return domains_.count(base_domain(url_host(normalized_url))) > 0;
  } catch (const Error&) {
    return false;
  }
}

IngestResult ingest_records(const std::vector<SearchResultRecord>& raw) {
  IngestResult result;
  std::unordered_set<std::string> seen;
  for (const auto& record : raw) {
    ++result.n_raw_results;
    std::string url;
    try {
      url = normalize_url(record.url);
    } catch (const Error&) {
      ++result.n_bad_urls;
      continue;
    }
    if (!seen.insert(url).second) continue;
    SearchResultRecord kept = record;
    kept.url = std::move(url);
    result.records.push_back(std::move(kept));
  }
  return result;
}

IngestResult ingest_serp(const std::vector<std::filesystem::path>& files) {
  std::vector<SearchResultRecord> raw;
  for (const auto& file : files) {
    const std::string content = read_file(file);
    std::string_view rest = content;
    std::size_t line_no = 0;
    while (!rest.empty()) {
      ++line_no;
      const auto nl = rest.find('\n');
      const std::string_view line = rest.substr(0, nl);
      rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      const std::string where = file.string() + ":" + std::to_string(line_no);
      try {
        raw.push_back(nlohmann::json::parse(line).get<SearchResultRecord>());
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParseError, where + ": " + e.what());
      } catch (const Error& e) {
        throw Error(ErrorCode::kParseError, where + ": " + e.what());
      }
    }
  }
  return ingest_records(raw);
}

std::vector<SearchResultRecord> apply_blocklist(const std::vector<SearchResultRecord>& records,
                                                const Blocklist& blocklist) {
  std::vector<SearchResultRecord> out;
  out.reserve(records.size());
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [&](const SearchResultRecord& r) { return !blocklist.blocks(r.url); });
  return out;
}

FixtureFetcher::FixtureFetcher(std::map<std::string, std::string> pages) : pages_(std::move(pages)) {}

FixtureFetcher FixtureFetcher::load(const std::filesystem::path& path) {
  std::map<std::string, std::string> pages;
  for (const auto& row : read_jsonl(path)) {
    try {
      pages.emplace(normalize_url(row.at("url").get<std::string>()), row.at("html").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
  }
  return FixtureFetcher(std::move(pages));
}

std::optional<std::string> FixtureFetcher::fetch(const std::string& normalized_url) {
  const auto it = pages_.find(normalized_url);
  if (it == pages_.end()) return std::nullopt;
  return it->second;
}

int score_page(Judge& judge, const PageDocument& doc) {
  if (doc.text.empty()) throw Error(ErrorCode::kEmptyInput, "score_page: empty text for " + doc.url);
  JudgeRequest request;
  request.template_id = "page_filter";
  request.bindings = {{"url", doc.url},
                      {"title", doc.title},
                      {"snippet", doc.snippet},
                      {"text", utf8_prefix(doc.text, kScoreTextLimit)}};
  return judge.judge_json(request).value.at("score").get<int>();
}

void to_json(nlohmann::json& j, const FilterReport& r) {
  j = nlohmann::json{{"input", r.input},         {"blocked", r.blocked},   {"fetch_missing", r.fetch_missing},
                     {"empty_text", r.empty_text}, {"unscored", r.unscored}, {"dropped", r.dropped},
                     {"kept", r.kept}};
}

FilterResult filter_pages(const std::vector<SearchResultRecord>& records, const Blocklist& blocklist,
                          PageFetcher& fetcher, Judge& judge, const FilterOptions& options) {
  FilterResult result;
  result.report.input = records.size();

  const auto allowed = apply_blocklist(records, blocklist);
  result.report.blocked = records.size() - allowed.size();

  std::vector<PageDocument> docs;
  for (const auto& record : allowed) {
    auto html = fetcher.fetch(record.url);
    if (!html) {
      ++result.report.fetch_missing;
      continue;
    }
    PageDocument doc{record.url, record.title, record.snippet, html_to_text(*html), std::nullopt};
    if (doc.text.empty()) {
      ++result.report.empty_text;
      continue;
    }
    docs.push_back(std::move(doc));
  }

  const auto scores = parallel_map(docs.size(), options.max_in_flight, [&](std::size_t i) -> std::optional<int> {
    try {
      return score_page(judge, docs[i]);
    } catch (const Error& e) {
      spdlog::warn("page {} left unscored: {}", docs[i].url, e.what());
      return std::nullopt;
    }
  });

  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!scores[i]) {
      ++result.report.unscored;
      continue;
    }
    docs[i].likelihood = *scores[i];
    result.scored.push_back(docs[i]);
    if (*scores[i] >= options.keep_threshold) {
      result.kept.push_back(docs[i]);
    } else {
      ++result.report.dropped;
    }
  }
  result.report.kept = result.kept.size();
  return result;
}

}  // namespace forge
