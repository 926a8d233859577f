#include "forge/model.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "forge/error.hpp"

namespace forge {
namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string string_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  if (!j.at(key).is_string()) {
    throw Error(ErrorCode::kParseError, std::string("field '") + key + "' is not a string");
  }
  return j.at(key).get<std::string>();
}

}  // namespace

std::string_view to_string(Origin origin) {
  return origin == Origin::kFixture ? "fixture" : "extracted";
}

std::optional<Origin> parse_origin(std::string_view text) {
  if (text == "extracted") return Origin::kExtracted;
  if (text == "fixture") return Origin::kFixture;
  return std::nullopt;
}

std::string describe(const FieldError& error) {
  switch (error.kind) {
    case FieldErrorKind::kMissingField: return "MissingField(" + error.field + ")";
    case FieldErrorKind::kEmptyField: return "EmptyField(" + error.field + ")";
    case FieldErrorKind::kBadUrl: return "BadUrl(" + error.field + ")";
  }
  return "FieldError";
}

ValidationResult validate_challenge(const RawFields& record) {
  std::vector<FieldError> errors;
  Challenge c;

  auto required = [&](const char* name, std::string& out) {
    const auto it = record.find(name);
    if (it == record.end()) {
      errors.push_back({FieldErrorKind::kMissingField, name});
      return;
    }
    out = trim(it->second);
    if (out.empty()) errors.push_back({FieldErrorKind::kEmptyField, name});
  };
  required("title", c.title);
  required("wish", c.wish);
  required("daily_action", c.daily_action);

  if (const auto it = record.find("description"); it != record.end()) c.description = trim(it->second);
  if (const auto it = record.find("id"); it != record.end()) c.id = trim(it->second);
  if (const auto it = record.find("created_from"); it != record.end()) {
    c.created_from = parse_origin(trim(it->second)).value_or(Origin::kExtracted);
  }

  auto url_it = record.find("source_url");
  if (url_it == record.end()) url_it = record.find("url");
  if (url_it == record.end()) {
    errors.push_back({FieldErrorKind::kMissingField, "source_url"});
  } else if (trim(url_it->second).empty()) {
    errors.push_back({FieldErrorKind::kEmptyField, "source_url"});
  } else {
    try {
      c.source_url = normalize_url(url_it->second);
    } catch (const Error&) {
      errors.push_back({FieldErrorKind::kBadUrl, "source_url"});
    }
  }

  if (!errors.empty()) return errors;
  return c;
}

std::string challenge_id(std::size_t counter) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "c%06zu", counter);
  return buf;
}

void to_json(nlohmann::json& j, const Challenge& c) {
  j = nlohmann::json{{"id", c.id},
                     {"title", c.title},
                     {"description", c.description},
                     {"wish", c.wish},
                     {"daily_action", c.daily_action},
                     {"source_url", c.source_url},
                     {"created_from", to_string(c.created_from)}};
}

void from_json(const nlohmann::json& j, Challenge& c) {
  c.id = string_field(j, "id");
  c.title = string_field(j, "title");
  c.description = string_field(j, "description");
  c.wish = string_field(j, "wish");
  c.daily_action = string_field(j, "daily_action");
  c.source_url = string_field(j, "source_url");
  const std::string origin = string_field(j, "created_from");
  c.created_from = parse_origin(origin).value_or(Origin::kExtracted);
}

void to_json(nlohmann::json& j, const SearchResultRecord& r) {
  j = nlohmann::json{
      {"query_id", r.query_id}, {"url", r.url}, {"title", r.title}, {"snippet", r.snippet}};
}

void from_json(const nlohmann::json& j, SearchResultRecord& r) {
  r.url = string_field(j, "url");
  r.title = string_field(j, "title");
  r.snippet = string_field(j, "snippet");
  if (j.contains("query_id") && j.at("query_id").is_number()) {
    r.query_id = j.at("query_id").dump();
  } else {
    r.query_id = string_field(j, "query_id");
  }
}

void to_json(nlohmann::json& j, const PageDocument& d) {
  j = nlohmann::json{{"url", d.url}, {"title", d.title}, {"snippet", d.snippet}, {"text", d.text}};
  j["likelihood"] = d.likelihood ? nlohmann::json(*d.likelihood) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, PageDocument& d) {
  d.url = string_field(j, "url");
  d.title = string_field(j, "title");
  d.snippet = string_field(j, "snippet");
  d.text = string_field(j, "text");
  d.likelihood.reset();
  if (j.contains("likelihood") && !j.at("likelihood").is_null()) {
    const int v = j.at("likelihood").get<int>();
    if (v < 0 || v > 10) throw Error(ErrorCode::kParseError, "likelihood outside [0,10]");
    d.likelihood = v;
  }
}

void to_json(nlohmann::json& j, const CorpusStats& s) {
  j = nlohmann::json{{"n_raw_results", s.n_raw_results},
                     {"n_unique_urls", s.n_unique_urls},
                     {"n_filtered_pages", s.n_filtered_pages},
                     {"n_extracted", s.n_extracted},
                     {"n_deduped", s.n_deduped}};
}

std::vector<nlohmann::json> parse_jsonl(std::string_view content, std::string_view source_name) {
  std::vector<nlohmann::json> rows;
  std::size_t line_no = 0;
  while (!content.empty()) {
    ++line_no;
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    if (trim(line).empty()) continue;
    try {
      rows.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  std::string(source_name) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

void write_jsonl(const std::filesystem::path& path, const std::vector<nlohmann::json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  write_file(path, out);
}

std::vector<Challenge> read_challenges(const std::filesystem::path& path) {
  std::vector<Challenge> out;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    try {
      out.push_back(row.get<Challenge>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": record " + std::to_string(line) + ": " + e.what());
    }
  }
  return out;
}

void write_challenges(const std::filesystem::path& path, const std::vector<Challenge>& challenges) {
  write_jsonl(path, to_json_rows(challenges));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

}  // namespace forge
