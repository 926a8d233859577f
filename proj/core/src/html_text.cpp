#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <string>

#include "forge/collect.hpp"

namespace forge {
namespace {

// Subtrees dropped entirely.
constexpr std::array<std::string_view, 10> kSkipElements = {
    "script", "style", "nav", "header", "footer", "head", "noscript", "template", "svg", "iframe"};

// Elements whose content is raw text: no tags are recognized until the closing tag.
constexpr std::array<std::string_view, 2> kRawTextElements = {"script", "style"};

constexpr std::array<std::string_view, 36> kBlockElements = {
    "p",       "div",   "br",     "li",      "ul",         "ol",    "h1",      "h2",    "h3",
    "h4",      "h5",    "h6",     "tr",      "table",      "section", "article", "blockquote", "pre",
    "hr",      "dd",    "dt",     "dl",      "main",       "aside", "figure",  "figcaption", "address",
    "title",   "body",  "html",   "details", "summary",    "fieldset", "legend", "caption", "thead"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view name) {
  return std::find(set.begin(), set.end(), name) != set.end();
}

bool ieq_prefix(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
  }
  return true;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes the entity starting at text[pos] == '&'. Returns characters consumed,
// 0 when it is not a recognized entity.
std::size_t decode_entity(std::string_view text, std::size_t pos, std::string& out) {
  const auto semi = text.find(';', pos);
  if (semi == std::string_view::npos || semi - pos > 10) return 0;
  const std::string_view body = text.substr(pos + 1, semi - pos - 1);
  if (body.empty()) return 0;
  if (body.front() == '#') {
    std::uint32_t cp = 0;
    const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    const std::string_view digits = body.substr(hex ? 2 : 1);
    if (digits.empty()) return 0;
    for (char c : digits) {
      const int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                    : hex && std::isxdigit(static_cast<unsigned char>(c))
                        ? std::tolower(static_cast<unsigned char>(c)) - 'a' + 10
                        : -1;
      if (d < 0) return 0;
      cp = std::min<std::uint32_t>(cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d), 0x110000);
    }
    append_utf8(out, cp);
    return semi - pos + 1;
  }
  struct Named {
    std::string_view name;
    std::uint32_t cp;
  };
  static constexpr Named kNamed[] = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},     {"apos", '\''},
      {"nbsp", ' '},     {"mdash", 0x2014}, {"ndash", 0x2013}, {"hellip", 0x2026}, {"rsquo", 0x2019},
      {"lsquo", 0x2018}, {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"copy", 0xA9},    {"reg", 0xAE},
      {"trade", 0x2122}, {"bull", 0x2022}, {"middot", 0xB7}};
  for (const auto& e : kNamed) {
    if (e.name == body) {
      append_utf8(out, e.cp);
      return semi - pos + 1;
    }
  }
  return 0;
}

std::string collapse_lines(const std::string& raw) {
  std::string out;
  std::string line;
  auto flush = [&] {
    while (!line.empty() && line.back() == ' ') line.pop_back();
    if (!line.empty()) {
      if (!out.empty()) out.push_back('\n');
      out += line;
    }
    line.clear();
  };
  for (char c : raw) {
    if (c == '\n') {
      flush();
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!line.empty() && line.back() != ' ') line.push_back(' ');
    } else {
      line.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace

std::string html_to_text(std::string_view html) {
  std::string raw;
  raw.reserve(html.size());
  int skip_depth = 0;
  std::size_t i = 0;

  while (i < html.size()) {
    const char c = html[i];
    if (c == '&') {
      std::string decoded;
      if (const std::size_t used = decode_entity(html, i, decoded); used > 0) {
        if (skip_depth == 0) raw += decoded;
        i += used;
        continue;
      }
      if (skip_depth == 0) raw.push_back(c);
      ++i;
      continue;
    }
    if (c != '<') {
      if (skip_depth == 0) raw.push_back(c);
      ++i;
      continue;
    }

    if (html.compare(i, 4, "<!--") == 0) {
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      const auto end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }

    std::size_t j = i + 1;
    const bool closing = j < html.size() && html[j] == '/';
    if (closing) ++j;
    const std::size_t name_start = j;
    while (j < html.size() && std::isalnum(static_cast<unsigned char>(html[j]))) ++j;
    if (j == name_start) {
      // Not a tag: a literal '<' in text.
      if (skip_depth == 0) raw.push_back(c);
      ++i;
      continue;
    }
    std::string name(html.substr(name_start, j - name_start));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });

    // Skip attributes, honoring quotes.
    char quote = 0;
    bool self_closing = false;
    while (j < html.size()) {
      const char ch = html[j];
      if (quote) {
        if (ch == quote) quote = 0;
      } else if (ch == '"' || ch == '\'') {
        quote = ch;
      } else if (ch == '>') {
        self_closing = j > i && html[j - 1] == '/';
        break;
      }
      ++j;
    }
    i = j < html.size() ? j + 1 : html.size();

    if (!closing && !self_closing && contains(kRawTextElements, name)) {
      // Jump to the matching close tag.
      std::size_t k = i;
      const std::string close = "</" + name;
      while (k < html.size() && !ieq_prefix(html, k, close)) ++k;
      if (k >= html.size()) {
        i = html.size();
      } else {
        const auto end = html.find('>', k);
        i = end == std::string_view::npos ? html.size() : end + 1;
      }
      if (skip_depth == 0) raw.push_back(' ');
      continue;
    }

    if (contains(kSkipElements, name)) {
      if (closing) {
        if (skip_depth > 0) --skip_depth;
      } else if (!self_closing) {
        ++skip_depth;
      }
      raw.push_back('\n');
      continue;
    }

    if (skip_depth > 0) continue;
    if (contains(kBlockElements, name)) {
      raw.push_back('\n');
    } else if (name == "td" || name == "th") {
      raw.push_back(' ');
    }
  }
  return collapse_lines(raw);
}

}  // namespace forge
