#include "forge/text_match.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <vector>

#include "forge/embedded_data.hpp"
#include "forge/model.hpp"

namespace forge {

Stopwords Stopwords::defaults() { return parse(*embedded::lookup("stopwords")); }

Stopwords Stopwords::parse(std::string_view content) {
  Stopwords s;
  while (!content.empty()) {
    const auto nl = content.find('\n');
    std::string_view line = content.substr(0, nl);
    content = nl == std::string_view::npos ? std::string_view{} : content.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string word;
    for (unsigned char c : line) {
      if (!std::isspace(c)) word.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!word.empty()) s.words_.insert(std::move(word));
  }
  return s;
}

Stopwords Stopwords::load(const std::filesystem::path& path) { return parse(read_file(path)); }

bool Stopwords::contains(std::string_view token) const {
  return words_.find(std::string(token)) != words_.end();
}

NormalizedText normalize_for_match(std::string_view text, const Stopwords& stopwords) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  }

  std::string normalized;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
    const std::size_t start = i;
    while (i < cleaned.size() && !std::isspace(static_cast<unsigned char>(cleaned[i]))) ++i;
    if (i == start) break;
    const std::string_view token(cleaned.data() + start, i - start);
    if (stopwords.contains(token)) continue;
    if (!normalized.empty()) normalized.push_back(' ');
    normalized.append(token);
  }
  return {std::string(text), std::move(normalized)};
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> curr(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitution = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, substitution});
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

}  // namespace forge
