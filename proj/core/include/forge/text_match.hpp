#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace forge {

class Stopwords {
 public:
  Stopwords() = default;

  /// Standard English list plus domain entries (30day, challenge, day, improve, ...).
  static Stopwords defaults();
  /// One token per line; "#" starts a comment. Entries are lowercased.
  static Stopwords parse(std::string_view content);
  static Stopwords load(const std::filesystem::path& path);

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct NormalizedText {
  std::string original;
  std::string normalized;
};

/// Lowercase, delete ASCII punctuation (so "30-Day" becomes "30day"), split on
/// whitespace, drop stopwords and rejoin with single spaces.
NormalizedText normalize_for_match(std::string_view text, const Stopwords& stopwords);

std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - distance / max(|a|, |b|), byte-wise; two empty strings are identical.
double levenshtein_similarity(std::string_view a, std::string_view b);

}  // namespace forge
