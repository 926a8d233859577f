#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace forge {

/// Character n-gram shingles, hashed. Strings shorter than n yield one
/// shingle of the whole string; the empty string yields none.
std::unordered_set<std::uint64_t> char_shingles(std::string_view text, std::size_t n = 3);

class MinHasher {
 public:
  explicit MinHasher(std::size_t num_permutations = 128, std::uint64_t seed = 1);

  std::vector<std::uint64_t> signature(const std::unordered_set<std::uint64_t>& shingles) const;
  std::size_t num_permutations() const noexcept { return a_.size(); }

  /// Fraction of agreeing slots. Empty-set signatures never match anything.
  static double estimate(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

 private:
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

}  // namespace forge
