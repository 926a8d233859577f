#include "forge/minhash.hpp"

#include <limits>
#include <random>

namespace forge {
namespace {

constexpr std::uint64_t kMersennePrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

__extension__ using uint128 = unsigned __int128;

// (a * x + b) mod (2^61 - 1) without overflow.
std::uint64_t affine_mod(std::uint64_t a, std::uint64_t x, std::uint64_t b) {
  const uint128 product = static_cast<uint128>(a) * x + b;
  std::uint64_t lo = static_cast<std::uint64_t>(product & kMersennePrime);
  std::uint64_t hi = static_cast<std::uint64_t>(product >> 61);
  std::uint64_t r = lo + hi;
  while (r >= kMersennePrime) r -= kMersennePrime;
  return r;
}

}  // namespace

std::unordered_set<std::uint64_t> char_shingles(std::string_view text, std::size_t n) {
  std::unordered_set<std::uint64_t> out;
  if (text.empty()) return out;
  if (text.size() < n) {
    out.insert(fnv1a(text) % kMersennePrime);
    return out;
  }
  for (std::size_t i = 0; i + n <= text.size(); ++i) out.insert(fnv1a(text.substr(i, n)) % kMersennePrime);
  return out;
}

MinHasher::MinHasher(std::size_t num_permutations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  a_.reserve(num_permutations);
  b_.reserve(num_permutations);
  for (std::size_t i = 0; i < num_permutations; ++i) {
    a_.push_back(rng() % (kMersennePrime - 1) + 1);
    b_.push_back(rng() % kMersennePrime);
  }
}

std::vector<std::uint64_t> MinHasher::signature(const std::unordered_set<std::uint64_t>& shingles) const {
  std::vector<std::uint64_t> sig(a_.size(), std::numeric_limits<std::uint64_t>::max());
  for (const std::uint64_t x : shingles) {
    for (std::size_t i = 0; i < a_.size(); ++i) sig[i] = std::min(sig[i], affine_mod(a_[i], x, b_[i]));
  }
  return sig;
}

double MinHasher::estimate(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.empty() || a.size() != b.size()) return 0.0;
  // An empty set leaves every slot at the sentinel; it matches nothing.
  if (a.front() == std::numeric_limits<std::uint64_t>::max() ||
      b.front() == std::numeric_limits<std::uint64_t>::max()) {
    return 0.0;
  }
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) agree += a[i] == b[i] ? 1 : 0;
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

}  // namespace forge
