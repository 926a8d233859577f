#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "forge/model.hpp"
#include "forge/providers.hpp"

namespace forge {

/// Immutable deduplicated corpus with aligned unit vectors.
class ChallengeStore {
 public:
  /// Checks the invariants: equal lengths, every vector of length `dim` with
  /// unit norm (1e-4), nonempty provider tag. Throws Error(kDimensionMismatch)
  /// or Error(kInvalidRequest).
  ChallengeStore(std::vector<Challenge> challenges, std::vector<EmbeddingVector> vectors,
                 std::size_t dim, std::string provider_tag);

  const std::vector<Challenge>& challenges() const noexcept { return challenges_; }
  const std::vector<EmbeddingVector>& vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return challenges_.size(); }
  bool empty() const noexcept { return challenges_.empty(); }
  const std::string& provider_tag() const noexcept { return provider_tag_; }

  bool operator==(const ChallengeStore&) const = default;

 private:
  std::vector<Challenge> challenges_;
  std::vector<EmbeddingVector> vectors_;
  std::size_t dim_;
  std::string provider_tag_;
};

inline constexpr int kStoreFormatVersion = 1;

/// Container layout: one JSON header line {format, version, dim, count,
/// provider_tag, checksums{challenges, vectors}}, `count` JSONL challenge
/// lines, then count*dim little-endian float32 values.
std::string serialize_store(const ChallengeStore& store);
ChallengeStore deserialize_store(std::string_view bytes);

void save_store(const ChallengeStore& store, const std::filesystem::path& path);
/// Throws Error(kIoError), Error(kFormatVersionMismatch) or Error(kChecksumMismatch).
ChallengeStore load_store(const std::filesystem::path& path);

struct ScoredIndex {
  std::size_t index;
  double score;
};

/// Exact scan; scores non-increasing, ties by ascending id.
/// Throws Error(kDimensionMismatch).
std::vector<ScoredIndex> topk_indices(const ChallengeStore& store, const EmbeddingVector& query,
                                      std::size_t k);

struct ScoredId {
  std::string id;
  double score;
};

std::vector<ScoredId> topk(const ChallengeStore& store, const EmbeddingVector& query, std::size_t k);

/// Embeds the daily action of each challenge.
ChallengeStore build_store(std::vector<Challenge> challenges, Embedder& embedder);

}  // namespace forge
