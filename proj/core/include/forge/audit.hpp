#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "forge/dedup.hpp"
#include "forge/model.hpp"
#include "forge/providers.hpp"

namespace forge {

struct PrecisionRow {
  Challenge removed;
  Challenge kept;
  std::optional<bool> is_duplicate;  // filled in by the annotator
};

struct NeighborEntry {
  Challenge challenge;
  double similarity = 0.0;
};

struct RecallRow {
  Challenge survivor;
  std::vector<NeighborEntry> neighbors;  // nearest in the pre-dedup corpus
  std::optional<bool> has_unremoved_duplicate;
};

struct AuditWorksheets {
  std::vector<PrecisionRow> precision;
  std::vector<RecallRow> recall;
  bool precision_truncated = false;  // sample larger than population
  bool recall_truncated = false;
  double removed_fraction = 0.0;
};

inline constexpr std::size_t kAuditNeighbors = 5;

/// Seeded uniform sample of `count` indices from [0, population) without
/// replacement, in ascending order. Reproducible across platforms.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count,
                                        std::uint64_t seed);

/// Samples removed pairs for precision annotation and survivors (each with
/// their top-5 most similar pre-dedup challenges by daily-action embedding)
/// for recall annotation.
AuditWorksheets audit_dedup(std::size_t sample_size, std::uint64_t seed,
                            const std::vector<RemovedEntry>& removed,
                            const std::vector<Challenge>& corpus_before,
                            const std::vector<Challenge>& corpus_after, Embedder& embedder);

nlohmann::json to_json(const PrecisionRow& row);
nlohmann::json to_json(const RecallRow& row);

struct AuditScore {
  std::size_t precision_annotated = 0;
  std::size_t recall_annotated = 0;
  double precision = 0.0;
  double unremoved_dup_rate = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Scores annotated worksheets; rows without an annotation are ignored.
AuditScore score_audit(const std::vector<nlohmann::json>& precision_rows,
                       const std::vector<nlohmann::json>& recall_rows, double removed_fraction);

}  // namespace forge
