#include "forge/audit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>

#include "forge/error.hpp"
#include "forge/metrics.hpp"

namespace forge {
namespace {

// Uniform draw in [0, bound) by rejection, independent of the standard
// library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % bound + 1) % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x > limit);
  return x % bound;
}

std::optional<bool> annotation(const nlohmann::json& row, const char* key) {
  if (!row.contains(key) || row.at(key).is_null()) return std::nullopt;
  if (!row.at(key).is_boolean()) throw Error(ErrorCode::kParseError, std::string("audit annotation '") + key + "' must be a boolean");
  return row.at(key).get<bool>();
}

}  // namespace

std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, std::uint64_t seed) {
  count = std::min(count, population);
  std::mt19937_64 rng(seed);
  // Floyd's algorithm: exactly `count` draws.
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(population, false);
  for (std::size_t j = population - count; j < population; ++j) {
    const auto t = static_cast<std::size_t>(uniform_below(rng, j + 1));
    const std::size_t pick = taken[t] ? j : t;
    taken[pick] = true;
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

AuditWorksheets audit_dedup(std::size_t sample_size, std::uint64_t seed, const std::vector<RemovedEntry>& removed,
                            const std::vector<Challenge>& corpus_before, const std::vector<Challenge>& corpus_after,
                            Embedder& embedder) {
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < corpus_before.size(); ++i) by_id.emplace(corpus_before[i].id, i);
  auto lookup = [&](const std::string& id) -> const Challenge& {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw Error(ErrorCode::kMissingInput, "audit: id " + id + " not in the pre-dedup corpus");
    return corpus_before[it->second];
  };

  AuditWorksheets out;
  out.removed_fraction =
      corpus_before.empty() ? 0.0 : static_cast<double>(removed.size()) / static_cast<double>(corpus_before.size());

  out.precision_truncated = sample_size > removed.size();
  for (std::size_t i : sample_indices(removed.size(), sample_size, seed)) {
    out.precision.push_back({lookup(removed[i].removed_id), lookup(removed[i].kept_id), std::nullopt});
  }

  out.recall_truncated = sample_size > corpus_after.size();
  const auto survivors = sample_indices(corpus_after.size(), sample_size, seed + 1);
  if (survivors.empty()) return out;

  std::vector<std::string> actions;
  for (const auto& c : corpus_before) actions.push_back(c.daily_action);
  const auto vectors = actions.empty() ? std::vector<EmbeddingVector>{} : embedder.embed_batch(actions);
  const std::size_t neighbors = corpus_before.empty() ? 0 : std::min(kAuditNeighbors, corpus_before.size() - 1);

  for (std::size_t s : survivors) {
    const Challenge& survivor = corpus_after[s];
    const auto it = by_id.find(survivor.id);
    const EmbeddingVector own = it != by_id.end() ? vectors[it->second] : embedder.embed(survivor.daily_action);
    std::vector<NeighborEntry> scored;
    for (std::size_t i = 0; i < corpus_before.size(); ++i) {
      if (corpus_before[i].id == survivor.id) continue;
      scored.push_back({corpus_before[i], dot(own, vectors[i])});
    }
    const auto take = static_cast<std::ptrdiff_t>(std::min(neighbors, scored.size()));
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                      [](const NeighborEntry& a, const NeighborEntry& b) {
                        if (a.similarity != b.similarity) return a.similarity > b.similarity;
                        return a.challenge.id < b.challenge.id;
                      });
    scored.resize(static_cast<std::size_t>(take));
    out.recall.push_back({survivor, std::move(scored), std::nullopt});
  }
  return out;
}

nlohmann::json to_json(const PrecisionRow& row) {
  return {{"removed", row.removed},
          {"kept", row.kept},
          {"is_duplicate", row.is_duplicate ? nlohmann::json(*row.is_duplicate) : nlohmann::json()}};
}

nlohmann::json to_json(const RecallRow& row) {
  nlohmann::json neighbors = nlohmann::json::array();
  for (const auto& n : row.neighbors) neighbors.push_back({{"challenge", n.challenge}, {"similarity", n.similarity}});
  return {{"survivor", row.survivor},
          {"neighbors", neighbors},
          {"has_unremoved_duplicate",
           row.has_unremoved_duplicate ? nlohmann::json(*row.has_unremoved_duplicate) : nlohmann::json()}};
}

AuditScore score_audit(const std::vector<nlohmann::json>& precision_rows,
                       const std::vector<nlohmann::json>& recall_rows, double removed_fraction) {
  AuditScore score;
  std::size_t duplicates = 0;
  for (const auto& row : precision_rows) {
    if (const auto v = annotation(row, "is_duplicate")) {
      ++score.precision_annotated;
      duplicates += *v ? 1 : 0;
    }
  }
  std::size_t unremoved = 0;
  for (const auto& row : recall_rows) {
    if (const auto v = annotation(row, "has_unremoved_duplicate")) {
      ++score.recall_annotated;
      unremoved += *v ? 1 : 0;
    }
  }
  if (score.precision_annotated > 0) {
    score.precision = static_cast<double>(duplicates) / static_cast<double>(score.precision_annotated);
  }
  if (score.recall_annotated > 0) {
    score.unremoved_dup_rate = static_cast<double>(unremoved) / static_cast<double>(score.recall_annotated);
  }
  score.recall = dedup_recall_estimate(score.precision, removed_fraction, score.unremoved_dup_rate);
  if (score.precision + score.recall > 0) {
    score.f1 = 2 * score.precision * score.recall / (score.precision + score.recall);
  }
  return score;
}

}  // namespace forge
