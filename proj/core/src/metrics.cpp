#include "forge/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "forge/error.hpp"

namespace forge {
namespace {

void require_k(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidRequest, "metric cutoff k must be positive");
}

// Relevant ids among the first k, each counted once.
std::size_t hits_at(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k) {
  RelevantIds seen;
  const std::size_t n = std::min(k, ranked.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.count(ranked[i])) seen.insert(ranked[i]);
  }
  return seen.size();
}

}  // namespace

int hit_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k) {
  require_k(k);
  return hits_at(ranked, relevant, k) > 0 ? 1 : 0;
}

PrfScores prf_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k) {
  require_k(k);
  PrfScores s;
  if (relevant.empty()) {
    s.empty_relevant = true;
    return s;
  }
  const double hits = static_cast<double>(hits_at(ranked, relevant, k));
  s.precision = hits / static_cast<double>(k);
  s.recall = hits / static_cast<double>(std::min(k, relevant.size()));
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

double ndcg_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k) {
  require_k(k);
  RelevantIds seen;
  double dcg = 0.0;
  const std::size_t n = std::min(k, ranked.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.count(ranked[i]) && seen.insert(ranked[i]).second) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return idcg == 0.0 ? 0.0 : dcg / idcg;
}

double dedup_recall_estimate(double precision, double removed_fraction, double unremoved_dup_rate) {
  for (double v : {precision, removed_fraction, unremoved_dup_rate}) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::kDomainError, "audit rates must lie in [0, 1]");
  }
  const double caught = precision * removed_fraction;
  if (caught == 0.0) return 0.0;
  return caught / (caught + unremoved_dup_rate * (1.0 - removed_fraction));
}

}  // namespace forge
