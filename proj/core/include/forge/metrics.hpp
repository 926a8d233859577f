#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace forge {

using RankedIds = std::vector<std::string>;
using RelevantIds = std::set<std::string>;

/// 1 when any of the first k ranked ids is relevant.
int hit_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k);

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool empty_relevant = false;  // metrics forced to 0
};

/// precision = hits / k; recall = hits / min(k, |relevant|); f1 harmonic mean.
/// Rankings shorter than k count the missing slots as misses.
PrfScores prf_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k);

/// Binary-gain NDCG with log2(i + 1) discounts; ideal DCG over
/// min(k, |relevant|) relevant items. Zero when the ideal DCG is zero.
double ndcg_at_k(const RankedIds& ranked, const RelevantIds& relevant, std::size_t k);

/// Recall implied by the survivor audit:
///   prec * removed / (prec * removed + m * (1 - removed)), 0 when the
/// numerator is 0. Throws Error(kDomainError) for inputs outside [0, 1].
double dedup_recall_estimate(double precision, double removed_fraction, double unremoved_dup_rate);

}  // namespace forge
