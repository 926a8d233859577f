#pragma once

#include <cstddef>
#include <vector>

#include "forge/model.hpp"
#include "forge/providers.hpp"

namespace forge {

inline constexpr std::size_t kMaxItemsPerPage = 100;

struct RejectedItem {
  nlohmann::json raw;
  std::vector<FieldError> violations;
};

struct ExtractionBatch {
  PageDocument page;
  std::vector<nlohmann::json> raw_items;
  std::vector<Challenge> accepted;
  std::vector<RejectedItem> rejected;
};

/// Asks the judge for the page's challenges and validates each item. Accepted
/// challenges take the page URL as source_url and ids starting at `next_id`,
/// which is advanced past them. Items beyond kMaxItemsPerPage are ignored.
/// Judge errors propagate.
ExtractionBatch extract_challenges(Judge& judge, const PageDocument& doc, std::size_t& next_id);

struct ExtractionReport {
  std::size_t pages = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t zero_yield = 0;
  std::size_t failed = 0;
};

void to_json(nlohmann::json& j, const ExtractionReport& r);

struct ExtractionOutput {
  std::vector<Challenge> challenges;
  std::vector<ExtractionBatch> batches;
  ExtractionReport report;
};

/// Extracts every page on a bounded pool. A page whose judge call fails is
/// retried once, then counted as failed. Ids follow input page order.
ExtractionOutput extract_all(Judge& judge, const std::vector<PageDocument>& pages,
                             std::size_t max_in_flight = 8);

}  // namespace forge
