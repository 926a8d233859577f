#include "forge/extract.hpp"

#include <spdlog/spdlog.h>

#include "forge/error.hpp"
#include "forge/parallel.hpp"

namespace forge {
namespace {

std::vector<nlohmann::json> request_items(Judge& judge, const PageDocument& doc) {
  if (doc.text.empty()) throw Error(ErrorCode::kEmptyInput, "extract: empty text for " + doc.url);
  JudgeRequest request;
  request.template_id = "extract";
  request.bindings = {{"url", doc.url}, {"title", doc.title}, {"text", doc.text}};
  const auto response = judge.judge_json(request);
  std::vector<nlohmann::json> items;
  for (const auto& item : response.value) {
    if (items.size() == kMaxItemsPerPage) break;
    items.push_back(item);
  }
  return items;
}

ExtractionBatch build_batch(const PageDocument& doc, std::vector<nlohmann::json> items,
                            std::size_t& next_id) {
  ExtractionBatch batch;
  batch.page = doc;
  batch.raw_items = std::move(items);
  for (const auto& item : batch.raw_items) {
    RawFields fields;
    for (const auto& [key, value] : item.items()) {
      if (value.is_string()) fields[key] = value.get<std::string>();
    }
    fields.erase("url");
    fields["source_url"] = doc.url;
    fields["created_from"] = "extracted";
    fields.erase("id");

    auto result = validate_challenge(fields);
    if (auto* challenge = std::get_if<Challenge>(&result)) {
      challenge->id = challenge_id(next_id++);
      batch.accepted.push_back(std::move(*challenge));
    } else {
      batch.rejected.push_back({item, std::get<std::vector<FieldError>>(result)});
    }
  }
  return batch;
}

}  // namespace

ExtractionBatch extract_challenges(Judge& judge, const PageDocument& doc, std::size_t& next_id) {
  return build_batch(doc, request_items(judge, doc), next_id);
}

void to_json(nlohmann::json& j, const ExtractionReport& r) {
  j = nlohmann::json{{"pages", r.pages},
                     {"accepted", r.accepted},
                     {"rejected", r.rejected},
                     {"zero_yield", r.zero_yield},
                     {"failed", r.failed}};
}

ExtractionOutput extract_all(Judge& judge, const std::vector<PageDocument>& pages,
                             std::size_t max_in_flight) {
  using Items = std::optional<std::vector<nlohmann::json>>;
  const auto replies = parallel_map(pages.size(), max_in_flight, [&](std::size_t i) -> Items {
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        return request_items(judge, pages[i]);
      } catch (const Error& e) {
        spdlog::warn("extraction attempt {} failed for {}: {}", attempt + 1, pages[i].url, e.what());
      }
    }
    return std::nullopt;
  });

  ExtractionOutput out;
  out.report.pages = pages.size();
  std::size_t next_id = 0;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (!replies[i]) {
      ++out.report.failed;
      continue;
    }
    auto batch = build_batch(pages[i], *replies[i], next_id);
    out.report.accepted += batch.accepted.size();
    out.report.rejected += batch.rejected.size();
    if (batch.accepted.empty()) ++out.report.zero_yield;
    out.challenges.insert(out.challenges.end(), batch.accepted.begin(), batch.accepted.end());
    out.batches.push_back(std::move(batch));
  }
  return out;
}

}  // namespace forge
