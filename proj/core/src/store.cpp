#include "forge/store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "forge/checksum.hpp"
#include "forge/error.hpp"

namespace forge {
namespace {

constexpr std::string_view kFormatName = "forge-store";

std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    return ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
}

std::string encode_vectors(const std::vector<EmbeddingVector>& vectors) {
  std::string out;
  for (const auto& v : vectors) {
    for (float f : v.values()) {
      const std::uint32_t bits = to_little_endian(std::bit_cast<std::uint32_t>(f));
      char bytes[4];
      std::memcpy(bytes, &bits, 4);
      out.append(bytes, 4);
    }
  }
  return out;
}

std::string encode_challenges(const std::vector<Challenge>& challenges) {
  std::string out;
  for (const auto& c : challenges) {
    out += nlohmann::json(c).dump();
    out += '\n';
  }
  return out;
}

}  // namespace

ChallengeStore::ChallengeStore(std::vector<Challenge> challenges, std::vector<EmbeddingVector> vectors,
                               std::size_t dim, std::string provider_tag)
    : challenges_(std::move(challenges)),
      vectors_(std::move(vectors)),
      dim_(dim),
      provider_tag_(std::move(provider_tag)) {
  if (challenges_.size() != vectors_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "store needs one vector per challenge");
  }
  if (provider_tag_.empty()) throw Error(ErrorCode::kInvalidRequest, "store provider tag is empty");
  if (dim_ == 0 && !challenges_.empty()) throw Error(ErrorCode::kDimensionMismatch, "store dim is zero");
  for (const auto& v : vectors_) {
    if (v.dim() != dim_) throw Error(ErrorCode::kDimensionMismatch, "store vector has wrong dim");
    if (std::abs(v.norm() - 1.0) > 1e-4) {
      throw Error(ErrorCode::kInvalidRequest, "store vectors must be unit-normalized");
    }
  }
}

std::string serialize_store(const ChallengeStore& store) {
  const std::string challenges = encode_challenges(store.challenges());
  const std::string vectors = encode_vectors(store.vectors());
  const nlohmann::json header{{"format", kFormatName},
                              {"version", kStoreFormatVersion},
                              {"dim", store.dim()},
                              {"count", store.size()},
                              {"provider_tag", store.provider_tag()},
                              {"checksums", {{"challenges", sha256_hex(challenges)}, {"vectors", sha256_hex(vectors)}}}};
  std::string out = header.dump();
  out += '\n';
  out += challenges;
  out += vectors;
  return out;
}

ChallengeStore deserialize_store(std::string_view bytes) {
  const auto header_end = bytes.find('\n');
  if (header_end == std::string_view::npos) throw Error(ErrorCode::kIoError, "store: missing header");
  const auto header = nlohmann::json::parse(bytes.substr(0, header_end), nullptr, false);
  if (header.is_discarded() || !header.is_object() || header.value("format", "") != kFormatName) {
    throw Error(ErrorCode::kIoError, "store: not a store file");
  }
  if (header.value("version", -1) != kStoreFormatVersion) {
    throw Error(ErrorCode::kFormatVersionMismatch,
                "store: version " + header.value("version", nlohmann::json()).dump() + ", expected " +
                    std::to_string(kStoreFormatVersion));
  }

  std::size_t dim = 0;
  std::size_t count = 0;
  std::string provider_tag;
  std::string challenges_sum;
  std::string vectors_sum;
  try {
    dim = header.at("dim").get<std::size_t>();
    count = header.at("count").get<std::size_t>();
    provider_tag = header.at("provider_tag").get<std::string>();
    challenges_sum = header.at("checksums").at("challenges").get<std::string>();
    vectors_sum = header.at("checksums").at("vectors").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kIoError, std::string("store: bad header: ") + e.what());
  }

  std::size_t pos = header_end + 1;
  const std::size_t section_start = pos;
  for (std::size_t i = 0; i < count; ++i) {
    const auto nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) throw Error(ErrorCode::kIoError, "store: truncated challenge section");
    pos = nl + 1;
  }
  const std::string_view challenge_section = bytes.substr(section_start, pos - section_start);
  if (sha256_hex(challenge_section) != challenges_sum) {
    throw Error(ErrorCode::kChecksumMismatch, "store: challenge section checksum mismatch");
  }
  const std::string_view vector_section = bytes.substr(pos);
  if (vector_section.size() != count * dim * 4) {
    throw Error(ErrorCode::kIoError, "store: vector section has " + std::to_string(vector_section.size()) +
                                         " bytes, expected " + std::to_string(count * dim * 4));
  }
  if (sha256_hex(vector_section) != vectors_sum) {
    throw Error(ErrorCode::kChecksumMismatch, "store: vector section checksum mismatch");
  }

  std::vector<Challenge> challenges;
  challenges.reserve(count);
  for (const auto& row : parse_jsonl(challenge_section, "store")) challenges.push_back(row.get<Challenge>());

  std::vector<EmbeddingVector> vectors;
  vectors.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<float> values(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      std::uint32_t bits;
      std::memcpy(&bits, vector_section.data() + (i * dim + d) * 4, 4);
      values[d] = std::bit_cast<float>(to_little_endian(bits));
    }
    vectors.emplace_back(std::move(values));
  }
  return ChallengeStore(std::move(challenges), std::move(vectors), dim, std::move(provider_tag));
}

void save_store(const ChallengeStore& store, const std::filesystem::path& path) {
  write_file(path, serialize_store(store));
}

ChallengeStore load_store(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIoError, "store not found: " + path.string());
  return deserialize_store(read_file(path));
}

std::vector<ScoredIndex> topk_indices(const ChallengeStore& store, const EmbeddingVector& query,
                                      std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidRequest, "topk: k must be positive");
  if (store.empty()) return {};
  if (query.dim() != store.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "query dim " + std::to_string(query.dim()) +
                                                   " does not match store dim " + std::to_string(store.dim()));
  }
  std::vector<ScoredIndex> scored;
  scored.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) scored.push_back({i, dot(query, store.vectors()[i])});

  const auto& challenges = store.challenges();
  auto better = [&](const ScoredIndex& a, const ScoredIndex& b) {
    if (a.score != b.score) return a.score > b.score;
    return challenges[a.index].id < challenges[b.index].id;
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);
  scored.resize(take);
  return scored;
}

std::vector<ScoredId> topk(const ChallengeStore& store, const EmbeddingVector& query, std::size_t k) {
  std::vector<ScoredId> out;
  for (const auto& hit : topk_indices(store, query, k)) {
    out.push_back({store.challenges()[hit.index].id, hit.score});
  }
  return out;
}

ChallengeStore build_store(std::vector<Challenge> challenges, Embedder& embedder) {
  std::sort(challenges.begin(), challenges.end(),
            [](const Challenge& a, const Challenge& b) { return a.id < b.id; });
  if (challenges.empty()) return ChallengeStore({}, {}, 0, embedder.tag());
  std::vector<std::string> actions;
  actions.reserve(challenges.size());
  for (const auto& c : challenges) actions.push_back(c.daily_action);
  auto vectors = embedder.embed_batch(actions);
  const std::size_t dim = vectors.front().dim();
  return ChallengeStore(std::move(challenges), std::move(vectors), dim, embedder.tag());
}

}  // namespace forge
