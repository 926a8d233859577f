#pragma once

// Synthetic corpora with planted duplicate structure.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "forge/dedup.hpp"
#include "forge/mock_providers.hpp"
#include "forge/model.hpp"

namespace forge::testing {

enum class GroupKind { kStringLevel, kParaphrase, kAmbiguous, kSingleton, kDistractor, kChain };

struct PlantedGroup {
  GroupKind kind;
  std::vector<std::string> ids;  // challenges that are true duplicates of each other
};

struct DedupFixture {
  std::vector<Challenge> challenges;
  MockJudgeTable table;
  std::vector<PlantedGroup> groups;
  std::uint64_t embed_seed = 0;
};

// 200 challenges: 20 string-level pairs, 20 paraphrase triples, 20 pairs that
// only the judge can confirm, 10 look-alike pairs the judge rejects, and 40
// unrelated singletons. Mock cosines are checked while generating.
DedupFixture make_planted_fixture(std::uint64_t seed = 7);

// Ten challenges whose actions slide a six-token window one token at a time,
// so neighbours look alike but the ends do not; plus ten unrelated singletons.
// Truth pairs are (0,1), (2,3), ... along the chain.
DedupFixture make_chain_fixture(std::uint64_t seed = 11);

// 60 challenges in 20 paraphrase triplets; the judge table confirms every
// within-triplet pair.
DedupFixture make_triplet_fixture(std::uint64_t seed = 13);

struct PairScores {
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t correct = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Pairwise precision/recall of the outcome's clusters against the planted groups.
PairScores score_pairs(const DedupOutcome& outcome, const std::vector<Challenge>& input,
                       const std::vector<PlantedGroup>& groups);

// Lowercase pseudo-words, none of them English stopwords.
std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed);

std::filesystem::path fixture_dir();

}  // namespace forge::testing
