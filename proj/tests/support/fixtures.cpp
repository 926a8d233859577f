#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "forge/text_match.hpp"

#ifndef FORGE_FIXTURE_DIR
#error "FORGE_FIXTURE_DIR must be defined"
#endif

namespace forge::testing {
namespace {

constexpr std::size_t kTokens = 6;
constexpr double kUnrelatedMax = 0.55;

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string capitalize(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Draft {
  std::string title;
  std::string description;
  std::string wish;
  std::string action;
  std::size_t group;
};

class Builder {
 public:
  Builder(std::uint64_t seed, std::uint64_t embed_seed)
      : rng_(seed), vocab_(pseudo_words(4000, seed)), embedder_(embed_seed) {}

  std::vector<std::string> fresh_tokens(std::size_t n) {
    std::vector<std::string> out;
    while (out.size() < n) {
      if (next_word_ >= vocab_.size()) throw std::runtime_error("fixture vocabulary exhausted");
      out.push_back(vocab_[next_word_++]);
    }
    return out;
  }

  double cosine(const std::string& a, const std::string& b) {
    return dot(embedder_.embed(a), embedder_.embed(b));
  }

  // Accepts a candidate group when every member is far from all earlier
  // members of other groups and `inner` approves the group's own similarities.
  template <typename Inner>
  bool try_add(const std::vector<Draft>& group, Inner inner) {
    std::vector<EmbeddingVector> vecs;
    for (const auto& d : group) vecs.push_back(embedder_.embed(d.action));
    for (const auto& v : vecs) {
      for (const auto& existing : accepted_vectors_) {
        if (dot(v, existing) >= kUnrelatedMax) return false;
      }
    }
    if (!inner(vecs)) return false;
    for (std::size_t i = 0; i < group.size(); ++i) {
      drafts_.push_back(group[i]);
      accepted_vectors_.push_back(vecs[i]);
    }
    return true;
  }

  std::size_t new_group() { return group_count_++; }

  Draft base_draft(std::size_t group, const std::vector<std::string>& tokens) {
    const auto extra = fresh_tokens(2);
    Draft d;
    d.group = group;
    d.action = join(tokens);
    d.title = capitalize(tokens[0]) + " " + extra[0] + " plan";
    d.description = "Every morning " + d.action + ", then note how it went.";
    d.wish = "feel more " + extra[1];
    return d;
  }

  std::mt19937_64& rng() { return rng_; }
  std::vector<Draft>& drafts() { return drafts_; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> vocab_;
  std::size_t next_word_ = 0;
  MockEmbedder embedder_;
  std::vector<Draft> drafts_;
  std::vector<EmbeddingVector> accepted_vectors_;
  std::size_t group_count_ = 0;
};

bool within(double v, double lo, double hi) { return v >= lo && v < hi; }

DedupFixture finish(Builder& b, std::map<std::size_t, GroupKind> kinds, std::uint64_t embed_seed,
                    const std::vector<std::pair<std::size_t, std::size_t>>& judge_true,
                    const std::vector<std::pair<std::size_t, std::size_t>>& judge_false, bool shuffle) {
  auto& drafts = b.drafts();
  std::vector<std::size_t> order(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  if (shuffle) std::shuffle(order.begin(), order.end(), b.rng());

  DedupFixture f;
  f.embed_seed = embed_seed;
  std::vector<std::string> id_of(drafts.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const auto& d = drafts[order[pos]];
    id_of[order[pos]] = challenge_id(pos);
    f.challenges.push_back(Challenge{challenge_id(pos), d.title, d.description, d.wish, d.action,
                                     "https://fixtures.example.org/page-" + std::to_string(d.group),
                                     Origin::kFixture});
  }
  std::map<std::size_t, PlantedGroup> groups;
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    auto& g = groups[drafts[i].group];
    g.kind = kinds.at(drafts[i].group);
    g.ids.push_back(id_of[i]);
  }
  for (auto& [_, g] : groups) {
    std::sort(g.ids.begin(), g.ids.end());
    f.groups.push_back(std::move(g));
  }
  for (const auto& [a, c] : judge_true) f.table.set_duplicate(drafts[a].action, drafts[c].action, true);
  for (const auto& [a, c] : judge_false) f.table.set_duplicate(drafts[a].action, drafts[c].action, false);
  return f;
}

std::vector<std::string> replaced(std::vector<std::string> tokens, const std::vector<std::size_t>& positions,
                                  const std::vector<std::string>& with) {
  for (std::size_t i = 0; i < positions.size(); ++i) tokens[positions[i]] = with[i];
  return tokens;
}

}  // namespace

std::vector<std::string> pseudo_words(std::size_t count, std::uint64_t seed) {
  static const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "dr", "gl", "kr", "pl", "st", "tr", "zv"};
  static const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ou"};
  std::mt19937_64 rng(seed);
  const auto& stop = Stopwords::defaults();
  std::set<std::string> seen;
  std::vector<std::string> out;
  while (out.size() < count) {
    std::string w;
    const int syllables = 2 + static_cast<int>(rng() % 2);
    for (int s = 0; s < syllables; ++s) {
      w += kOnsets[rng() % std::size(kOnsets)];
      w += kVowels[rng() % std::size(kVowels)];
    }
    if (rng() % 2) w += "x";
    if (stop.contains(w) || !seen.insert(w).second) continue;
    out.push_back(w);
  }
  return out;
}

DedupFixture make_planted_fixture(std::uint64_t seed) {
  constexpr std::uint64_t kEmbedSeed = 0;
  Builder b(seed, kEmbedSeed);
  std::map<std::size_t, GroupKind> kinds;
  std::vector<std::pair<std::size_t, std::size_t>> judge_true;
  std::vector<std::pair<std::size_t, std::size_t>> judge_false;

  auto add_until = [&](GroupKind kind, std::size_t count, auto make) {
    for (std::size_t made = 0; made < count;) {
      const std::size_t g = b.new_group();
      const std::size_t first = b.drafts().size();
      if (make(g, first)) {
        kinds[g] = kind;
        ++made;
      }
    }
  };

  // Near-verbatim copies: case and punctuation changes, or a one-letter typo.
  std::size_t string_level = 0;
  add_until(GroupKind::kStringLevel, 20, [&](std::size_t g, std::size_t) {
    const auto tokens = b.fresh_tokens(kTokens);
    Draft a = b.base_draft(g, tokens);
    Draft c = a;
    if (string_level % 2 == 0) {
      c.action = capitalize(tokens[0]);
      for (std::size_t i = 1; i < tokens.size(); ++i) c.action += (i == 3 ? ", the " : " ") + tokens[i];
      c.action += ".";
      c.title = a.title + "!";
    } else {
      c.action = a.action;
      c.action[c.action.size() - 2] = c.action[c.action.size() - 2] == 'q' ? 'w' : 'q';
      c.title = a.title + ".";
    }
    c.description = a.description + " Repeat tomorrow.";
    const bool ok = b.try_add({a, c}, [](const std::vector<EmbeddingVector>&) { return true; });
    if (ok) ++string_level;
    return ok;
  });

  // One token swapped per member: all pairs clear the high threshold.
  add_until(GroupKind::kParaphrase, 20, [&](std::size_t g, std::size_t first) {
    const auto tokens = b.fresh_tokens(kTokens);
    const auto swaps = b.fresh_tokens(2);
    const std::size_t pos = b.rng()() % kTokens;
    Draft a = b.base_draft(g, tokens);
    Draft c = b.base_draft(g, replaced(tokens, {pos}, {swaps[0]}));
    Draft e = b.base_draft(g, replaced(tokens, {pos}, {swaps[1]}));
    const bool ok = b.try_add({a, c, e}, [](const std::vector<EmbeddingVector>& v) {
      return dot(v[0], v[1]) >= 0.75 && dot(v[0], v[2]) >= 0.75 && dot(v[1], v[2]) >= 0.75;
    });
    (void)first;
    return ok;
  });

  // Two tokens swapped: similarity lands in the ambiguous band; the judge confirms.
  add_until(GroupKind::kAmbiguous, 20, [&](std::size_t g, std::size_t first) {
    const auto tokens = b.fresh_tokens(kTokens);
    const auto swaps = b.fresh_tokens(2);
    Draft a = b.base_draft(g, tokens);
    Draft c = b.base_draft(g, replaced(tokens, {1, 4}, swaps));
    const bool ok = b.try_add({a, c}, [](const std::vector<EmbeddingVector>& v) {
      return within(dot(v[0], v[1]), 0.64, 0.69);
    });
    if (ok) judge_true.emplace_back(first, first + 1);
    return ok;
  });

  // Look-alikes in the ambiguous band that the judge rejects: each is its own group.
  for (std::size_t made = 0; made < 10;) {
    const std::size_t g1 = b.new_group();
    const std::size_t g2 = b.new_group();
    const std::size_t first = b.drafts().size();
    const auto tokens = b.fresh_tokens(kTokens);
    const auto swaps = b.fresh_tokens(2);
    Draft a = b.base_draft(g1, tokens);
    Draft c = b.base_draft(g2, replaced(tokens, {0, 5}, swaps));
    if (b.try_add({a, c}, [](const std::vector<EmbeddingVector>& v) { return within(dot(v[0], v[1]), 0.64, 0.69); })) {
      kinds[g1] = GroupKind::kDistractor;
      kinds[g2] = GroupKind::kDistractor;
      judge_false.emplace_back(first, first + 1);
      ++made;
    }
  }

  add_until(GroupKind::kSingleton, 40, [&](std::size_t g, std::size_t) {
    return b.try_add({b.base_draft(g, b.fresh_tokens(kTokens))}, [](const auto&) { return true; });
  });

  auto f = finish(b, kinds, kEmbedSeed, judge_true, judge_false, true);
  if (f.challenges.size() != 200) throw std::logic_error("planted fixture must hold 200 challenges");
  return f;
}

DedupFixture make_triplet_fixture(std::uint64_t seed) {
  constexpr std::uint64_t kEmbedSeed = 0;
  Builder b(seed, kEmbedSeed);
  std::map<std::size_t, GroupKind> kinds;
  std::vector<std::pair<std::size_t, std::size_t>> judge_true;
  for (std::size_t made = 0; made < 20;) {
    const std::size_t g = b.new_group();
    const std::size_t first = b.drafts().size();
    const auto tokens = b.fresh_tokens(kTokens);
    const auto swaps = b.fresh_tokens(3);
    Draft a = b.base_draft(g, tokens);
    Draft c = b.base_draft(g, replaced(tokens, {2}, {swaps[0]}));
    Draft e = b.base_draft(g, replaced(tokens, {2, 4}, {swaps[1], swaps[2]}));
    const bool ok = b.try_add({a, c, e}, [](const std::vector<EmbeddingVector>& v) {
      return dot(v[0], v[1]) >= 0.75 && within(dot(v[0], v[2]), 0.64, 0.69) && within(dot(v[1], v[2]), 0.5, 0.69);
    });
    if (!ok) continue;
    kinds[g] = GroupKind::kParaphrase;
    judge_true.insert(judge_true.end(), {{first, first + 1}, {first, first + 2}, {first + 1, first + 2}});
    ++made;
  }
  return finish(b, kinds, kEmbedSeed, judge_true, {}, true);
}

DedupFixture make_chain_fixture(std::uint64_t seed) {
  constexpr std::uint64_t kEmbedSeed = 0;
  constexpr std::size_t kChain = 10;
  for (std::uint64_t attempt = 0;; ++attempt) {
    Builder b(seed + attempt * 1000, kEmbedSeed);
    std::map<std::size_t, GroupKind> kinds;
    const auto tokens = b.fresh_tokens(kChain + kTokens - 1);
    std::vector<Draft> chain;
    for (std::size_t i = 0; i < kChain; ++i) {
      const std::size_t g = b.new_group();
      kinds[g] = GroupKind::kChain;
      chain.push_back(b.base_draft(g, std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                                               tokens.begin() + static_cast<std::ptrdiff_t>(i + kTokens))));
    }
    // Pair the chain as (0,1), (2,3), ...
    for (std::size_t i = 0; i < kChain; ++i) chain[i].group = chain[i - i % 2].group;
    const bool ok = b.try_add(chain, [&](const std::vector<EmbeddingVector>& v) {
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (dot(v[i], v[i + 1]) < 0.75) return false;
      }
      for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 3; j < v.size(); ++j) {
          if (dot(v[i], v[j]) >= 0.6) return false;
        }
      }
      return true;
    });
    if (!ok) continue;
    std::size_t singles = 0;
    for (int tries = 0; singles < 10 && tries < 1000; ++tries) {
      const std::size_t g = b.new_group();
      if (b.try_add({b.base_draft(g, b.fresh_tokens(kTokens))}, [](const auto&) { return true; })) {
        kinds[g] = GroupKind::kSingleton;
        ++singles;
      }
    }
    if (singles < 10) continue;
    return finish(b, kinds, kEmbedSeed, {}, {}, false);
  }
}

PairScores score_pairs(const DedupOutcome& outcome, const std::vector<Challenge>& input,
                       const std::vector<PlantedGroup>& groups) {
  std::map<std::string, std::string> cluster_of;
  for (const auto& c : input) cluster_of[c.id] = c.id;
  for (const auto& r : outcome.removed) cluster_of[r.removed_id] = r.kept_id;

  std::map<std::string, std::size_t> truth_of;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto& id : groups[g].ids) truth_of[id] = g;
  }

  PairScores s;
  for (std::size_t i = 0; i < input.size(); ++i) {
    for (std::size_t j = i + 1; j < input.size(); ++j) {
      const bool predicted = cluster_of.at(input[i].id) == cluster_of.at(input[j].id);
      const bool truth = truth_of.at(input[i].id) == truth_of.at(input[j].id);
      s.predicted += predicted;
      s.truth += truth;
      s.correct += predicted && truth;
    }
  }
  s.precision = s.predicted == 0 ? 1.0 : static_cast<double>(s.correct) / static_cast<double>(s.predicted);
  s.recall = s.truth == 0 ? 1.0 : static_cast<double>(s.correct) / static_cast<double>(s.truth);
  if (s.precision + s.recall > 0) s.f1 = 2 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

std::filesystem::path fixture_dir() { return FORGE_FIXTURE_DIR; }

}  // namespace forge::testing
