#include <benchmark/benchmark.h>

#include <random>

#include "forge/mock_providers.hpp"
#include "forge/store.hpp"

namespace {

forge::ChallengeStore make_store(std::size_t n) {
  forge::MockEmbedder embedder(0, 64);
  std::mt19937_64 rng(3);
  std::vector<forge::Challenge> cs;
  for (std::size_t i = 0; i < n; ++i) {
    cs.push_back({forge::challenge_id(i), "t", "", "w",
                  "action " + std::to_string(rng() % 5000) + " word" + std::to_string(rng() % 300), "https://x.com/",
                  forge::Origin::kFixture});
  }
  return forge::build_store(std::move(cs), embedder);
}

void BM_Topk(benchmark::State& state) {
  const auto store = make_store(static_cast<std::size_t>(state.range(0)));
  forge::MockEmbedder embedder(0, 64);
  const auto query = embedder.embed("action word7");
  for (auto _ : state) {
    benchmark::DoNotOptimize(forge::topk(store, query, 50));
  }
}
BENCHMARK(BM_Topk)->Arg(1000)->Arg(3531)->Arg(20000)->Unit(benchmark::kMicrosecond);

void BM_StoreRoundTrip(benchmark::State& state) {
  const auto store = make_store(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(forge::deserialize_store(forge::serialize_store(store)));
  }
}
BENCHMARK(BM_StoreRoundTrip)->Arg(3531)->Unit(benchmark::kMillisecond);

}  // namespace
