#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>

#include "forge/config.hpp"
#include "forge/error.hpp"

namespace forge {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(Config, DefaultsMatchTypedDefaults) {
  const auto c = config_from_json(nlohmann::json::object(), "/base");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.providers.mode, "mock");
  EXPECT_EQ(c.dedup.method, DedupMethod::kFull);
  EXPECT_DOUBLE_EQ(c.dedup.bands.low, 0.625);
  EXPECT_DOUBLE_EQ(c.dedup.bands.high, 0.7);
  EXPECT_EQ(c.keep_threshold, 6);
  EXPECT_EQ(c.search_k, 5u);
  EXPECT_EQ(c.retrieve_k, 50u);
  EXPECT_TRUE(c.search_validate);
  EXPECT_EQ(c.paths.work_dir, std::filesystem::path("/base/forge_out"));
  EXPECT_FALSE(c.paths.pages.has_value());
  EXPECT_EQ(c.effective, default_config_json());
}

TEST(Config, UserValuesOverlayDefaults) {
  const auto c = config_from_json({{"dedup", {{"method", "no_judge"}, {"low", 0.5}}}, {"seed", 7}}, "/base");
  EXPECT_EQ(c.dedup.method, DedupMethod::kNoJudge);
  EXPECT_DOUBLE_EQ(c.dedup.bands.low, 0.5);
  EXPECT_DOUBLE_EQ(c.dedup.bands.high, 0.7);
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, RelativePathsResolveAgainstBase) {
  const auto c = config_from_json({{"paths", {{"serp", {"a.jsonl", "/abs/b.jsonl"}}, {"pages", "p/pages.jsonl"}}}}, "/cfg");
  ASSERT_EQ(c.paths.serp.size(), 2u);
  EXPECT_EQ(c.paths.serp[0], std::filesystem::path("/cfg/a.jsonl"));
  EXPECT_EQ(c.paths.serp[1], std::filesystem::path("/abs/b.jsonl"));
  EXPECT_EQ(c.paths.pages, std::filesystem::path("/cfg/p/pages.jsonl"));
}

TEST(Config, Rejections) {
  const std::vector<nlohmann::json> bad{
      {{"bogus", 1}},
      {{"dedup", {{"nope", 1}}}},
      {{"dedup", {{"low", 0.8}, {"high", 0.7}}}},
      {{"dedup", {{"method", "magic"}}}},
      {{"providers", {{"mode", "cloud"}}}},
      {{"seed", "many"}},
      {{"seed", -1}},
      {{"collect", {{"keep_threshold", 11}}}},
      {{"serve", {{"port", 70000}}}},
      {{"dedup", "full"}},
  };
  for (const auto& j : bad) {
    EXPECT_EQ(code_of([&] { config_from_json(j, "/"); }), ErrorCode::kConfigError) << j.dump();
  }
}

TEST(Config, Overrides) {
  auto j = nlohmann::json::object();
  apply_override(j, "dedup.low=0.6");
  apply_override(j, "dedup.method=minhash");
  apply_override(j, "search.validate=false");
  EXPECT_EQ(j.at("dedup").at("low"), 0.6);
  EXPECT_EQ(j.at("dedup").at("method"), "minhash");
  EXPECT_EQ(j.at("search").at("validate"), false);
  EXPECT_EQ(code_of([&] { apply_override(j, "novalue"); }), ErrorCode::kConfigError);
  EXPECT_EQ(code_of([&] { apply_override(j, "=3"); }), ErrorCode::kConfigError);
  EXPECT_EQ(code_of([&] { apply_override(j, "a..b=3"); }), ErrorCode::kConfigError);
}

TEST(Config, LoadFileWithOverridesAndHash) {
  const auto dir = std::filesystem::temp_directory_path() / "forge_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "config.json";
  {
    std::ofstream(path) << R"({"seed": 3, "paths": {"work_dir": "out"}})";
  }
  const auto a = load_config(path);
  EXPECT_EQ(a.seed, 3u);
  EXPECT_EQ(a.paths.work_dir, dir / "out");
  const auto b = load_config(path, {"seed=4"});
  EXPECT_EQ(b.seed, 4u);
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a), config_hash(load_config(path)));
  EXPECT_EQ(config_hash(a).size(), 64u);
  EXPECT_EQ(code_of([&] { load_config(dir / "missing.json"); }), ErrorCode::kConfigError);
  {
    std::ofstream(path) << "{not json";
  }
  EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::kConfigError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace forge
