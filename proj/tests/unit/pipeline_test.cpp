#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "forge/config.hpp"
#include "forge/error.hpp"
#include "forge/model.hpp"
#include "forge/pipeline.hpp"

namespace forge {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    work_ = fs::temp_directory_path() / ("forge_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(work_);
  }
  void TearDown() override { fs::remove_all(work_); }

  PipelineConfig config(std::vector<std::string> overrides = {}) const {
    overrides.push_back("paths.work_dir=" + work_.string());
    return load_config(testing::fixture_dir() / "e2e" / "config.json", overrides);
  }

  fs::path work_;
};

TEST(StageNames, RoundTrip) {
  for (auto s : {Stage::kCollect, Stage::kFilter, Stage::kExtract, Stage::kDedup, Stage::kIndex, Stage::kSearch,
                 Stage::kServe, Stage::kEval, Stage::kAudit}) {
    EXPECT_EQ(parse_stage(to_string(s)), s);
  }
  EXPECT_FALSE(parse_stage("deploy").has_value());
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorCode::kConfigError), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kInvalidRequest), 2);
  EXPECT_EQ(exit_code_for(ErrorCode::kMissingInput), 3);
  EXPECT_EQ(exit_code_for(ErrorCode::kProviderUnavailable), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kServiceUnavailable), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kSchemaViolation), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kProviderMismatch), 4);
  EXPECT_EQ(exit_code_for(ErrorCode::kChecksumMismatch), 5);
  EXPECT_EQ(exit_code_for(ErrorCode::kInternal), 5);
}

TEST_F(PipelineTest, LaterStageWithoutInputsIsMissingInput) {
  for (auto s : {Stage::kFilter, Stage::kExtract, Stage::kDedup, Stage::kIndex, Stage::kEval, Stage::kAudit}) {
    try {
      run_stage(s, config());
      FAIL() << to_string(s);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMissingInput) << to_string(s);
    }
  }
}

TEST_F(PipelineTest, SearchNeedsWish) {
  try {
    run_stage(Stage::kSearch, config());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

TEST_F(PipelineTest, StagesRecordManifest) {
  const auto cfg = config();
  const auto collected = run_stage(Stage::kCollect, cfg);
  EXPECT_EQ(collected.counts.at("bad_urls"), 1);
  run_stage(Stage::kFilter, cfg);
  const auto manifest = nlohmann::json::parse(read_file(work_ / "manifest.json"));
  const auto& filter = manifest.at("stages").at("filter");
  EXPECT_EQ(filter.at("config_hash"), config_hash(cfg));
  EXPECT_EQ(filter.at("seed"), 42);
  EXPECT_TRUE(filter.at("inputs").contains("serp_results.jsonl"));
  EXPECT_TRUE(filter.at("outputs").contains("pages_filtered.jsonl"));
  EXPECT_TRUE(filter.at("outputs").contains("filter_report.json"));
  EXPECT_EQ(filter.at("outputs").at("pages_filtered.jsonl").get<std::string>().size(), 64u);
  EXPECT_TRUE(manifest.at("stages").contains("collect"));
}

TEST_F(PipelineTest, SearchPrintsJson) {
  const auto cfg = config();
  for (auto s : {Stage::kCollect, Stage::kFilter, Stage::kExtract, Stage::kDedup, Stage::kIndex}) run_stage(s, cfg);
  std::ostringstream out;
  StageOptions options;
  options.wish = "drink more water every day";
  options.k = 3;
  options.out = &out;
  run_stage(Stage::kSearch, cfg, options);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j.at("results").size(), 3u);
  EXPECT_EQ(j.at("query"), "drink more water every day");
}

#ifdef FORGE_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(FORGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(PipelineTest, CliExitCodes) {
  const std::string cfg = "-c " + (testing::fixture_dir() / "e2e" / "config.json").string() +
                          " --set paths.work_dir=" + work_.string();
  EXPECT_EQ(run_cli(cfg + " dedup"), 3);
  EXPECT_EQ(run_cli(cfg + " --set dedup.method=magic dedup"), 2);
  EXPECT_EQ(run_cli(cfg + " --set nonsense=1 collect"), 2);
  EXPECT_EQ(run_cli(cfg + " frobnicate"), 2);
  EXPECT_EQ(run_cli(cfg + " collect"), 0);
  EXPECT_TRUE(fs::exists(work_ / "serp_results.jsonl"));
  EXPECT_EQ(run_cli(cfg + " search"), 2);  // --wish is required
}
#endif

}  // namespace
}  // namespace forge
