// Command-line entry point: one subcommand per pipeline stage.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/pipeline.hpp"

namespace {

void report_error(const std::string& stage, const std::string& code, const std::string& message) {
  std::cerr << nlohmann::json{{"error", message}, {"code", code}, {"stage", stage}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curate, deduplicate and search a corpus of 30-day challenges"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string wish;
  std::size_t k = 0;
  bool no_validate = false;

  app.add_option("-c,--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override a config key, e.g. --set dedup.low=0.6");

  for (const char* name : {"collect", "filter", "extract", "dedup", "index", "search", "serve", "eval", "audit"}) {
    auto* sub = app.add_subcommand(name);
    if (std::string(name) == "search") {
      sub->add_option("--wish", wish, "What the user wants to achieve")->required();
      sub->add_option("-k", k, "Number of results");
      sub->add_flag("--no-validate", no_validate, "Skip the relevance check");
    }
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string stage_name = app.get_subcommands().front()->get_name();
  try {
    const auto config = forge::load_config(config_path, overrides);
    forge::StageOptions options;
    if (!wish.empty()) options.wish = wish;
    if (k > 0) options.k = k;
    if (no_validate) options.validate = false;
    const auto result = forge::run_stage(*forge::parse_stage(stage_name), config, options);
    if (stage_name != "search") {
      std::cerr << nlohmann::json{{"stage", stage_name}, {"counts", result.counts}}.dump() << '\n';
    }
    return 0;
  } catch (const forge::Error& e) {
    report_error(stage_name, std::string(forge::to_string(e.code())), e.what());
    return forge::exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_error(stage_name, "Internal", e.what());
    return 5;
  }
}
