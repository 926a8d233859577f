#include "forge/pipeline.hpp"

#include <iostream>

#include <spdlog/spdlog.h>

#include "forge/audit.hpp"
#include "forge/checksum.hpp"
#include "forge/collect.hpp"
#include "forge/evaluate.hpp"
#include "forge/extract.hpp"
#include "forge/search.hpp"
#include "forge/server.hpp"
#include "forge/store.hpp"
#include "forge/text_match.hpp"

namespace forge {
namespace fs = std::filesystem;
namespace {

struct StageIo {
  const PipelineConfig& config;
  Stage stage;
  std::vector<fs::path> inputs;
  StageResult result;

  fs::path artifact(std::string_view name) const { return config.paths.work_dir / name; }

  const fs::path& require(const fs::path& path) {
    if (!fs::exists(path)) {
      throw Error(ErrorCode::kMissingInput,
                  std::string(to_string(stage)) + ": missing input " + path.string());
    }
    inputs.push_back(path);
    return path;
  }

  void wrote(const fs::path& path) { result.outputs.push_back(path); }

  void write_text(std::string_view name, std::string_view content) {
    write_file(artifact(name), content);
    wrote(artifact(name));
  }

  void write_rows(std::string_view name, const std::vector<nlohmann::json>& rows) {
    write_jsonl(artifact(name), rows);
    wrote(artifact(name));
  }

  void write_json(std::string_view name, const nlohmann::json& value) { write_text(name, value.dump(2) + "\n"); }
};

std::string manifest_key(const fs::path& path, const fs::path& work_dir) {
  const auto rel = path.lexically_relative(work_dir);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return path.generic_string();
}

void record_manifest(const StageIo& io) {
  const fs::path path = io.artifact(artifacts::kManifest);
  nlohmann::json manifest = nlohmann::json::object();
  if (fs::exists(path)) {
    manifest = nlohmann::json::parse(read_file(path), nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object()) manifest = nlohmann::json::object();
  }
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& p : io.inputs) inputs[manifest_key(p, io.config.paths.work_dir)] = sha256_file(p);
  nlohmann::json outputs = nlohmann::json::object();
  for (const auto& p : io.result.outputs) outputs[manifest_key(p, io.config.paths.work_dir)] = sha256_file(p);
  manifest["stages"][std::string(to_string(io.stage))] = {{"config_hash", config_hash(io.config)},
                                                          {"seed", io.config.seed},
                                                          {"inputs", inputs},
                                                          {"outputs", outputs},
                                                          {"counts", io.result.counts}};
  write_file(path, manifest.dump(2) + "\n");
}

Stopwords stopwords_for(StageIo& io) {
  if (io.config.paths.stopwords) return Stopwords::load(io.require(*io.config.paths.stopwords));
  return Stopwords::defaults();
}

template <typename T>
std::vector<T> read_rows(const fs::path& path) {
  std::vector<T> out;
  for (const auto& row : read_jsonl(path)) {
    try {
      out.push_back(row.get<T>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
    }
  }
  return out;
}

void run_collect(StageIo& io) {
  if (io.config.paths.serp.empty()) throw Error(ErrorCode::kMissingInput, "collect: paths.serp is empty");
  for (const auto& p : io.config.paths.serp) io.require(p);
  const auto ingest = ingest_serp(io.config.paths.serp);
  io.write_rows(artifacts::kSerpResults, to_json_rows(ingest.records));
  io.result.counts = {{"raw_results", ingest.n_raw_results},
                      {"bad_urls", ingest.n_bad_urls},
                      {"unique_urls", ingest.records.size()}};
}

void run_filter(StageIo& io, Providers& providers) {
  const auto records = read_rows<SearchResultRecord>(io.require(io.artifact(artifacts::kSerpResults)));
  if (!io.config.paths.pages) throw Error(ErrorCode::kMissingInput, "filter: paths.pages is not set");
  auto fetcher = FixtureFetcher::load(io.require(*io.config.paths.pages));
  const Blocklist blocklist =
      io.config.paths.blocklist ? Blocklist::load(io.require(*io.config.paths.blocklist)) : Blocklist::defaults();
  const auto filtered = filter_pages(records, blocklist, fetcher, *providers.judge,
                                     {io.config.keep_threshold, providers.max_in_flight});
  io.write_rows(artifacts::kPagesFiltered, to_json_rows(filtered.kept));
  io.write_json(artifacts::kFilterReport, filtered.report);
  io.result.counts = filtered.report;
}

void run_extract(StageIo& io, Providers& providers) {
  const auto pages = read_rows<PageDocument>(io.require(io.artifact(artifacts::kPagesFiltered)));
  const auto out = extract_all(*providers.judge, pages, providers.max_in_flight);
  write_challenges(io.artifact(artifacts::kChallenges), out.challenges);
  io.wrote(io.artifact(artifacts::kChallenges));
  io.write_json(artifacts::kExtractionReport, out.report);
  io.result.counts = out.report;
}

void run_dedup(StageIo& io, Providers& providers) {
  const auto challenges = read_challenges(io.require(io.artifact(artifacts::kChallenges)));
  const auto stopwords = stopwords_for(io);
  const auto outcome = dedup_run(challenges, providers, stopwords, io.config.dedup);
  write_challenges(io.artifact(artifacts::kChallengesDedup), outcome.deduplicated);
  io.wrote(io.artifact(artifacts::kChallengesDedup));
  io.write_json(artifacts::kDedupAudit, outcome.audit);
  io.write_rows(artifacts::kRemovedMap, to_json_rows(outcome.removed));
  io.result.counts = outcome.audit;
}

void run_index(StageIo& io, Providers& providers) {
  auto challenges = read_challenges(io.require(io.artifact(artifacts::kChallengesDedup)));
  const auto store = build_store(std::move(challenges), *providers.embedder);
  save_store(store, io.artifact(artifacts::kStore));
  io.wrote(io.artifact(artifacts::kStore));
  io.result.counts = {{"challenges", store.size()}, {"dim", store.dim()}, {"provider_tag", store.provider_tag()}};
}

void run_search(StageIo& io, Providers& providers, const StageOptions& options) {
  if (!options.wish) throw Error(ErrorCode::kConfigError, "search: a wish is required");
  const auto store = load_store(io.require(io.artifact(artifacts::kStore)));
  SearchRequest request{*options.wish, options.k.value_or(io.config.search_k), io.config.retrieve_k,
                        options.validate.value_or(io.config.search_validate)};
  const auto response = search(store, providers, request);
  std::ostream& out = options.out ? *options.out : std::cout;
  out << nlohmann::json(response).dump(2) << '\n';
  io.result.counts = {{"results", response.results.size()}, {"degraded", response.degraded}};
}

void run_serve(StageIo& io, Providers& providers) {
  auto store = std::make_shared<const ChallengeStore>(load_store(io.require(io.artifact(artifacts::kStore))));
  ServeOptions options{io.config.serve_host, io.config.serve_port, io.config.retrieve_k, io.config.paths.static_dir};
  SearchServer server(store, providers, options);
  const int port = server.bind();
  spdlog::info("serving {} challenges on http://{}:{}", store->size(), io.config.serve_host, port);
  server.run();
}

void run_eval(StageIo& io, Providers& providers) {
  const auto store = load_store(io.require(io.artifact(artifacts::kStore)));
  if (!io.config.paths.queries) throw Error(ErrorCode::kMissingInput, "eval: paths.queries is not set");
  const auto queries = load_labeled_queries(io.require(*io.config.paths.queries));
  const auto report = evaluate_search(store, providers, queries, {io.config.retrieve_k, providers.max_in_flight});
  io.write_json(artifacts::kEvalReport, report_to_json(report));
  io.write_text(artifacts::kEvalCsv, report_to_csv(report));
  io.write_text(artifacts::kPrPoints, pr_points_to_csv(report));
  io.result.counts = {{"queries", queries.size()},
                      {"failed_with_filtering", report.with_filtering.failed_queries},
                      {"failed_without_filtering", report.without_filtering.failed_queries}};
}

void run_audit(StageIo& io, Providers& providers) {
  const auto before = read_challenges(io.require(io.artifact(artifacts::kChallenges)));
  const auto after = read_challenges(io.require(io.artifact(artifacts::kChallengesDedup)));
  const auto removed_rows = read_jsonl(io.require(io.artifact(artifacts::kRemovedMap)));
  std::vector<RemovedEntry> removed;
  for (const auto& row : removed_rows) {
    try {
      removed.push_back({row.at("removed_id").get<std::string>(), row.at("kept_id").get<std::string>(),
                         row.at("stage").get<std::string>()});
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("removed map: ") + e.what());
    }
  }
  const auto sheets = audit_dedup(io.config.audit_sample, io.config.seed, removed, before, after, *providers.embedder);
  std::vector<nlohmann::json> precision;
  for (const auto& row : sheets.precision) precision.push_back(to_json(row));
  std::vector<nlohmann::json> recall;
  for (const auto& row : sheets.recall) recall.push_back(to_json(row));
  io.write_rows(artifacts::kAuditPrecision, precision);
  io.write_rows(artifacts::kAuditRecall, recall);
  io.result.counts = {{"precision_rows", precision.size()},
                      {"recall_rows", recall.size()},
                      {"precision_truncated", sheets.precision_truncated},
                      {"recall_truncated", sheets.recall_truncated},
                      {"removed_fraction", sheets.removed_fraction}};
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kCollect: return "collect";
    case Stage::kFilter: return "filter";
    case Stage::kExtract: return "extract";
    case Stage::kDedup: return "dedup";
    case Stage::kIndex: return "index";
    case Stage::kSearch: return "search";
    case Stage::kServe: return "serve";
    case Stage::kEval: return "eval";
    case Stage::kAudit: return "audit";
  }
  return "unknown";
}

std::optional<Stage> parse_stage(std::string_view text) {
  for (auto s : {Stage::kCollect, Stage::kFilter, Stage::kExtract, Stage::kDedup, Stage::kIndex, Stage::kSearch,
                 Stage::kServe, Stage::kEval, Stage::kAudit}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

StageResult run_stage(Stage stage, const PipelineConfig& config, const StageOptions& options) {
  StageIo io{config, stage, {}, {}};
  if (stage == Stage::kCollect) {
    run_collect(io);
  } else {
    Providers providers = make_providers(config.providers);
    switch (stage) {
      case Stage::kFilter: run_filter(io, providers); break;
      case Stage::kExtract: run_extract(io, providers); break;
      case Stage::kDedup: run_dedup(io, providers); break;
      case Stage::kIndex: run_index(io, providers); break;
      case Stage::kSearch: run_search(io, providers, options); break;
      case Stage::kServe: run_serve(io, providers); break;
      case Stage::kEval: run_eval(io, providers); break;
      case Stage::kAudit: run_audit(io, providers); break;
      case Stage::kCollect: break;
    }
  }
  if (stage != Stage::kSearch && stage != Stage::kServe) record_manifest(io);
  return io.result;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kInvalidRequest:
      return 2;
    case ErrorCode::kMissingInput:
      return 3;
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kServiceUnavailable:
    case ErrorCode::kSchemaViolation:
    case ErrorCode::kProviderMismatch:
      return 4;
    default:
      return 5;
  }
}

}  // namespace forge
