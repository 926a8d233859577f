#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "forge/providers.hpp"
#include "forge/store.hpp"

namespace forge {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 binds any free port
  std::size_t retrieve_k = 50;
  std::optional<std::filesystem::path> static_dir;  // UI bundle, optional
};

/// HTTP front end:
///   GET /api/search?q=&k=&validate=  -> {query, degraded, results[]}
///   GET /api/health                  -> {status, corpus_size, provider_tag}
/// plus static files at "/" when a bundle directory exists.
class SearchServer {
 public:
  SearchServer(std::shared_ptr<const ChallengeStore> store, Providers providers,
               ServeOptions options);
  ~SearchServer();

  SearchServer(const SearchServer&) = delete;
  SearchServer& operator=(const SearchServer&) = delete;

  /// Binds the socket; returns the bound port. Throws Error(kIoError).
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace forge
