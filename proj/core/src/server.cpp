#include "forge/server.hpp"

#include <charconv>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "forge/error.hpp"
#include "forge/search.hpp"

namespace forge {
namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const Error& e) {
  send_json(res, status, {{"error", e.what()}, {"code", to_string(e.code())}});
}

std::size_t parse_k(const std::string& text) {
  std::size_t k = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, k);
  if (ec != std::errc() || ptr != end) throw Error(ErrorCode::kInvalidRequest, "k must be an integer");
  return k;
}

bool parse_flag(const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw Error(ErrorCode::kInvalidRequest, "validate must be true or false");
}

}  // namespace

struct SearchServer::Impl {
  std::shared_ptr<const ChallengeStore> store;
  Providers providers;
  ServeOptions options;
  httplib::Server http;
  int port = -1;

  void handle_search(const httplib::Request& req, httplib::Response& res) {
    try {
      SearchRequest request;
      request.retrieve_k = options.retrieve_k;
      request.wish = req.get_param_value("q");
      if (req.has_param("k")) request.k = parse_k(req.get_param_value("k"));
      if (req.has_param("validate")) request.validate = parse_flag(req.get_param_value("validate"));
      send_json(res, 200, search(*store, providers, request));
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::kInvalidRequest:
          send_error(res, 400, e);
          break;
        case ErrorCode::kServiceUnavailable:
          send_error(res, 503, e);
          break;
        default:
          spdlog::error("search failed: {}", e.what());
          send_error(res, 500, e);
      }
    } catch (const std::exception& e) {
      spdlog::error("search failed: {}", e.what());
      send_json(res, 500, {{"error", e.what()}, {"code", "Internal"}});
    }
  }
};

SearchServer::SearchServer(std::shared_ptr<const ChallengeStore> store, Providers providers,
                           ServeOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->store = std::move(store);
  impl_->providers = std::move(providers);
  impl_->options = std::move(options);

  auto* impl = impl_.get();
  impl->http.Get("/api/search",
                 [impl](const httplib::Request& req, httplib::Response& res) { impl->handle_search(req, res); });
  impl->http.Get("/api/health", [impl](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200,
              {{"status", "ok"}, {"corpus_size", impl->store->size()}, {"provider_tag", impl->store->provider_tag()}});
  });
  if (impl->options.static_dir && std::filesystem::is_directory(*impl->options.static_dir)) {
    impl->http.set_mount_point("/", impl->options.static_dir->string());
  }
}

SearchServer::~SearchServer() { stop(); }

int SearchServer::bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(o.host);
  } else if (impl_->http.bind_to_port(o.host, o.port)) {
    impl_->port = o.port;
  }
  if (impl_->port <= 0) {
    throw Error(ErrorCode::kIoError, "cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void SearchServer::run() {
  if (impl_->port <= 0) throw Error(ErrorCode::kInternal, "SearchServer::run called before bind");
  impl_->http.listen_after_bind();
}

void SearchServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace forge
