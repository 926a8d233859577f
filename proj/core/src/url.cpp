#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "forge/error.hpp"
#include "forge/model.hpp"

namespace forge {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool valid_scheme(std::string_view scheme) {
  if (scheme.empty() || !std::isalpha(static_cast<unsigned char>(scheme.front()))) return false;
  return std::all_of(scheme.begin(), scheme.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '+' || c == '-' || c == '.';
  });
}

bool valid_host_char(unsigned char c) {
  return std::isalnum(c) || c == '-' || c == '.' || c == '_' || c >= 0x80;
}

bool is_tracking_param(std::string_view key) {
  const std::string k = lower(key);
  return k.rfind("utm_", 0) == 0 || k == "fbclid" || k == "gclid";
}

struct ParsedUrl {
  std::string scheme;
  std::string userinfo;
  std::string host;
  std::string port;
  std::string path;
  std::string query;
};

[[noreturn]] void bad_url(std::string_view raw, std::string_view why) {
  throw Error(ErrorCode::kBadUrl, "bad url '" + std::string(raw) + "': " + std::string(why));
}

ParsedUrl parse(std::string_view raw) {
  std::string_view s = raw;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) bad_url(raw, "empty");

  ParsedUrl url;
  const auto sep = s.find("://");
  if (sep == std::string_view::npos) bad_url(raw, "not absolute");
  if (!valid_scheme(s.substr(0, sep))) bad_url(raw, "invalid scheme");
  url.scheme = lower(s.substr(0, sep));
  s.remove_prefix(sep + 3);

  const auto authority_end = s.find_first_of("/?#");
  std::string_view authority = s.substr(0, authority_end);
  s = authority_end == std::string_view::npos ? std::string_view{} : s.substr(authority_end);

  if (const auto at = authority.rfind('@'); at != std::string_view::npos) {
    url.userinfo = std::string(authority.substr(0, at));
    authority.remove_prefix(at + 1);
  }

  std::string_view host = authority;
  std::string_view port;
  if (!authority.empty() && authority.front() == '[') {
    const auto close = authority.find(']');
    if (close == std::string_view::npos) bad_url(raw, "unterminated IPv6 literal");
    host = authority.substr(0, close + 1);
    std::string_view after = authority.substr(close + 1);
    if (!after.empty()) {
      if (after.front() != ':') bad_url(raw, "junk after IPv6 literal");
      port = after.substr(1);
    }
  } else if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
    host = authority.substr(0, colon);
    port = authority.substr(colon + 1);
  }
  while (!host.empty() && host.back() == '.') host.remove_suffix(1);
  if (host.empty()) bad_url(raw, "missing host");
  if (host.front() != '[' &&
      !std::all_of(host.begin(), host.end(), [](unsigned char c) { return valid_host_char(c); })) {
    bad_url(raw, "invalid host");
  }
  if (!std::all_of(port.begin(), port.end(), [](unsigned char c) { return std::isdigit(c); })) {
    bad_url(raw, "invalid port");
  }
  url.host = lower(host);
  url.port = std::string(port);

  if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
  if (const auto q = s.find('?'); q != std::string_view::npos) {
    url.query = std::string(s.substr(q + 1));
    s = s.substr(0, q);
  }
  url.path = std::string(s);
  return url;
}

}  // namespace

std::string normalize_url(std::string_view raw) {
  ParsedUrl url = parse(raw);

  std::string port = url.port;
  while (port.size() > 1 && port.front() == '0') port.erase(port.begin());
  if ((url.scheme == "http" && port == "80") || (url.scheme == "https" && port == "443")) {
    port.clear();
  }

  while (!url.path.empty() && url.path.back() == '/') url.path.pop_back();

  std::vector<std::pair<std::string, std::string>> params;  // (key, whole parameter)
  std::string_view query = url.query;
  while (!query.empty()) {
    const auto amp = query.find('&');
    std::string_view param = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    if (param.empty()) continue;
    std::string_view key = param.substr(0, param.find('='));
    if (is_tracking_param(key)) continue;
    params.emplace_back(std::string(key), std::string(param));
  }
  std::sort(params.begin(), params.end());

  std::string out = url.scheme + "://";
  if (!url.userinfo.empty()) out += url.userinfo + "@";
  out += url.host;
  if (!port.empty()) out += ":" + port;
  out += url.path;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out += i == 0 ? '?' : '&';
    out += params[i].second;
  }
  return out;
}

std::string url_host(std::string_view normalized_url) { return parse(normalized_url).host; }

std::string base_domain(std::string_view host) {
  std::string h = lower(host);
  while (!h.empty() && h.back() == '.') h.pop_back();
  if (h.empty() || h.front() == '[') return h;
  if (std::all_of(h.begin(), h.end(), [](unsigned char c) { return std::isdigit(c) || c == '.'; })) {
    return h;  // IPv4
  }

  std::vector<std::string_view> labels;
  std::string_view rest = h;
  while (true) {
    const auto dot = rest.find('.');
    labels.push_back(rest.substr(0, dot));
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  if (labels.size() <= 2) return h;

  static constexpr std::array<std::string_view, 24> kTwoLabelSuffixes = {
      "co.uk", "org.uk", "ac.uk", "gov.uk", "me.uk",  "com.au", "net.au", "org.au",
      "co.nz", "org.nz", "co.jp", "ne.jp", "co.in",  "com.br", "com.mx", "co.za",
      "com.sg", "com.cn", "com.hk", "com.tw", "co.kr", "com.tr", "com.ar", "co.il"};
  const std::string last_two =
      std::string(labels[labels.size() - 2]) + "." + std::string(labels.back());
  const bool multi = std::find(kTwoLabelSuffixes.begin(), kTwoLabelSuffixes.end(), last_two) !=
                     kTwoLabelSuffixes.end();
  const std::size_t keep = multi ? 3 : 2;

  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out += '.';
    out += labels[i];
  }
  return out;
}

}  // namespace forge
