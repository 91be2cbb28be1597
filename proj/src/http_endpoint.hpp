#pragma once

#include <string>

#include "fairaudit/error.hpp"

namespace fairaudit::detail {

// Splits "scheme://host[:port][/prefix]" into the client base
// (scheme://host[:port]) and the path prefix (no trailing slash).
struct HttpEndpoint {
  std::string base;
  std::string prefix;
  bool https = false;
};

inline HttpEndpoint parse_http_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("URL must start with http:// or https://: " + url);
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported URL scheme \"" + scheme + "\": " + url);
  }
  std::string rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : rest.substr(slash);
  if (hostport.empty()) throw ConfigError("URL has no host: " + url);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  HttpEndpoint ep;
  ep.base = scheme + "://" + hostport;
  ep.prefix = prefix;
  ep.https = scheme == "https";
  return ep;
}

}  // namespace fairaudit::detail
