#pragma once

// Transport seam for every outbound HTTP call. The library only talks to
// this interface; pmprag/http_client.hpp supplies the socket-backed
// implementation.

#include "pmprag/error.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <string>
#include <string_view>

namespace pmprag {

using HttpHeaders = std::map<std::string, std::string>;

struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
public:
  virtual ~HttpTransport() = default;

  /// Throws Error(Errc::Transport) when no HTTP response was obtained.
  virtual HttpResponse get(const std::string& url, const HttpHeaders& headers,
                           std::chrono::seconds timeout) = 0;
  virtual HttpResponse post(const std::string& url, const std::string& body,
                            const std::string& content_type, const HttpHeaders& headers,
                            std::chrono::seconds timeout) = 0;
};

/// Wraps another transport and counts calls. With no inner transport every
/// call is refused, which is how replay runs prove they stay offline.
class CountingTransport final : public HttpTransport {
public:
  explicit CountingTransport(HttpTransport* inner = nullptr) : inner_(inner) {}

  HttpResponse get(const std::string& url, const HttpHeaders& headers,
                   std::chrono::seconds timeout) override {
    ++calls_;
    if (inner_ == nullptr) fail(Errc::Transport, "network disabled: GET " + url);
    return inner_->get(url, headers, timeout);
  }

  HttpResponse post(const std::string& url, const std::string& body, const std::string& content_type,
                    const HttpHeaders& headers, std::chrono::seconds timeout) override {
    ++calls_;
    if (inner_ == nullptr) fail(Errc::Transport, "network disabled: POST " + url);
    return inner_->post(url, body, content_type, headers, timeout);
  }

  [[nodiscard]] long calls() const noexcept { return calls_.load(); }

private:
  HttpTransport* inner_;
  std::atomic<long> calls_{0};
};

inline std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
        c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

struct UrlParts {
  std::string origin; // scheme://host[:port]
  std::string target; // /path?query, at least "/"
};

inline UrlParts split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) fail(Errc::InvalidArgument, "not an absolute URL: " + url);
  const auto path_start = url.find_first_of("/?#", scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  std::string target = url.substr(path_start);
  if (const auto hash = target.find('#'); hash != std::string::npos) target.resize(hash);
  if (target.empty() || target.front() != '/') target.insert(target.begin(), '/');
  return {url.substr(0, path_start), target};
}

} // namespace pmprag
