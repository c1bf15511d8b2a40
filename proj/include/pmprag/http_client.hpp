#pragma once

// Socket-backed HttpTransport on cpp-httplib. Only the CLI and the
// network tests include this header.

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include "pmprag/http.hpp"

#include <chrono>
#include <string>

namespace pmprag {

class HttplibTransport final : public HttpTransport {
public:
  HttpResponse get(const std::string& url, const HttpHeaders& headers, std::chrono::seconds timeout) override {
    const auto parts = split_url(url);
    auto client = make_client(parts.origin, timeout);
    auto res = client.Get(parts.target, to_headers(headers));
    return finish(res, "GET " + url);
  }

  HttpResponse post(const std::string& url, const std::string& body, const std::string& content_type,
                    const HttpHeaders& headers, std::chrono::seconds timeout) override {
    const auto parts = split_url(url);
    auto client = make_client(parts.origin, timeout);
    auto res = client.Post(parts.target, to_headers(headers), body, content_type);
    return finish(res, "POST " + url);
  }

private:
  static httplib::Client make_client(const std::string& origin, std::chrono::seconds timeout) {
    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(std::chrono::seconds(std::min<long>(timeout.count(), 30)));
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    return client;
  }

  static httplib::Headers to_headers(const HttpHeaders& headers) {
    httplib::Headers out;
    for (const auto& [k, v] : headers) out.emplace(k, v);
    return out;
  }

  static HttpResponse finish(const httplib::Result& res, const std::string& what) {
    if (!res) fail(Errc::Transport, what + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }
};

} // namespace pmprag
