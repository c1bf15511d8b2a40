#include "catch_amalgamated.hpp"

#include "pmprag/http_client.hpp"
#include "pmprag/keyword_extraction.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/word_retrieval.hpp"

#include <thread>

using namespace pmprag;

namespace {

/// Loopback server on an ephemeral port, stopped on destruction.
class LocalServer {
public:
  LocalServer() {
    server_.Post("/api/chat", [this](const httplib::Request& req, httplib::Response& res) {
      last_body = req.body;
      const auto j = nlohmann::json::parse(req.body);
      const auto user = j.at("messages").back().at("content").get<std::string>();
      res.set_content(nlohmann::json{{"message", {{"role", "assistant"}, {"content", "echo: " + user}}}}.dump(),
                      "application/json");
    });
    server_.Get("/customsearch/v1", [](const httplib::Request& req, httplib::Response& res) {
      if (req.get_param_value("key") != "secret") {
        res.status = 403;
        res.set_content(R"({"error":{"errors":[{"reason":"keyInvalid"}]}})", "application/json");
        return;
      }
      const auto q = req.get_param_value("q");
      res.set_content(nlohmann::json{{"items", {{{"link", "https://x.test/" + q}, {"snippet", "about " + q}}}}}.dump(),
                      "application/json");
    });
    server_.Get("/quota", [](const httplib::Request&, httplib::Response& res) { res.status = 429; });
    server_.Get("/page", [this](const httplib::Request& req, httplib::Response& res) {
      last_user_agent = req.get_header_value("User-Agent");
      res.set_content("<html><body><p>Hello &amp; welcome</p></body></html>", "text/html");
    });
    server_.Get("/moved", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/page"); });
    server_.Post("/tag", [](const httplib::Request& req, httplib::Response& res) {
      // One location span for "Bogor", in code points (ASCII input here).
      const auto pos = req.body.find("Bogor");
      nlohmann::json out = nlohmann::json::array();
      if (pos != std::string::npos)
        out.push_back({{"start", pos}, {"end", pos + 5}, {"pos", "PROPN"}, {"entity", "GPE"}});
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LocalServer() {
    server_.stop();
    thread_.join();
  }

  [[nodiscard]] std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  std::string last_body;
  std::string last_user_agent;

private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

} // namespace

TEST_CASE("transport over loopback", "[http]") {
  LocalServer server;
  HttplibTransport transport;

  const auto page = transport.get(server.url("/page"), {{"User-Agent", "probe"}}, std::chrono::seconds(5));
  CHECK(page.status == 200);
  CHECK(server.last_user_agent == "probe");
  CHECK(transport.get(server.url("/moved"), {}, std::chrono::seconds(5)).body == page.body);
  CHECK(transport.get(server.url("/absent"), {}, std::chrono::seconds(5)).status == 404);

  const auto posted = transport.post(server.url("/tag"), "x", "text/plain", {}, std::chrono::seconds(5));
  CHECK(posted.status == 200);
  CHECK(posted.body == "[]");
}

TEST_CASE("connection failures are transport errors", "[http]") {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  HttplibTransport transport;
  CHECK_THROWS_MATCHES(transport.get("http://127.0.0.1:" + std::to_string(port) + "/", {}, std::chrono::seconds(2)),
                       Error, Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::Transport; }));
}

TEST_CASE("clients over loopback", "[http]") {
  LocalServer server;
  HttplibTransport transport;

  SECTION("chat") {
    LiveBackend live(transport, server.url("/api/chat"), "qwen3:8b");
    Gateway gateway(live);
    const auto ex = gateway.chat(make_request(Purpose::P1, "system", "hello there"));
    CHECK(ex.response_text == "echo: hello there");
    const auto sent = nlohmann::json::parse(server.last_body);
    CHECK(sent["model"] == "qwen3:8b");
    CHECK(sent["stream"] == false);
    CHECK(sent["messages"].size() == 2);
  }
  SECTION("search") {
    GoogleSearchClient search(transport, "secret", "cx", server.url("/customsearch/v1"));
    const auto results = search.search("kata kunci", 5);
    REQUIRE(results.size() == 1);
    CHECK(results[0].url == "https://x.test/kata kunci");
    GoogleSearchClient wrong_key(transport, "nope", "cx", server.url("/customsearch/v1"));
    CHECK_THROWS_MATCHES(wrong_key.search("a", 5), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::SearchTransport; }));
    GoogleSearchClient quota(transport, "secret", "cx", server.url("/quota"));
    CHECK_THROWS_MATCHES(quota.search("a", 5), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::SearchQuota; }));
  }
  SECTION("pages") {
    HttpPageFetcher fetcher(transport);
    const auto body = fetcher.fetch(server.url("/page"));
    REQUIRE(body);
    CHECK(strip_markup(*body) == "Hello & welcome");
    CHECK(server.last_user_agent == kUserAgent);
    CHECK_FALSE(fetcher.fetch(server.url("/absent")));
  }
  SECTION("tagger") {
    HttpTagger tagger(transport, server.url("/tag"));
    const auto tokens = tag_tokens("Aku ke Bogor", tagger);
    REQUIRE(tokens.size() == 1);
    CHECK(tokens[0].surface == "Bogor");
    CHECK(tokens[0].entity == EntityType::Location);
    HttpTagger offline(transport, "http://127.0.0.1:1/tag");
    CHECK_THROWS_MATCHES(offline.tag("x"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == Errc::Tagger; }));
  }
}
