#include "catch_amalgamated.hpp"

#include "pmprag/llm_gateway.hpp"

#include "fake_network.hpp"
#include "temp_dir.hpp"

#include <thread>

using namespace pmprag;

namespace {

bool has_code(const Error& e, Errc code) { return e.code() == code; }

auto code_is(Errc code) {
  return Catch::Matchers::Predicate<Error>([code](const Error& e) { return has_code(e, code); },
                                           std::string("error code ") + std::string(errc_name(code)));
}

GatewayOptions no_sleep(std::vector<std::chrono::milliseconds>* slept = nullptr) {
  GatewayOptions o;
  o.sleep = [slept](std::chrono::milliseconds d) {
    if (slept) slept->push_back(d);
  };
  return o;
}

} // namespace

TEST_CASE("request shape is validated", "[gateway]") {
  CHECK_NOTHROW(make_request(Purpose::P1, "sys", "user").validate());
  ChatRequest no_system{{{Role::User, "u"}}, Purpose::P1};
  CHECK_THROWS_MATCHES(no_system.validate(), Error, code_is(Errc::InvalidArgument));
  ChatRequest two_systems{{{Role::System, "a"}, {Role::System, "b"}, {Role::User, "u"}}, Purpose::P1};
  CHECK_THROWS_AS(two_systems.validate(), Error);
  ChatRequest empty_user{{{Role::System, "a"}, {Role::User, ""}}, Purpose::P1};
  CHECK_THROWS_AS(empty_user.validate(), Error);
  ChatRequest no_user{{{Role::System, "a"}, {Role::Assistant, "x"}}, Purpose::P1};
  CHECK_THROWS_AS(no_user.validate(), Error);
}

TEST_CASE("request digest", "[gateway]") {
  const auto a = make_request(Purpose::P1, "sys", "user");
  const auto b = make_request(Purpose::P2, "sys", "user");
  // Purpose tags are metadata; the digest covers messages only.
  CHECK(request_digest(a.messages) == request_digest(b.messages));
  CHECK(request_digest(a.messages).size() == 64);
  CHECK(request_digest(a.messages) != request_digest(make_request(Purpose::P1, "sys", "user ").messages));
  // Field boundaries cannot be shifted to collide.
  CHECK(request_digest(make_request(Purpose::P1, "ab\nuser\n1\nc", "d").messages) !=
        request_digest(make_request(Purpose::P1, "ab", "c\nuser\n1\nd").messages));
  CHECK(messages_from_json(messages_to_json(a.messages)) == a.messages);
}

TEST_CASE("transcript store", "[gateway][store]") {
  testing::TempDir dir;
  std::vector<std::string> warnings;
  TranscriptStore store(dir.path(), [&](const std::string& w) { warnings.push_back(w); });
  ChatExchange ex;
  ex.request = make_request(Purpose::P1, "s", "u");
  ex.request_digest = request_digest(ex.request.messages);
  ex.response_text = "answer";

  CHECK_FALSE(store.lookup(ex.request_digest));
  store.record(ex);
  store.record(ex);
  CHECK(warnings.empty());
  CHECK(store.lookup(ex.request_digest) == std::optional<std::string>("answer"));

  // A fresh store over the same directory sees the file.
  TranscriptStore reopened(dir.path());
  CHECK(reopened.lookup(ex.request_digest) == std::optional<std::string>("answer"));
  const auto on_disk = nlohmann::json::parse(read_file(store.path_for(ex.request_digest)));
  CHECK(on_disk["purpose_tag"] == "P1");
  CHECK(on_disk["digest"] == ex.request_digest);

  ex.response_text = "different";
  store.record(ex);
  CHECK(warnings.size() == 1);
  CHECK(store.lookup(ex.request_digest) == std::optional<std::string>("different"));
}

TEST_CASE("concurrent recording", "[gateway][store]") {
  testing::TempDir dir;
  TranscriptStore store(dir.path());
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t)
    threads.emplace_back([&, t] {
      for (int i = 0; i < 25; ++i) {
        ChatExchange ex;
        ex.request = make_request(Purpose::P1, "s", "u" + std::to_string(i));
        ex.request_digest = request_digest(ex.request.messages);
        ex.response_text = "r" + std::to_string(i);
        store.record(ex);
        (void)t;
      }
    });
  for (auto& th : threads) th.join();
  for (int i = 0; i < 25; ++i) {
    const auto d = request_digest(make_request(Purpose::P1, "s", "u" + std::to_string(i)).messages);
    CHECK(TranscriptStore(dir.path()).lookup(d) == std::optional<std::string>("r" + std::to_string(i)));
  }
}

TEST_CASE("replay backend", "[gateway][replay]") {
  testing::TempDir dir;
  TranscriptStore store(dir.path());
  testing::ScriptedBackend live([](const ChatRequest&) { return "recorded"; });
  Gateway recorder(live, &store, nullptr, no_sleep());
  const auto request = make_request(Purpose::DefineWord, "define", "Paris");
  recorder.chat(request);

  ReplayBackend replay(store);
  Gateway gateway(replay, nullptr, nullptr, no_sleep());
  const auto ex = gateway.chat(request);
  CHECK(ex.response_text == "recorded");
  CHECK(ex.backend == BackendKind::Replay);
  CHECK_THROWS_MATCHES(gateway.chat(make_request(Purpose::DefineWord, "define", "Rome")), Error,
                       code_is(Errc::MissingTranscript));
}

TEST_CASE("gateway retries transport failures", "[gateway]") {
  int failures_left = 2;
  testing::ScriptedBackend flaky([&](const ChatRequest&) -> std::string {
    if (failures_left-- > 0) fail(Errc::Transport, "connection reset");
    return "ok";
  });
  std::vector<std::chrono::milliseconds> slept;
  Gateway gateway(flaky, nullptr, nullptr, no_sleep(&slept));
  CHECK(gateway.chat(make_request(Purpose::P1, "s", "u")).response_text == "ok");
  CHECK(gateway.retries() == 2);
  CHECK(slept == std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(1000), std::chrono::milliseconds(2000)});

  SECTION("gives up after three attempts") {
    testing::ScriptedBackend dead([](const ChatRequest&) -> std::string { fail(Errc::Transport, "down"); });
    Gateway g(dead, nullptr, nullptr, no_sleep());
    CHECK_THROWS_MATCHES(g.chat(make_request(Purpose::P1, "s", "u")), Error, code_is(Errc::Transport));
    CHECK(dead.requests().size() == 3);
  }
  SECTION("other errors are not retried") {
    testing::ScriptedBackend broken([](const ChatRequest&) -> std::string { fail(Errc::Format, "bad"); });
    Gateway g(broken, nullptr, nullptr, no_sleep());
    CHECK_THROWS_AS(g.chat(make_request(Purpose::P1, "s", "u")), Error);
    CHECK(broken.requests().size() == 1);
  }
}

TEST_CASE("empty generations are rejected", "[gateway]") {
  testing::ScriptedBackend blank([](const ChatRequest&) { return " \n "; });
  Gateway gateway(blank, nullptr, nullptr, no_sleep());
  CHECK_THROWS_MATCHES(gateway.chat(make_request(Purpose::P2, "s", "u")), Error, code_is(Errc::EmptyResponse));
}

TEST_CASE("session keeps exchanges in order and the log records them", "[gateway]") {
  testing::TempDir dir;
  TranscriptLog log(dir / "t.jsonl");
  testing::ScriptedBackend echo([](const ChatRequest& r) { return "re: " + r.user(); });
  Gateway gateway(echo, nullptr, &log, no_sleep());
  ChatSession session(gateway);
  session.chat(make_request(Purpose::P1, "s", "one"));
  session.chat(make_request(Purpose::P2, "s", "two"));
  REQUIRE(session.exchanges().size() == 2);
  CHECK(session.exchanges()[0].response_text == "re: one");
  CHECK(session.exchanges()[1].request.purpose == Purpose::P2);
  CHECK(gateway.calls() == 2);

  std::ifstream in(dir / "t.jsonl");
  std::string line;
  std::vector<nlohmann::json> lines;
  while (std::getline(in, line)) lines.push_back(nlohmann::json::parse(line));
  REQUIRE(lines.size() == 2);
  CHECK(lines[1]["purpose_tag"] == "P2");
  CHECK(lines[1]["backend"] == "live");
  CHECK(lines[1].contains("latency_ms"));
}

TEST_CASE("chat response bodies", "[gateway][live]") {
  CHECK(parse_chat_response(R"({"message":{"role":"assistant","content":"hi"}})") == "hi");
  CHECK(parse_chat_response(R"({"choices":[{"message":{"content":"yo"}}]})") == "yo");
  CHECK(parse_chat_response(R"({"choices":[{"text":"legacy"}]})") == "legacy");
  CHECK_THROWS_MATCHES(parse_chat_response("not json"), Error, code_is(Errc::Transport));
  CHECK_THROWS_MATCHES(parse_chat_response(R"({"error":"model not found"})"), Error, code_is(Errc::Transport));
}

TEST_CASE("live backend posts the chat body", "[gateway][live]") {
  testing::FakeNetwork network;
  testing::TempDir dir;
  TranscriptStore store(dir.path());
  LiveBackend live(network, testing::FakeNetwork::kChatUrl, "m");
  Gateway gateway(live, &store, nullptr, no_sleep());
  const auto ex = gateway.chat(make_request(Purpose::P1, "unrelated system", "hello"));
  CHECK(ex.response_text == "OK.");
  CHECK(network.chat_calls() == 1);
  CHECK(store.lookup(ex.request_digest) == std::optional<std::string>("OK."));

  const auto body = LiveBackend::request_body("qwen3:8b", make_request(Purpose::P1, "s", "u"));
  CHECK(body["model"] == "qwen3:8b");
  CHECK(body["stream"] == false);
  CHECK(body["messages"][0]["role"] == "system");

  LiveBackend wrong(network, "http://llm.test/missing", "m");
  Gateway g(wrong, nullptr, nullptr, no_sleep());
  CHECK_THROWS_MATCHES(g.chat(make_request(Purpose::P1, "s", "u")), Error, code_is(Errc::Transport));
}
