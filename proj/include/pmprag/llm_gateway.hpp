#pragma once

// Chat-completion access with two interchangeable backends (live HTTP and
// content-addressed replay) and transcript capture for every call.

#include "json.hpp"

#include "pmprag/digest.hpp"
#include "pmprag/error.hpp"
#include "pmprag/fs_util.hpp"
#include "pmprag/http.hpp"
#include "pmprag/text.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace pmprag {

enum class Role { System, User, Assistant };

enum class Purpose { P1, P2, KeywordIdentify, KeywordClean, DefineWord, RefineChunks };

enum class BackendKind { Live, Replay };

inline constexpr std::string_view to_string(Role role) noexcept {
  switch (role) {
  case Role::System: return "system";
  case Role::User: return "user";
  case Role::Assistant: return "assistant";
  }
  return "";
}

inline constexpr std::string_view to_string(Purpose purpose) noexcept {
  switch (purpose) {
  case Purpose::P1: return "P1";
  case Purpose::P2: return "P2";
  case Purpose::KeywordIdentify: return "KeywordIdentify";
  case Purpose::KeywordClean: return "KeywordClean";
  case Purpose::DefineWord: return "DefineWord";
  case Purpose::RefineChunks: return "RefineChunks";
  }
  return "";
}

inline constexpr std::string_view to_string(BackendKind kind) noexcept {
  return kind == BackendKind::Live ? "live" : "replay";
}

inline Role parse_role(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  fail(Errc::InvalidArgument, "unknown role '" + std::string(name) + "'");
}

inline Purpose parse_purpose(std::string_view name) {
  for (auto p : {Purpose::P1, Purpose::P2, Purpose::KeywordIdentify, Purpose::KeywordClean,
                 Purpose::DefineWord, Purpose::RefineChunks})
    if (to_string(p) == name) return p;
  fail(Errc::InvalidArgument, "unknown purpose '" + std::string(name) + "'");
}

inline BackendKind parse_backend(std::string_view name) {
  if (name == "live") return BackendKind::Live;
  if (name == "replay") return BackendKind::Replay;
  fail(Errc::InvalidArgument, "unknown backend '" + std::string(name) + "'");
}

struct ChatMessage {
  Role role = Role::User;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

/// A chat call. Carries no decoding parameters: the model runs with its
/// server-side defaults.
struct ChatRequest {
  std::vector<ChatMessage> messages;
  Purpose purpose = Purpose::P1;

  friend bool operator==(const ChatRequest&, const ChatRequest&) = default;

  [[nodiscard]] const std::string& system() const { return messages.front().content; }

  /// Content of the first user message.
  [[nodiscard]] const std::string& user() const {
    for (const auto& m : messages)
      if (m.role == Role::User) return m.content;
    fail(Errc::InvalidArgument, "request has no user message");
  }

  void validate() const {
    if (messages.empty() || messages.front().role != Role::System)
      fail(Errc::InvalidArgument, "first message must be the system prompt");
    int systems = 0;
    int users = 0;
    for (const auto& m : messages) {
      if (m.role == Role::System) ++systems;
      if (m.role == Role::User) ++users;
      if (m.role != Role::Assistant && m.content.empty())
        fail(Errc::InvalidArgument, std::string(to_string(m.role)) + " message is empty");
    }
    if (systems != 1) fail(Errc::InvalidArgument, "exactly one system message is required");
    if (users < 1) fail(Errc::InvalidArgument, "at least one user message is required");
  }
};

inline ChatRequest make_request(Purpose purpose, std::string system, std::string user) {
  return ChatRequest{{{Role::System, std::move(system)}, {Role::User, std::move(user)}}, purpose};
}

/// SHA-256 over "role\n<byte length>\ncontent\n" per message, in order.
inline std::string request_digest(const std::vector<ChatMessage>& messages) {
  std::string canonical;
  for (const auto& m : messages) {
    canonical.append(to_string(m.role));
    canonical.push_back('\n');
    canonical.append(std::to_string(m.content.size()));
    canonical.push_back('\n');
    canonical.append(m.content);
    canonical.push_back('\n');
  }
  return sha256_hex(canonical);
}

struct ChatExchange {
  ChatRequest request;
  std::string response_text;
  BackendKind backend = BackendKind::Replay;
  std::chrono::nanoseconds latency{0};
  std::string request_digest;
};

inline nlohmann::json messages_to_json(const std::vector<ChatMessage>& messages) {
  auto arr = nlohmann::json::array();
  for (const auto& m : messages) arr.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  return arr;
}

inline std::vector<ChatMessage> messages_from_json(const nlohmann::json& arr) {
  std::vector<ChatMessage> out;
  for (const auto& m : arr)
    out.push_back({parse_role(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
  return out;
}

/// Record persisted per digest in the content-addressed store.
inline nlohmann::json exchange_record(const ChatExchange& ex) {
  return {{"digest", ex.request_digest},
          {"purpose_tag", to_string(ex.request.purpose)},
          {"messages", messages_to_json(ex.request.messages)},
          {"response_text", ex.response_text}};
}

using Warn = std::function<void(const std::string&)>;

inline Warn stderr_warn() {
  return [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
}

/// Directory of "<digest>.json" files. Reads are concurrent; writes are
/// serialized. An in-memory index avoids re-reading files already seen.
class TranscriptStore {
public:
  explicit TranscriptStore(std::filesystem::path dir, Warn warn = stderr_warn())
      : dir_(std::move(dir)), warn_(std::move(warn)) {}

  [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

  [[nodiscard]] std::filesystem::path path_for(const std::string& digest) const {
    return dir_ / (digest + ".json");
  }

  [[nodiscard]] std::optional<std::string> lookup(const std::string& digest) const {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(digest); it != index_.end()) return it->second;
    }
    const auto path = path_for(digest);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    std::string response;
    try {
      response = nlohmann::json::parse(read_file(path)).at("response_text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::Format, "corrupt transcript " + path.string() + ": " + e.what());
    }
    std::unique_lock lock(mutex_);
    index_.emplace(digest, response);
    return response;
  }

  /// Idempotent for identical text; different text for a known digest
  /// overwrites and warns.
  void record(const ChatExchange& ex) {
    std::unique_lock lock(mutex_);
    std::optional<std::string> previous;
    if (auto it = index_.find(ex.request_digest); it != index_.end()) {
      previous = it->second;
    } else {
      const auto path = path_for(ex.request_digest);
      std::error_code ec;
      if (std::filesystem::exists(path, ec)) {
        try {
          previous = nlohmann::json::parse(read_file(path)).at("response_text").get<std::string>();
        } catch (const std::exception&) {
        }
      }
    }
    if (previous && *previous == ex.response_text) {
      index_[ex.request_digest] = ex.response_text;
      return;
    }
    if (previous) warn_("overwriting transcript " + ex.request_digest + " with a different response");
    write_file_atomic(path_for(ex.request_digest), exchange_record(ex).dump(2) + "\n");
    index_[ex.request_digest] = ex.response_text;
  }

private:
  std::filesystem::path dir_;
  Warn warn_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::string, std::string> index_;
};

/// Append-only JSONL log of every exchange made during one run.
class TranscriptLog {
public:
  explicit TranscriptLog(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    out_.open(path, std::ios::binary | std::ios::app);
    if (!out_) fail(Errc::StoreWrite, "cannot open transcript log " + path.string());
  }

  void append(const ChatExchange& ex) {
    auto rec = exchange_record(ex);
    rec["backend"] = to_string(ex.backend);
    rec["latency_ms"] = std::chrono::duration<double, std::milli>(ex.latency).count();
    std::lock_guard lock(mutex_);
    out_ << rec.dump() << '\n';
    out_.flush();
    if (!out_) fail(Errc::StoreWrite, "transcript log write failed");
  }

private:
  std::mutex mutex_;
  std::ofstream out_;
};

class ChatBackend {
public:
  virtual ~ChatBackend() = default;
  [[nodiscard]] virtual BackendKind kind() const noexcept = 0;
  /// Returns generated text. Throws Errc::Transport on retryable failures.
  virtual std::string complete(const ChatRequest& request, const std::string& digest) = 0;
};

class ReplayBackend final : public ChatBackend {
public:
  explicit ReplayBackend(const TranscriptStore& store) : store_(store) {}

  [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::Replay; }

  std::string complete(const ChatRequest& request, const std::string& digest) override {
    if (auto hit = store_.lookup(digest)) return *hit;
    fail(Errc::MissingTranscript,
         "no recorded response for " + std::string(to_string(request.purpose)) + " request " + digest);
  }

private:
  const TranscriptStore& store_;
};

/// Extracts generated text from either an Ollama-style
/// {"message":{"content":...}} or an OpenAI-style {"choices":[...]} body.
inline std::string parse_chat_response(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Transport, std::string("chat endpoint returned invalid JSON: ") + e.what());
  }
  if (j.contains("message") && j["message"].is_object() && j["message"].contains("content"))
    return j["message"]["content"].get<std::string>();
  if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
    const auto& choice = j["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string())
      return choice["message"]["content"].get<std::string>();
    if (choice.contains("text")) return choice["text"].get<std::string>();
  }
  if (j.contains("error")) fail(Errc::Transport, "chat endpoint error: " + j["error"].dump());
  fail(Errc::Transport, "chat endpoint response has no message content");
}

/// POSTs {"model", "messages", "stream": false} to a chat endpoint.
class LiveBackend final : public ChatBackend {
public:
  LiveBackend(HttpTransport& transport, std::string endpoint_url, std::string model,
              std::chrono::seconds timeout = std::chrono::seconds(600))
      : transport_(transport), endpoint_(std::move(endpoint_url)), model_(std::move(model)),
        timeout_(timeout) {}

  [[nodiscard]] BackendKind kind() const noexcept override { return BackendKind::Live; }

  [[nodiscard]] static nlohmann::json request_body(const std::string& model, const ChatRequest& request) {
    return {{"model", model}, {"messages", messages_to_json(request.messages)}, {"stream", false}};
  }

  std::string complete(const ChatRequest& request, const std::string&) override {
    const auto res = transport_.post(endpoint_, request_body(model_, request).dump(), "application/json", {},
                                     timeout_);
    if (res.status < 200 || res.status >= 300)
      fail(Errc::Transport, "chat endpoint returned HTTP " + std::to_string(res.status));
    return parse_chat_response(res.body);
  }

private:
  HttpTransport& transport_;
  std::string endpoint_;
  std::string model_;
  std::chrono::seconds timeout_;
};

struct GatewayOptions {
  int max_attempts = 3;
  std::chrono::milliseconds backoff_base{1000};
  std::function<void(std::chrono::milliseconds)> sleep = [](std::chrono::milliseconds d) {
    std::this_thread::sleep_for(d);
  };
};

/// Front door for every chat call: validates, digests, retries transport
/// failures with exponential backoff, rejects empty generations and
/// records the exchange.
class Gateway {
public:
  Gateway(ChatBackend& backend, TranscriptStore* record_to = nullptr, TranscriptLog* log = nullptr,
          GatewayOptions options = {})
      : backend_(backend), store_(record_to), log_(log), options_(std::move(options)) {}

  ChatExchange chat(const ChatRequest& request) {
    request.validate();
    ChatExchange ex;
    ex.request = request;
    ex.backend = backend_.kind();
    ex.request_digest = request_digest(request.messages);
    const auto started = std::chrono::steady_clock::now();
    for (int attempt = 1;; ++attempt) {
      try {
        ex.response_text = backend_.complete(request, ex.request_digest);
        break;
      } catch (const Error& e) {
        if (e.code() != Errc::Transport || attempt >= options_.max_attempts) throw;
        ++retries_;
        options_.sleep(options_.backoff_base * (1 << (attempt - 1)));
      }
    }
    ex.latency = std::chrono::steady_clock::now() - started;
    ++calls_;
    if (text::trim(ex.response_text).empty())
      fail(Errc::EmptyResponse, std::string(to_string(request.purpose)) + " call returned no text");
    if (store_ != nullptr && ex.backend == BackendKind::Live) store_->record(ex);
    if (log_ != nullptr) log_->append(ex);
    return ex;
  }

  [[nodiscard]] long calls() const noexcept { return calls_.load(); }
  [[nodiscard]] long retries() const noexcept { return retries_.load(); }
  [[nodiscard]] BackendKind backend_kind() const noexcept { return backend_.kind(); }

private:
  ChatBackend& backend_;
  TranscriptStore* store_;
  TranscriptLog* log_;
  GatewayOptions options_;
  std::atomic<long> calls_{0};
  std::atomic<long> retries_{0};
};

/// Per-sample view of a shared gateway that keeps the exchanges it made,
/// in call order.
class ChatSession {
public:
  explicit ChatSession(Gateway& gateway) : gateway_(gateway) {}

  const ChatExchange& chat(const ChatRequest& request) {
    exchanges_.push_back(gateway_.chat(request));
    return exchanges_.back();
  }

  [[nodiscard]] const std::vector<ChatExchange>& exchanges() const noexcept { return exchanges_; }
  [[nodiscard]] BackendKind backend_kind() const noexcept { return gateway_.backend_kind(); }

private:
  Gateway& gateway_;
  std::vector<ChatExchange> exchanges_;
};

/// Persists one exchange in the content-addressed store.
inline void record_transcript(const ChatExchange& exchange, TranscriptStore& store) { store.record(exchange); }

} // namespace pmprag
