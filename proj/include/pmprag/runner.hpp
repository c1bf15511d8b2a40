#pragma once

// Batch execution behind the command-line tool: configuration layering,
// the worker pool, run logs, reports and cache maintenance.

#include "json.hpp"

#include "pmprag/core.hpp"
#include "pmprag/datasets.hpp"
#include "pmprag/digest.hpp"
#include "pmprag/error.hpp"
#include "pmprag/evaluation.hpp"
#include "pmprag/fs_util.hpp"
#include "pmprag/http.hpp"
#include "pmprag/keyword_extraction.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/prompt_pipeline.hpp"
#include "pmprag/templates.hpp"
#include "pmprag/word_retrieval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pmprag {

// ---------------------------------------------------------------------------
// Configuration

/// One configuration source: key -> value, keys spelled like the long flags.
using ConfigLayer = std::map<std::string, std::string>;

inline constexpr std::string_view kConfigKeys[] = {
    "dataset",  "data-path", "variant",   "model",     "backend",     "endpoint",      "concurrency",
    "limit",    "out",       "transcripts", "cache",   "no-cache",    "templates",     "tagger-url",
    "web-archive", "expected-rows", "search-api-key", "search-engine-id"};

inline constexpr std::string_view kSecretKeys[] = {"search-api-key", "search-engine-id"};

inline bool is_config_key(std::string_view key) {
  return std::find(std::begin(kConfigKeys), std::end(kConfigKeys), key) != std::end(kConfigKeys);
}

inline bool is_secret_key(std::string_view key) {
  return std::find(std::begin(kSecretKeys), std::end(kSecretKeys), key) != std::end(kSecretKeys);
}

/// "key = value" lines; '#' starts a comment line; a leading "--" on the
/// key is accepted.
inline ConfigLayer parse_config_text(std::string_view content, const std::string& where = "config") {
  ConfigLayer out;
  std::istringstream in{std::string(content)};
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      fail(Errc::Config, where + ":" + std::to_string(n) + ": expected key = value");
    auto key = std::string(text::trim(t.substr(0, eq)));
    if (key.starts_with("--")) key.erase(0, 2);
    auto value = std::string(text::trim(t.substr(eq + 1)));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    if (!is_config_key(key)) fail(Errc::Config, where + ":" + std::to_string(n) + ": unknown key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline ConfigLayer load_config_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) fail(Errc::Config, "config file not found: " + path.string());
  return parse_config_text(read_file(path), path.string());
}

/// Environment variables that map onto configuration keys.
inline ConfigLayer config_from_env(const std::function<std::optional<std::string>(const char*)>& getenv_fn) {
  ConfigLayer out;
  for (const auto& [var, key] : {std::pair{"SEARCH_API_KEY", "search-api-key"},
                                 std::pair{"SEARCH_ENGINE_ID", "search-engine-id"},
                                 std::pair{"LLM_ENDPOINT", "endpoint"}}) {
    if (auto v = getenv_fn(var); v && !v->empty()) out[key] = *v;
  }
  return out;
}

inline std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name)) return std::string(v);
  return std::nullopt;
}

struct RunConfig {
  DatasetKind dataset = DatasetKind::SemEval2018T3;
  std::filesystem::path data_path;
  PipelineVariant variant = PipelineVariant::PMP;
  std::string model_name;
  BackendKind backend = BackendKind::Live;
  std::optional<std::string> endpoint_url;
  std::size_t concurrency = 4;
  std::optional<std::size_t> limit;
  std::filesystem::path output_dir = "runs";
  std::optional<std::filesystem::path> transcripts_dir;
  std::optional<std::filesystem::path> cache_dir;
  bool use_cache = true;
  std::optional<std::filesystem::path> templates_dir;
  std::optional<std::string> tagger_url;
  std::optional<std::filesystem::path> web_archive_dir;
  std::optional<std::size_t> expected_rows;
  std::optional<std::string> search_api_key;
  std::optional<std::string> search_engine_id;

  [[nodiscard]] std::filesystem::path run_dir() const {
    return output_dir / std::string(to_string(dataset)) / file_name_for_key(model_name) /
           std::string(to_string(variant));
  }
  [[nodiscard]] std::filesystem::path transcript_store_dir() const {
    return transcripts_dir ? *transcripts_dir : output_dir / "transcripts" / file_name_for_key(model_name);
  }
  [[nodiscard]] std::filesystem::path word_cache_dir() const {
    return cache_dir ? *cache_dir : output_dir / "cache";
  }
  [[nodiscard]] std::filesystem::path web_dir() const {
    return web_archive_dir ? *web_archive_dir : transcript_store_dir() / "web";
  }
};

namespace detail {

inline std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || n < 0) fail(Errc::Config, key + " must be a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(n);
}

inline bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value.empty()) return true;
  if (value == "false" || value == "0" || value == "no") return false;
  fail(Errc::Config, key + " must be true or false, got '" + value + "'");
}

template <class F>
auto as_config_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::Config) throw;
    fail(Errc::Config, e.what());
  }
}

} // namespace detail

/// Merges the layers (flags > environment > file) and validates the result.
/// Secrets are refused from the flag layer.
inline RunConfig resolve_run_config(const ConfigLayer& flags, const ConfigLayer& env, const ConfigLayer& file) {
  for (const auto& [key, value] : flags) {
    if (!is_config_key(key)) fail(Errc::Config, "unknown option '" + key + "'");
    if (is_secret_key(key)) fail(Errc::Config, key + " may only be set via the environment or a config file");
  }
  ConfigLayer merged = file;
  for (const auto& [k, v] : env) merged[k] = v;
  for (const auto& [k, v] : flags) merged[k] = v;

  auto get = [&](const char* key) -> std::optional<std::string> {
    auto it = merged.find(key);
    if (it == merged.end()) return std::nullopt;
    return it->second;
  };
  auto require = [&](const char* key) {
    auto v = get(key);
    if (!v || v->empty()) fail(Errc::Config, std::string("missing required setting '") + key + "'");
    return *v;
  };

  RunConfig c;
  c.dataset = detail::as_config_error([&] { return parse_dataset(require("dataset")); });
  c.data_path = require("data-path");
  c.variant = detail::as_config_error([&] { return parse_variant(require("variant")); });
  c.model_name = require("model");
  if (auto v = get("backend")) c.backend = detail::as_config_error([&] { return parse_backend(*v); });
  if (auto v = get("endpoint"); v && !v->empty()) c.endpoint_url = *v;
  if (auto v = get("concurrency")) c.concurrency = detail::parse_count("concurrency", *v);
  if (auto v = get("limit")) c.limit = detail::parse_count("limit", *v);
  if (auto v = get("out")) c.output_dir = *v;
  if (auto v = get("transcripts")) c.transcripts_dir = *v;
  if (auto v = get("cache")) c.cache_dir = *v;
  if (auto v = get("no-cache")) c.use_cache = !detail::parse_flag("no-cache", *v);
  if (auto v = get("templates")) c.templates_dir = *v;
  if (auto v = get("tagger-url"); v && !v->empty()) c.tagger_url = *v;
  if (auto v = get("web-archive")) c.web_archive_dir = *v;
  if (auto v = get("expected-rows")) c.expected_rows = detail::parse_count("expected-rows", *v);
  if (auto v = get("search-api-key"); v && !v->empty()) c.search_api_key = *v;
  if (auto v = get("search-engine-id"); v && !v->empty()) c.search_engine_id = *v;
  return c;
}

/// Checks that need nothing but the configuration and the file system.
inline void validate_run_config(const RunConfig& c) {
  if (c.limit && *c.limit == 0) fail(Errc::Config, "limit must be at least 1");
  if (c.concurrency < 1) fail(Errc::Config, "concurrency must be at least 1");
  if (c.model_name.empty()) fail(Errc::Config, "model name is empty");
  const auto plan = variant_plan(c.variant);
  if (c.backend == BackendKind::Replay) {
    std::error_code ec;
    if (!std::filesystem::is_directory(c.transcript_store_dir(), ec))
      fail(Errc::Config, "replay needs an existing transcript store at " + c.transcript_store_dir().string());
  } else {
    if (!c.endpoint_url) fail(Errc::Config, "live backend needs an endpoint (LLM_ENDPOINT or --endpoint)");
    if (plan.retrieval == WordInfoSource::GoogleSearch && (!c.search_api_key || !c.search_engine_id))
      fail(Errc::Config, "variant " + std::string(to_string(c.variant)) +
                             " needs SEARCH_API_KEY and SEARCH_ENGINE_ID in live mode");
  }
}

// ---------------------------------------------------------------------------
// Record/replay for an out-of-process tagger

/// POST responses archived by digest of (url, body). In replay mode the
/// inner transport is never consulted.
class ArchivedTransport final : public HttpTransport {
public:
  ArchivedTransport(std::filesystem::path dir, HttpTransport* inner) : dir_(std::move(dir)), inner_(inner) {}

  HttpResponse get(const std::string& url, const HttpHeaders& headers, std::chrono::seconds timeout) override {
    return exchange("GET", url, "", [&] { return inner_->get(url, headers, timeout); });
  }

  HttpResponse post(const std::string& url, const std::string& body, const std::string& content_type,
                    const HttpHeaders& headers, std::chrono::seconds timeout) override {
    return exchange("POST", url, body, [&] { return inner_->post(url, body, content_type, headers, timeout); });
  }

private:
  template <class F>
  HttpResponse exchange(const std::string& method, const std::string& url, const std::string& body, F&& call) {
    const auto path = dir_ / (sha256_hex(method + "\n" + url + "\n" + body) + ".json");
    std::error_code ec;
    if (inner_ == nullptr) {
      if (!std::filesystem::exists(path, ec)) fail(Errc::MissingTranscript, "no recorded response for " + url);
      const auto j = nlohmann::json::parse(read_file(path));
      return {j.at("status").get<int>(), j.at("body").get<std::string>()};
    }
    auto res = call();
    std::lock_guard lock(mutex_);
    write_file_atomic(path, nlohmann::json{{"method", method}, {"url", url}, {"status", res.status}, {"body", res.body}}
                                    .dump(2) +
                                "\n");
    return res;
  }

  std::filesystem::path dir_;
  HttpTransport* inner_;
  std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Run log

struct SampleOutcome {
  nlohmann::ordered_json record;
  std::vector<ChatExchange> exchanges;
};

namespace detail {

inline nlohmann::json digest_of(const std::vector<ChatExchange>& exchanges, Purpose purpose) {
  for (const auto& ex : exchanges)
    if (ex.request.purpose == purpose) return ex.request_digest;
  return nullptr;
}

inline nlohmann::json keywords_json(const std::optional<KeywordSet>& keywords) {
  if (!keywords) return nullptr;
  return keywords->keywords;
}

} // namespace detail

/// One JSON line per attempted sample. Only "wall_time_ms" depends on
/// timing.
inline nlohmann::ordered_json run_log_record(const Sample& sample, const RunConfig& config,
                                             const std::optional<PipelineTrace>& trace,
                                             const SampleSkipped* skipped, std::chrono::nanoseconds wall_time) {
  nlohmann::ordered_json r;
  r["sample_id"] = sample.id;
  r["dataset"] = to_string(sample.dataset);
  r["model"] = config.model_name;
  r["variant"] = to_string(config.variant);
  r["gold"] = to_string(sample.gold);
  const auto& exchanges = trace ? trace->exchanges : skipped->exchanges();
  if (trace) {
    r["verdict"] = to_string(trace->verdict);
    r["skipped"] = nullptr;
    r["keywords"] = detail::keywords_json(trace->keywords);
    auto sources = nlohmann::ordered_json::array();
    for (const auto& w : trace->word_infos) sources.push_back({{"keyword", w.keyword}, {"source", to_string(w.source)}});
    r["word_info_sources"] = sources;
  } else {
    r["verdict"] = nullptr;
    r["skipped"] = {{"cause", errc_name(skipped->cause())}, {"reason", skipped->what()}};
    r["keywords"] = detail::keywords_json(skipped->keywords());
    r["word_info_sources"] = nlohmann::ordered_json::array();
  }
  r["p1_digest"] = detail::digest_of(exchanges, Purpose::P1);
  r["p2_digest"] = detail::digest_of(exchanges, Purpose::P2);
  r["calls"] = exchanges.size();
  r["wall_time_ms"] = std::chrono::duration<double, std::milli>(wall_time).count();
  return r;
}

/// Writes outcomes in dataset order as they complete: index i is written
/// once 0..i-1 have been.
class OrderedAppender {
public:
  using Sink = std::function<void(const SampleOutcome&)>;

  explicit OrderedAppender(Sink sink) : sink_(std::move(sink)) {}

  void submit(std::size_t index, SampleOutcome outcome) {
    std::lock_guard lock(mutex_);
    pending_.emplace(index, std::move(outcome));
    for (auto it = pending_.find(next_); it != pending_.end(); it = pending_.find(next_)) {
      sink_(it->second);
      pending_.erase(it);
      ++next_;
    }
  }

  [[nodiscard]] std::size_t written() const {
    std::lock_guard lock(mutex_);
    return next_;
  }

private:
  Sink sink_;
  mutable std::mutex mutex_;
  std::map<std::size_t, SampleOutcome> pending_;
  std::size_t next_ = 0;
};

/// Metrics from a run log alone.
inline MetricsReport report_from_log(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) fail(Errc::LogParse, "run log not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  std::vector<Prediction> preds;
  std::map<std::string, Label> golds;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (text::trim(line).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(n);
    try {
      const auto j = nlohmann::json::parse(line);
      const auto id = j.at("sample_id").get<std::string>();
      const auto gold = parse_label(j.at("gold").get<std::string>());
      if (golds.contains(id)) fail(Errc::DuplicatePrediction, where + ": duplicate record for " + id);
      golds.emplace(id, gold);
      const auto& verdict = j.at("verdict");
      preds.push_back({id, verdict.is_null() ? std::nullopt : std::optional(parse_label(verdict.get<std::string>()))});
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::LogParse, where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == Errc::DuplicatePrediction) throw;
      fail(Errc::LogParse, where + ": " + e.what());
    }
  }
  return macro_metrics(confusion(preds, golds));
}

// ---------------------------------------------------------------------------
// Execution

struct RunEnvironment {
  /// Network access for live runs. Replay runs never use it.
  HttpTransport* transport = nullptr;
  GatewayOptions gateway;
  std::ostream* progress = nullptr;
};

struct RunResult {
  std::filesystem::path run_dir;
  std::size_t records = 0;
  std::size_t skipped = 0;
  long llm_calls = 0;
  std::optional<MetricsReport> report; // nullopt when every sample was skipped
};

inline std::filesystem::path run_log_path(const RunConfig& c) { return c.run_dir() / "run.jsonl"; }

inline RunResult cmd_run(const RunConfig& config, const RunEnvironment& env = {}) {
  validate_run_config(config);
  const bool live = config.backend == BackendKind::Live;
  if (live && env.transport == nullptr) fail(Errc::Config, "live backend needs a network transport");

  auto samples = load_dataset(config.dataset, config.data_path, config.expected_rows);
  if (config.limit && samples.size() > *config.limit) samples.resize(*config.limit);
  if (samples.empty()) fail(Errc::Config, "dataset " + config.data_path.string() + " has no samples");

  const auto catalog = config.templates_dir ? TemplateCatalog::load(*config.templates_dir) : TemplateCatalog{};

  // LLM backend
  TranscriptStore store(config.transcript_store_dir());
  std::unique_ptr<ChatBackend> backend;
  if (live) backend = std::make_unique<LiveBackend>(*env.transport, *config.endpoint_url, config.model_name);
  else backend = std::make_unique<ReplayBackend>(store);
  Gateway gateway(*backend, live ? &store : nullptr, nullptr, env.gateway);

  // Keyword tagger
  const auto plan = variant_plan(config.variant);
  std::unique_ptr<ArchivedTransport> tagger_transport;
  std::unique_ptr<TaggerPort> tagger;
  if (plan.extraction == ExtractionMethod::TokenTagging) {
    if (config.tagger_url) {
      tagger_transport = std::make_unique<ArchivedTransport>(config.web_dir() / "tagger", live ? env.transport : nullptr);
      tagger = std::make_unique<HttpTagger>(*tagger_transport, *config.tagger_url);
    } else {
      tagger = std::make_unique<HeuristicTagger>();
    }
  }

  // Web retrieval
  WebArchive archive(config.web_dir());
  std::unique_ptr<SearchPort> google;
  std::unique_ptr<PageFetcher> http_fetcher;
  std::unique_ptr<SearchPort> search;
  std::unique_ptr<PageFetcher> fetcher;
  if (plan.retrieval == WordInfoSource::GoogleSearch) {
    if (live) {
      google = std::make_unique<GoogleSearchClient>(*env.transport, *config.search_api_key, *config.search_engine_id);
      http_fetcher = std::make_unique<HttpPageFetcher>(*env.transport);
      search = std::make_unique<RecordingSearch>(*google, archive);
      fetcher = std::make_unique<RecordingFetcher>(*http_fetcher, archive);
    } else {
      search = std::make_unique<ReplaySearch>(archive);
      fetcher = std::make_unique<ReplayFetcher>(archive);
    }
  }
  std::optional<WordInfoCache> cache;
  if (config.use_cache) cache.emplace(config.word_cache_dir());

  PipelineDeps deps{gateway, catalog, tagger.get(), {search.get(), fetcher.get(), cache ? &*cache : nullptr, {}}, 2, {}};

  // Outputs
  const auto dir = config.run_dir();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::StoreWrite, "cannot create " + dir.string() + ": " + ec.message());
  std::ofstream run_log(dir / "run.jsonl", std::ios::binary | std::ios::trunc);
  std::ofstream transcript_log(dir / "transcript.jsonl", std::ios::binary | std::ios::trunc);
  if (!run_log || !transcript_log) fail(Errc::StoreWrite, "cannot open run logs in " + dir.string());

  std::vector<Prediction> preds;
  std::map<std::string, Label> golds;
  std::size_t skipped = 0;
  OrderedAppender appender([&](const SampleOutcome& o) {
    run_log << o.record.dump() << '\n';
    for (const auto& ex : o.exchanges) {
      auto rec = exchange_record(ex);
      rec["sample_id"] = o.record["sample_id"];
      rec["backend"] = to_string(ex.backend);
      rec["latency_ms"] = std::chrono::duration<double, std::milli>(ex.latency).count();
      transcript_log << rec.dump() << '\n';
    }
    run_log.flush();
    transcript_log.flush();
    if (!run_log || !transcript_log) fail(Errc::StoreWrite, "run log write failed in " + dir.string());
    const auto& verdict = o.record["verdict"];
    if (verdict.is_null()) ++skipped;
    preds.push_back({o.record["sample_id"].get<std::string>(),
                     verdict.is_null() ? std::nullopt : std::optional(parse_label(verdict.get<std::string>()))});
    if (env.progress != nullptr)
      *env.progress << "[" << preds.size() << "/" << golds.size() << "] " << o.record["sample_id"].get<std::string>()
                    << " " << (verdict.is_null() ? "skipped" : verdict.get<std::string>()) << '\n';
  });
  for (const auto& s : samples) golds.emplace(s.id, s.gold);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr fatal;
  std::mutex fatal_mutex;
  auto worker = [&] {
    while (!stop) {
      const auto i = next++;
      if (i >= samples.size()) return;
      const auto& sample = samples[i];
      const auto started = std::chrono::steady_clock::now();
      try {
        SampleOutcome outcome;
        try {
          auto trace = run_pipeline(sample, config.variant, deps);
          outcome.record = run_log_record(sample, config, trace, nullptr, trace.wall_time);
          outcome.exchanges = std::move(trace.exchanges);
        } catch (const SampleSkipped& skip) {
          outcome.record =
              run_log_record(sample, config, std::nullopt, &skip, std::chrono::steady_clock::now() - started);
          outcome.exchanges = skip.exchanges();
        }
        appender.submit(i, std::move(outcome));
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        stop = true;
      }
    }
  };
  const auto n_workers = std::min(config.concurrency, samples.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  RunResult result;
  result.run_dir = dir;
  result.records = appender.written();
  result.skipped = skipped;
  result.llm_calls = gateway.calls();
  const auto cm = confusion(preds, golds);
  const auto title = std::string(to_string(config.dataset)) + " / " + config.model_name + " / " +
                     std::string(to_string(config.variant));
  if (cm.scored() > 0) {
    result.report = macro_metrics(cm);
    write_file_atomic(dir / "report.json", to_json(*result.report).dump(2) + "\n");
    write_file_atomic(dir / "report.txt", render_table(*result.report, title));
  } else {
    nlohmann::ordered_json j{{"n_scored", 0}, {"n_skipped", cm.skipped}, {"error", errc_name(Errc::EmptyEvaluation)}};
    write_file_atomic(dir / "report.json", j.dump(2) + "\n");
    write_file_atomic(dir / "report.txt", title + "\nno scored samples (" + std::to_string(cm.skipped) + " skipped)\n");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Cache maintenance

namespace detail {

inline std::string first_line(std::string_view s) {
  const auto nl = s.find('\n');
  return std::string(text::trim(nl == std::string_view::npos ? s : s.substr(0, nl)));
}

} // namespace detail

inline void require_cache_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) fail(Errc::StoreWrite, "cache directory not found: " + dir.string());
}

/// Aligned (keyword, source, definition) table with a header row.
inline std::string render_cache_table(const std::vector<WordInfo>& entries) {
  std::size_t kw_width = std::string_view("keyword").size();
  std::size_t src_width = std::string_view("source").size();
  for (const auto& e : entries) {
    kw_width = std::max(kw_width, text::code_point_count(e.keyword));
    src_width = std::max(src_width, to_string(e.source).size());
  }
  auto pad = [](std::string s, std::size_t width) {
    const auto n = text::code_point_count(s);
    if (n < width) s.append(width - n, ' ');
    return s;
  };
  std::string out = pad("keyword", kw_width) + "  " + pad("source", src_width) + "  definition\n";
  for (const auto& e : entries)
    out += pad(e.keyword, kw_width) + "  " + pad(std::string(to_string(e.source)), src_width) + "  " +
           detail::first_line(e.definition) + "\n";
  return out;
}

inline std::vector<WordInfo> cmd_cache_list(const std::filesystem::path& dir,
                                            std::optional<WordInfoSource> filter = std::nullopt) {
  require_cache_dir(dir);
  return WordInfoCache(dir).list(filter);
}

inline std::size_t cmd_cache_purge(const std::filesystem::path& dir,
                                   std::optional<WordInfoSource> filter = std::nullopt) {
  require_cache_dir(dir);
  WordInfoCache cache(dir);
  return cache.purge(filter);
}

} // namespace pmprag
