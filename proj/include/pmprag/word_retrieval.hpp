#pragma once

// Keyword -> short definition. Web path: search, acquire documents, chunk,
// BM25-rank, refine with the model. Internal path: ask the model directly.
// Both are fronted by a per-keyword cache.

#include "json.hpp"

#include "pmprag/bm25.hpp"
#include "pmprag/core.hpp"
#include "pmprag/digest.hpp"
#include "pmprag/error.hpp"
#include "pmprag/fs_util.hpp"
#include "pmprag/http.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/templates.hpp"
#include "pmprag/text.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

namespace pmprag {

struct SearchResult {
  std::string keyword;
  std::string url;
  std::string snippet;
  int rank = 1;

  friend bool operator==(const SearchResult&, const SearchResult&) = default;
};

class SearchPort {
public:
  virtual ~SearchPort() = default;
  /// Engine-ordered hits. Throws SearchQuota or SearchTransport.
  virtual std::vector<SearchResult> search(const std::string& keyword, int max_results) = 0;
};

class PageFetcher {
public:
  virtual ~PageFetcher() = default;
  /// Raw page body, or nullopt when the page could not be fetched.
  virtual std::optional<std::string> fetch(const std::string& url) = 0;
};

/// Truncates to at most `max_results` and renumbers ranks from 1.
inline std::vector<SearchResult> search_web(const std::string& keyword, SearchPort& client, int max_results) {
  if (text::trim(keyword).empty()) fail(Errc::InvalidArgument, "search keyword is empty");
  if (max_results < 1) fail(Errc::InvalidArgument, "max_results must be at least 1");
  auto results = client.search(keyword, max_results);
  if (results.size() > static_cast<std::size_t>(max_results)) results.resize(static_cast<std::size_t>(max_results));
  for (std::size_t i = 0; i < results.size(); ++i) {
    results[i].rank = static_cast<int>(i) + 1;
    results[i].keyword = keyword;
  }
  return results;
}

/// Custom Search JSON API client: GET ?key=&cx=&q=&num= and read
/// items[].link / items[].snippet.
class GoogleSearchClient final : public SearchPort {
public:
  static constexpr const char* kDefaultEndpoint = "https://www.googleapis.com/customsearch/v1";

  GoogleSearchClient(HttpTransport& transport, std::string api_key, std::string engine_id,
                     std::string endpoint = kDefaultEndpoint)
      : transport_(transport), api_key_(std::move(api_key)), engine_id_(std::move(engine_id)),
        endpoint_(std::move(endpoint)) {
    if (api_key_.empty() || engine_id_.empty())
      fail(Errc::Config, "search client needs SEARCH_API_KEY and SEARCH_ENGINE_ID");
  }

  std::vector<SearchResult> search(const std::string& keyword, int max_results) override {
    const auto url = endpoint_ + "?key=" + url_encode(api_key_) + "&cx=" + url_encode(engine_id_) +
                     "&q=" + url_encode(keyword) + "&num=" + std::to_string(std::clamp(max_results, 1, 10));
    HttpResponse res;
    try {
      res = transport_.get(url, {}, std::chrono::seconds(10));
    } catch (const Error& e) {
      fail(Errc::SearchTransport, e.what());
    }
    if (res.status == 429 || (res.status == 403 && (res.body.find("imitExceeded") != std::string::npos ||
                                                    res.body.find("quota") != std::string::npos)))
      fail(Errc::SearchQuota, "search quota exhausted (HTTP " + std::to_string(res.status) + ")");
    if (res.status < 200 || res.status >= 300)
      fail(Errc::SearchTransport, "search returned HTTP " + std::to_string(res.status));
    std::vector<SearchResult> out;
    try {
      const auto j = nlohmann::json::parse(res.body);
      if (!j.contains("items")) return out;
      for (const auto& item : j.at("items")) {
        SearchResult r;
        r.keyword = keyword;
        r.url = item.value("link", "");
        r.snippet = item.value("snippet", "");
        r.rank = static_cast<int>(out.size()) + 1;
        if (!r.url.empty()) out.push_back(std::move(r));
      }
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::SearchTransport, std::string("malformed search response: ") + e.what());
    }
    return out;
  }

private:
  HttpTransport& transport_;
  std::string api_key_;
  std::string engine_id_;
  std::string endpoint_;
};

inline constexpr const char* kUserAgent = "pmprag-word-retrieval/1.0 (research; sarcasm-detection context lookup)";

class HttpPageFetcher final : public PageFetcher {
public:
  explicit HttpPageFetcher(HttpTransport& transport) : transport_(transport) {}

  std::optional<std::string> fetch(const std::string& url) override {
    try {
      auto res = transport_.get(url, {{"User-Agent", kUserAgent}}, std::chrono::seconds(10));
      if (res.status < 200 || res.status >= 300) return std::nullopt;
      return std::move(res.body);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

private:
  HttpTransport& transport_;
};

namespace detail {

inline std::string utf8_encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp <= 0x10FFFF) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

inline bool iequals_at(std::string_view s, std::size_t pos, std::string_view word) {
  if (pos + word.size() > s.size()) return false;
  for (std::size_t i = 0; i < word.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != word[i]) return false;
  }
  return true;
}

inline std::string decode_entities(std::string_view s) {
  static const std::map<std::string, std::string, std::less<>> named = {
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "},
      {"mdash", "—"}, {"ndash", "–"}, {"hellip", "…"}, {"rsquo", "’"},
      {"lsquo", "‘"}, {"ldquo", "“"}, {"rdquo", "”"}};
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const auto name = s.substr(i + 1, semi - i - 1);
    if (!name.empty() && name[0] == '#') {
      try {
        const bool hex = name.size() > 1 && (name[1] == 'x' || name[1] == 'X');
        const auto cp = std::stoul(std::string(name.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10);
        out += utf8_encode(static_cast<char32_t>(cp));
        i = semi;
        continue;
      } catch (const std::exception&) {
      }
    } else if (auto it = named.find(name); it != named.end()) {
      out += it->second;
      i = semi;
      continue;
    }
    out.push_back('&');
  }
  return out;
}

} // namespace detail

/// Visible text of an HTML page: script/style/comments dropped, tags
/// replaced by spaces, entities decoded, whitespace collapsed, capped at
/// `max_chars` code points.
inline std::string strip_markup(std::string_view html, std::size_t max_chars = 20000) {
  std::string visible;
  visible.reserve(html.size());
  for (std::size_t i = 0; i < html.size();) {
    if (html[i] != '<') {
      visible.push_back(html[i++]);
      continue;
    }
    if (html.substr(i, 4) == "<!--") {
      const auto end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      visible.push_back(' ');
      continue;
    }
    bool skipped_block = false;
    for (std::string_view block : {"script", "style", "noscript", "template"}) {
      if (detail::iequals_at(html, i + 1, block)) {
        const std::string close = "</" + std::string(block);
        std::size_t j = i + 1;
        while (j < html.size() && !detail::iequals_at(html, j, close)) ++j;
        const auto gt = html.find('>', j);
        i = gt == std::string_view::npos ? html.size() : gt + 1;
        skipped_block = true;
        break;
      }
    }
    if (skipped_block) {
      visible.push_back(' ');
      continue;
    }
    const auto gt = html.find('>', i);
    i = gt == std::string_view::npos ? html.size() : gt + 1;
    visible.push_back(' ');
  }
  auto out = text::collapse_whitespace(detail::decode_entities(visible));
  std::size_t pos = 0;
  for (std::size_t n = 0; n < max_chars && pos < out.size(); ++n) text::next_code_point(out, pos);
  out.resize(pos);
  return out;
}

/// Record/replay archive for search results and fetched pages, so runs
/// replayed from transcripts never touch the network.
class WebArchive {
public:
  explicit WebArchive(std::filesystem::path dir) : dir_(std::move(dir)) {}

  [[nodiscard]] std::filesystem::path search_path(const std::string& keyword) const {
    return dir_ / "search" / (sha256_hex(text::fold_case(keyword)) + ".json");
  }
  [[nodiscard]] std::filesystem::path page_path(const std::string& url) const {
    return dir_ / "pages" / (sha256_hex(url) + ".json");
  }

  [[nodiscard]] std::optional<std::vector<SearchResult>> find_search(const std::string& keyword) const {
    std::shared_lock lock(mutex_);
    const auto path = search_path(keyword);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    std::vector<SearchResult> out;
    const auto doc = nlohmann::json::parse(read_file(path));
    for (const auto& r : doc.at("results"))
      out.push_back({keyword, r.at("url").get<std::string>(), r.at("snippet").get<std::string>(),
                     static_cast<int>(out.size()) + 1});
    return out;
  }

  void put_search(const std::string& keyword, const std::vector<SearchResult>& results) {
    auto arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back({{"url", r.url}, {"snippet", r.snippet}});
    std::unique_lock lock(mutex_);
    write_file_atomic(search_path(keyword), nlohmann::json{{"keyword", keyword}, {"results", arr}}.dump(2) + "\n");
  }

  /// Outer nullopt: never recorded. Inner nullopt: recorded as unfetchable.
  [[nodiscard]] std::optional<std::optional<std::string>> find_page(const std::string& url) const {
    std::shared_lock lock(mutex_);
    const auto path = page_path(url);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    const auto j = nlohmann::json::parse(read_file(path));
    if (j.at("body").is_null()) return std::optional<std::string>{};
    return std::optional<std::string>{j.at("body").get<std::string>()};
  }

  void put_page(const std::string& url, const std::optional<std::string>& body) {
    nlohmann::json j{{"url", url}, {"body", body ? nlohmann::json(*body) : nlohmann::json()}};
    std::unique_lock lock(mutex_);
    write_file_atomic(page_path(url), j.dump(2) + "\n");
  }

private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mutex_;
};

class RecordingSearch final : public SearchPort {
public:
  RecordingSearch(SearchPort& inner, WebArchive& archive) : inner_(inner), archive_(archive) {}
  std::vector<SearchResult> search(const std::string& keyword, int max_results) override {
    auto results = inner_.search(keyword, max_results);
    archive_.put_search(keyword, results);
    return results;
  }

private:
  SearchPort& inner_;
  WebArchive& archive_;
};

class ReplaySearch final : public SearchPort {
public:
  explicit ReplaySearch(const WebArchive& archive) : archive_(archive) {}
  std::vector<SearchResult> search(const std::string& keyword, int) override {
    if (auto hit = archive_.find_search(keyword)) return *hit;
    fail(Errc::MissingTranscript, "no recorded search results for '" + keyword + "'");
  }

private:
  const WebArchive& archive_;
};

class RecordingFetcher final : public PageFetcher {
public:
  RecordingFetcher(PageFetcher& inner, WebArchive& archive) : inner_(inner), archive_(archive) {}
  std::optional<std::string> fetch(const std::string& url) override {
    auto body = inner_.fetch(url);
    archive_.put_page(url, body);
    return body;
  }

private:
  PageFetcher& inner_;
  WebArchive& archive_;
};

class ReplayFetcher final : public PageFetcher {
public:
  explicit ReplayFetcher(const WebArchive& archive) : archive_(archive) {}
  std::optional<std::string> fetch(const std::string& url) override {
    if (auto hit = archive_.find_page(url)) return *hit;
    fail(Errc::MissingTranscript, "no recorded page for " + url);
  }

private:
  const WebArchive& archive_;
};

struct Evidence {
  std::string url;
  std::size_t chunk_index = 0;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct WordInfo {
  std::string keyword;
  std::string definition;
  WordInfoSource source = WordInfoSource::LLMOnly;
  std::optional<std::vector<Evidence>> evidence; // present iff source is GoogleSearch

  friend bool operator==(const WordInfo&, const WordInfo&) = default;
};

inline nlohmann::json to_json(const WordInfo& info) {
  nlohmann::json j{{"keyword", info.keyword}, {"definition", info.definition}, {"source", to_string(info.source)}};
  if (info.evidence) {
    auto arr = nlohmann::json::array();
    for (const auto& e : *info.evidence) arr.push_back({{"url", e.url}, {"chunk_index", e.chunk_index}});
    j["evidence"] = arr;
  }
  return j;
}

inline WordInfo word_info_from_json(const nlohmann::json& j) {
  WordInfo info;
  info.keyword = j.at("keyword").get<std::string>();
  info.definition = j.at("definition").get<std::string>();
  info.source = parse_word_info_source(j.at("source").get<std::string>());
  if (j.contains("evidence")) {
    info.evidence.emplace();
    for (const auto& e : j.at("evidence"))
      info.evidence->push_back({e.at("url").get<std::string>(), e.at("chunk_index").get<std::size_t>()});
  }
  return info;
}

/// Keyed by (case-folded keyword, source); last write wins. Backed by
/// "<dir>/<source>/<keyword>.json" when a directory is given, memory only
/// otherwise.
class WordInfoCache {
public:
  WordInfoCache() = default;
  explicit WordInfoCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  [[nodiscard]] std::optional<WordInfo> lookup(const std::string& keyword, WordInfoSource source) const {
    const auto key = std::make_pair(text::fold_case(keyword), source);
    {
      std::shared_lock lock(mutex_);
      if (auto it = memory_.find(key); it != memory_.end()) return it->second;
    }
    if (!dir_) return std::nullopt;
    const auto path = path_for(key.first, source);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    WordInfo info;
    try {
      info = word_info_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const std::exception& e) {
      fail(Errc::Format, "corrupt cache entry " + path.string() + ": " + e.what());
    }
    std::unique_lock lock(mutex_);
    memory_.emplace(key, info);
    return info;
  }

  void store(const WordInfo& info) {
    const auto key = std::make_pair(text::fold_case(info.keyword), info.source);
    std::unique_lock lock(mutex_);
    if (dir_) write_file_atomic(path_for(key.first, info.source), to_json(info).dump(2) + "\n");
    memory_[key] = info;
  }

  /// Entries on disk (or in memory without a directory), optionally
  /// filtered by source, sorted by (source, keyword).
  [[nodiscard]] std::vector<WordInfo> list(std::optional<WordInfoSource> filter = std::nullopt) const {
    std::vector<WordInfo> out;
    if (!dir_) {
      std::shared_lock lock(mutex_);
      for (const auto& [key, info] : memory_)
        if (!filter || key.second == *filter) out.push_back(info);
      return out;
    }
    for (auto source : {WordInfoSource::GoogleSearch, WordInfoSource::LLMOnly}) {
      if (filter && source != *filter) continue;
      const auto sub = *dir_ / std::string(to_string(source));
      std::error_code ec;
      if (!std::filesystem::is_directory(sub, ec)) continue;
      std::vector<std::filesystem::path> files;
      for (const auto& entry : std::filesystem::directory_iterator(sub))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) out.push_back(word_info_from_json(nlohmann::json::parse(read_file(f))));
    }
    return out;
  }

  /// Deletes matching entries; returns how many were removed.
  std::size_t purge(std::optional<WordInfoSource> filter = std::nullopt) {
    std::unique_lock lock(mutex_);
    std::size_t removed = 0;
    for (auto it = memory_.begin(); it != memory_.end();) {
      if (!filter || it->first.second == *filter) {
        it = memory_.erase(it);
        if (!dir_) ++removed;
      } else {
        ++it;
      }
    }
    if (!dir_) return removed;
    for (auto source : {WordInfoSource::GoogleSearch, WordInfoSource::LLMOnly}) {
      if (filter && source != *filter) continue;
      const auto sub = *dir_ / std::string(to_string(source));
      std::error_code ec;
      if (!std::filesystem::is_directory(sub, ec)) continue;
      for (const auto& entry : std::filesystem::directory_iterator(sub)) {
        if (entry.path().extension() != ".json") continue;
        if (!std::filesystem::remove(entry.path(), ec) || ec)
          fail(Errc::StoreWrite, "cannot delete " + entry.path().string());
        ++removed;
      }
    }
    return removed;
  }

  [[nodiscard]] const std::optional<std::filesystem::path>& dir() const noexcept { return dir_; }

private:
  [[nodiscard]] std::filesystem::path path_for(const std::string& folded, WordInfoSource source) const {
    return *dir_ / std::string(to_string(source)) / (file_name_for_key(folded) + ".json");
  }

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<std::string, WordInfoSource>, WordInfo> memory_;
};

inline std::optional<WordInfo> cache_lookup(const WordInfoCache& cache, const std::string& keyword,
                                            WordInfoSource source) {
  return cache.lookup(keyword, source);
}

inline void cache_store(WordInfoCache& cache, const WordInfo& info) { cache.store(info); }

/// Definition from the model's own knowledge: one DefineWord call, trimmed
/// to at most two sentences.
inline WordInfo define_llm_only(const std::string& keyword, ChatSession& session,
                                const PromptTemplateSet& templates) {
  if (text::trim(keyword).empty()) fail(Errc::InvalidArgument, "keyword is empty");
  const auto& ex = session.chat(make_request(Purpose::DefineWord, templates.define_word, keyword));
  auto definition = text::first_sentences(ex.response_text, 2);
  if (definition.empty()) fail(Errc::EmptyResponse, "empty definition for '" + keyword + "'");
  return {keyword, std::move(definition), WordInfoSource::LLMOnly, std::nullopt};
}

inline std::string refine_user_prompt(const std::string& keyword, const std::vector<Chunk>& chunks,
                                      LanguageTag language) {
  const bool en = language == LanguageTag::English;
  std::string out = std::string(en ? "Keyword: " : "Kata kunci: ") + keyword + "\n\n" +
                    (en ? "Passages:" : "Potongan teks:");
  for (std::size_t i = 0; i < chunks.size(); ++i)
    out += "\n[" + std::to_string(i + 1) + "] " + chunks[i].text;
  return out;
}

/// One RefineChunks call over the top-ranked chunks. An answer longer than
/// two sentences is re-asked once, then cut at a sentence boundary.
inline WordInfo refine_definition(const std::string& keyword, const std::vector<Chunk>& top_chunks,
                                  ChatSession& session, const PromptTemplateSet& templates) {
  if (top_chunks.empty()) fail(Errc::InvalidArgument, "no chunks to refine");
  std::vector<Chunk> usable;
  for (const auto& c : top_chunks)
    if (text::has_term_char(c.text)) usable.push_back(c);
  if (usable.empty()) fail(Errc::DefinitionUnavailable, "retrieved chunks for '" + keyword + "' are empty");

  auto request = make_request(Purpose::RefineChunks, templates.refine_chunks,
                              refine_user_prompt(keyword, usable, templates.language));
  std::string answer = session.chat(request).response_text;
  if (text::sentence_count(answer) > 2) {
    request.messages.push_back({Role::Assistant, answer});
    request.messages.push_back({Role::User, templates.refine_reask});
    answer = session.chat(request).response_text;
  }
  auto definition = text::first_sentences(answer, 2);
  if (definition.empty()) fail(Errc::EmptyResponse, "empty refined definition for '" + keyword + "'");
  std::vector<Evidence> evidence;
  for (const auto& c : usable) evidence.push_back({c.source_url, c.index});
  return {keyword, std::move(definition), WordInfoSource::GoogleSearch, std::move(evidence)};
}

struct WebRetrievalOptions {
  int max_results = 5;
  std::size_t chunk_size = 120;
  std::size_t overlap = 20;
  std::size_t top_k = 3;
  std::size_t min_snippet_words = 20;
  std::size_t max_body_chars = 20000;
  Bm25Params bm25;
};

/// Documents for the ranking step: the snippet when it has enough words,
/// otherwise the fetched page's visible text (snippet again if the fetch
/// fails). Pairs are (url, text).
inline std::vector<std::pair<std::string, std::string>> acquire_documents(const std::vector<SearchResult>& results,
                                                                          PageFetcher* fetcher,
                                                                          const WebRetrievalOptions& opts) {
  std::vector<std::pair<std::string, std::string>> docs;
  for (const auto& r : results) {
    std::string body = text::collapse_whitespace(r.snippet);
    if (text::word_count(body) < opts.min_snippet_words && fetcher != nullptr) {
      if (auto page = fetcher->fetch(r.url)) {
        auto visible = strip_markup(*page, opts.max_body_chars);
        if (text::has_term_char(visible)) body = std::move(visible);
      }
    }
    if (text::has_term_char(body)) docs.emplace_back(r.url, std::move(body));
  }
  return docs;
}

/// Full web path for one keyword. Throws DefinitionUnavailable when the
/// search yields no usable text.
inline WordInfo retrieve_web(const std::string& keyword, SearchPort& search, PageFetcher* fetcher,
                             ChatSession& session, const PromptTemplateSet& templates,
                             const WebRetrievalOptions& opts = {}) {
  const auto results = search_web(keyword, search, opts.max_results);
  std::vector<Chunk> chunks;
  for (const auto& [url, body] : acquire_documents(results, fetcher, opts)) {
    auto doc_chunks = chunk_document(body, opts.chunk_size, opts.overlap, url);
    chunks.insert(chunks.end(), doc_chunks.begin(), doc_chunks.end());
  }
  if (chunks.empty()) fail(Errc::DefinitionUnavailable, "no retrievable text for '" + keyword + "'");
  return refine_definition(keyword, rank_chunks(keyword, chunks, opts.bm25, opts.top_k), session, templates);
}

struct RetrievalDeps {
  SearchPort* search = nullptr;
  PageFetcher* fetcher = nullptr;
  WordInfoCache* cache = nullptr;
  WebRetrievalOptions web;
};

/// Definitions for every keyword from one source. Keywords with no
/// retrievable definition are dropped; other failures propagate.
inline std::vector<WordInfo> retrieve_word_infos(const std::vector<std::string>& keywords, WordInfoSource source,
                                                 ChatSession& session, const PromptTemplateSet& templates,
                                                 const RetrievalDeps& deps) {
  std::vector<WordInfo> out;
  if (source == WordInfoSource::None) return out;
  if (source == WordInfoSource::GoogleSearch && deps.search == nullptr)
    fail(Errc::Config, "web retrieval requires a search client");
  for (const auto& keyword : keywords) {
    if (deps.cache != nullptr) {
      if (auto hit = deps.cache->lookup(keyword, source)) {
        out.push_back(std::move(*hit));
        continue;
      }
    }
    std::optional<WordInfo> info;
    try {
      info = source == WordInfoSource::LLMOnly
                 ? define_llm_only(keyword, session, templates)
                 : retrieve_web(keyword, *deps.search, deps.fetcher, session, templates, deps.web);
    } catch (const Error& e) {
      if (e.code() != Errc::DefinitionUnavailable) throw;
    }
    if (!info) continue;
    if (deps.cache != nullptr) deps.cache->store(*info);
    out.push_back(std::move(*info));
  }
  return out;
}

} // namespace pmprag
