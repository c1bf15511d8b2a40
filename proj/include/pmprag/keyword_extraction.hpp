#pragma once

// Keyword set K for a sample: token tagging (entities and proper nouns from
// a tagger) or the two-call LLM procedure (identify unknown words, then
// reformat them as CSV).

#include "json.hpp"

#include "pmprag/core.hpp"
#include "pmprag/error.hpp"
#include "pmprag/http.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/templates.hpp"
#include "pmprag/text.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pmprag {

enum class PartOfSpeech { ProperNoun, Other };

enum class EntityType { Person, Location, Organization, Other };

struct TaggedToken {
  std::string surface;
  PartOfSpeech pos = PartOfSpeech::Other;
  std::optional<EntityType> entity;
  text::Span char_span; // byte offsets into the UTF-8 sample text

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

struct KeywordSet {
  std::vector<std::string> keywords;
  ExtractionMethod source = ExtractionMethod::None;
  std::string sample_id;

  friend bool operator==(const KeywordSet&, const KeywordSet&) = default;
};

struct KeywordLimits {
  std::size_t max_tokens = 5;
  std::size_t max_chars = 64;
  std::size_t max_keywords = 8;
};

class TaggerPort {
public:
  virtual ~TaggerPort() = default;
  /// Throws Error(Errc::Tagger) when the tagger is unavailable.
  [[nodiscard]] virtual std::vector<TaggedToken> tag(std::string_view text) const = 0;
};

namespace detail {

inline const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words = {
      // English
      "i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "you", "your", "yours", "he", "him",
      "his", "she", "her", "hers", "it", "its", "they", "them", "their", "theirs", "a", "an", "the",
      "this", "that", "these", "those", "and", "or", "but", "nor", "so", "yet", "if", "then", "than",
      "of", "in", "on", "at", "to", "for", "from", "by", "with", "about", "as", "into", "onto", "over",
      "under", "up", "down", "out", "off", "is", "am", "are", "was", "were", "be", "been", "being",
      "do", "does", "did", "have", "has", "had", "will", "would", "shall", "should", "can", "could",
      "may", "might", "must", "not", "no", "yes", "oh", "ok", "okay", "what", "who", "whom", "whose",
      "which", "when", "where", "why", "how", "all", "any", "some", "each", "every", "just", "very",
      "too", "also", "there", "here", "im", "i'm", "i've", "i'll", "i'd", "don't", "didn't", "it's",
      "that's", "rt",
      // Indonesian
      "aku", "saya", "gue", "gw", "kamu", "lu", "lo", "dia", "kami", "kita", "mereka", "anda", "ini",
      "itu", "yang", "dan", "atau", "tapi", "di", "ke", "dari", "untuk", "dengan", "pada", "dalam",
      "adalah", "ada", "tidak", "nggak", "gak", "bukan", "juga", "sudah", "udah", "belum", "akan",
      "bisa", "mau", "lagi", "aja", "saja", "ya", "iya", "kok", "sih", "deh", "dong", "kan", "pun"};
  return words;
}

// Frequent sentence openers that are capitalized only by position.
inline const std::unordered_set<std::string>& common_openers() {
  static const std::unordered_set<std::string> words = {
      "great", "good", "nice", "love", "thanks", "thank", "well", "so", "yeah", "yep", "wow", "lol",
      "omg", "finally", "really", "never", "always", "today", "tonight", "tomorrow", "yesterday",
      "now", "please", "let", "let's", "just", "maybe", "perhaps", "sure", "hey", "hi", "hello",
      "because", "since", "after", "before", "while", "although", "though", "even", "only", "still",
      "another", "one", "two", "first", "last", "next", "new", "best", "worst", "happy", "glad", "sorry",
      "nothing", "everything", "something", "someone", "everyone", "nobody", "people", "guess", "think",
      "want", "need", "like", "hate", "wait", "look", "see", "got", "get", "going", "gonna", "wanna",
      "ah", "ugh", "hmm", "haha", "awesome", "amazing", "perfect", "fantastic", "brilliant", "cool",
      "fun", "funny", "seriously", "literally", "actually", "apparently", "obviously", "clearly",
      "such", "what's", "there's", "he's", "she's", "we're", "they're", "you're", "can't", "won't",
      "isn't", "doesn't", "love", "lovely", "welcome", "congrats", "congratulations",
      // Indonesian
      "bagus", "mantap", "makasih", "terima", "selamat", "akhirnya", "hari", "besok", "kemarin",
      "sekarang", "tolong", "semoga", "kalau", "kalo", "karena", "jadi", "terus", "emang", "memang",
      "sumpah", "duh", "wah", "asik", "asyik", "enak", "baru", "masih", "cuma", "hanya", "sama",
      "alhamdulillah", "ah", "eh", "kenapa", "gimana", "apa", "siapa", "kapan", "dimana"};
  return words;
}

inline bool is_sentence_initial(std::string_view text, std::size_t start) {
  std::size_t pos = start;
  bool saw_newline = false;
  while (pos > 0) {
    std::size_t prev = pos;
    const char32_t c = text::prev_code_point(text, prev);
    if (c == U'\n') saw_newline = true;
    if (!text::is_space(c)) return c == U'.' || c == U'!' || c == U'?' || saw_newline;
    pos = prev;
  }
  return true;
}

/// Word span with leading/trailing non-term characters removed.
inline std::optional<text::Span> core_span(std::string_view s, text::Span word) {
  std::size_t begin = word.start;
  std::size_t end = word.end;
  while (begin < end) {
    std::size_t pos = begin;
    if (text::is_term_char(text::next_code_point(s, pos))) break;
    begin = pos;
  }
  while (end > begin) {
    std::size_t pos = end;
    if (text::is_term_char(text::prev_code_point(s, pos))) break;
    end = pos;
  }
  if (begin >= end) return std::nullopt;
  return text::Span{begin, end};
}

inline bool only_spaces(std::string_view s) {
  for (std::size_t pos = 0; pos < s.size();)
    if (!text::is_space(text::next_code_point(s, pos))) return false;
  return true;
}

} // namespace detail

/// Built-in rule-based tagger. A word is a proper-noun candidate when it
/// starts with an uppercase letter and is not a stopword. Runs of adjacent
/// candidates (separated only by whitespace) merge into one token. A
/// sentence-initial candidate that is a frequent sentence opener is
/// dropped, since its capital comes from position only. An optional
/// gazetteer attaches entity types to known surfaces.
class HeuristicTagger final : public TaggerPort {
public:
  HeuristicTagger() = default;
  explicit HeuristicTagger(std::map<std::string, EntityType> gazetteer) : gazetteer_(std::move(gazetteer)) {}

  [[nodiscard]] std::vector<TaggedToken> tag(std::string_view s) const override {
    struct Candidate {
      text::Span span;
      bool initial;
      bool opener;
    };
    std::vector<std::vector<Candidate>> runs;
    constexpr auto kNoRun = std::string_view::npos;
    std::size_t prev_end = kNoRun;
    for (const auto& word : text::word_spans(s)) {
      const auto core = detail::core_span(s, word);
      if (!core) {
        prev_end = kNoRun;
        continue;
      }
      const auto surface = s.substr(core->start, core->size());
      std::size_t probe = 0;
      const bool capitalized = text::is_upper(text::next_code_point(surface, probe));
      const auto folded = text::fold_case(surface);
      if (!capitalized || detail::stopwords().contains(folded)) {
        prev_end = kNoRun;
        continue;
      }
      const bool adjacent =
          prev_end != kNoRun && detail::only_spaces(s.substr(prev_end, core->start - prev_end));
      Candidate c{*core, detail::is_sentence_initial(s, core->start),
                  detail::common_openers().contains(folded)};
      if (adjacent)
        runs.back().push_back(c);
      else
        runs.push_back({c});
      // Trailing punctuation ends a run.
      prev_end = core->end == word.end ? core->end : kNoRun;
    }

    std::vector<TaggedToken> out;
    for (auto& run : runs) {
      if (run.front().initial && run.front().opener) run.erase(run.begin());
      if (run.empty()) continue;
      const text::Span span{run.front().span.start, run.back().span.end};
      TaggedToken token{std::string(s.substr(span.start, span.size())), PartOfSpeech::ProperNoun,
                        std::nullopt, span};
      if (auto it = gazetteer_.find(token.surface); it != gazetteer_.end()) token.entity = it->second;
      out.push_back(std::move(token));
    }
    return out;
  }

private:
  std::map<std::string, EntityType> gazetteer_;
};

inline PartOfSpeech parse_pos(std::string_view name) {
  return (name == "PROPN" || name == "ProperNoun" || name == "NNP" || name == "NNPS") ? PartOfSpeech::ProperNoun
                                                                                       : PartOfSpeech::Other;
}

inline std::optional<EntityType> parse_entity(std::string_view name) {
  if (name.empty() || name == "O") return std::nullopt;
  if (name == "PERSON" || name == "Person" || name == "PER") return EntityType::Person;
  if (name == "GPE" || name == "LOC" || name == "Location" || name == "FAC") return EntityType::Location;
  if (name == "ORG" || name == "Organization") return EntityType::Organization;
  return EntityType::Other;
}

/// Out-of-process tagger: POSTs the raw text and expects
/// [{"surface", "pos", "entity", "start", "end"}] with code-point offsets.
class HttpTagger final : public TaggerPort {
public:
  HttpTagger(HttpTransport& transport, std::string url) : transport_(transport), url_(std::move(url)) {}

  [[nodiscard]] std::vector<TaggedToken> tag(std::string_view s) const override {
    HttpResponse res;
    try {
      res = transport_.post(url_, std::string(s), "text/plain; charset=utf-8", {}, std::chrono::seconds(30));
    } catch (const Error& e) {
      fail(Errc::Tagger, e.what());
    }
    if (res.status < 200 || res.status >= 300)
      fail(Errc::Tagger, "tagger returned HTTP " + std::to_string(res.status));
    // code point index -> byte offset
    std::vector<std::size_t> offsets;
    for (std::size_t pos = 0; pos < s.size();) {
      offsets.push_back(pos);
      text::next_code_point(s, pos);
    }
    offsets.push_back(s.size());
    std::vector<TaggedToken> out;
    try {
      for (const auto& item : nlohmann::json::parse(res.body)) {
        const auto start = item.at("start").get<std::size_t>();
        const auto end = item.at("end").get<std::size_t>();
        if (start >= end || end >= offsets.size()) fail(Errc::Tagger, "tagger span out of bounds");
        TaggedToken t;
        t.char_span = {offsets[start], offsets[end]};
        t.surface = item.value("surface", std::string(s.substr(t.char_span.start, t.char_span.size())));
        t.pos = parse_pos(item.value("pos", ""));
        const auto& ent = item.contains("entity") ? item["entity"] : nlohmann::json();
        t.entity = ent.is_string() ? parse_entity(ent.get<std::string>()) : std::nullopt;
        out.push_back(std::move(t));
      }
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::Tagger, std::string("malformed tagger response: ") + e.what());
    }
    return out;
  }

private:
  HttpTransport& transport_;
  std::string url_;
};

/// Entity-typed or proper-noun tokens only, in text order, with
/// overlapping spans resolved in favour of the earlier, longer one.
inline std::vector<TaggedToken> tag_tokens(std::string_view s, const TaggerPort& tagger) {
  if (s.empty()) fail(Errc::InvalidArgument, "cannot tag empty text");
  auto tokens = tagger.tag(s);
  std::erase_if(tokens, [](const TaggedToken& t) { return !t.entity && t.pos != PartOfSpeech::ProperNoun; });
  for (const auto& t : tokens)
    if (t.char_span.end > s.size() || t.char_span.start >= t.char_span.end)
      fail(Errc::Tagger, "token span out of bounds");
  std::stable_sort(tokens.begin(), tokens.end(), [](const TaggedToken& a, const TaggedToken& b) {
    if (a.char_span.start != b.char_span.start) return a.char_span.start < b.char_span.start;
    return a.char_span.size() > b.char_span.size();
  });
  std::vector<TaggedToken> out;
  for (auto& t : tokens) {
    if (!out.empty() && t.char_span.start < out.back().char_span.end) continue;
    out.push_back(std::move(t));
  }
  return out;
}

/// True when `keyword` passes the size caps and contains a letter or digit.
inline bool acceptable_keyword(std::string_view keyword, const KeywordLimits& limits) {
  return !keyword.empty() && text::has_term_char(keyword) && text::word_count(keyword) <= limits.max_tokens &&
         text::code_point_count(keyword) <= limits.max_chars;
}

/// Normalizes, filters and case-insensitively deduplicates candidates,
/// keeping first occurrences up to the per-sample maximum.
inline std::vector<std::string> finalize_keywords(const std::vector<std::string>& candidates,
                                                  const KeywordLimits& limits) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& raw : candidates) {
    auto keyword = text::collapse_whitespace(raw);
    if (!acceptable_keyword(keyword, limits)) continue;
    if (!seen.insert(text::fold_case(keyword)).second) continue;
    out.push_back(std::move(keyword));
    if (out.size() == limits.max_keywords) break;
  }
  return out;
}

inline KeywordSet extract_token_tagging(const Sample& sample, const TaggerPort& tagger,
                                        const KeywordLimits& limits = {}) {
  std::vector<std::string> surfaces;
  for (const auto& t : tag_tokens(sample.text, tagger)) surfaces.push_back(t.surface);
  return {finalize_keywords(surfaces, limits), ExtractionMethod::TokenTagging, sample.id};
}

inline constexpr std::string_view kNoUnknownSentinel = "NO UNKNOWN";

namespace detail {

inline bool is_sentinel(std::string_view s) {
  return text::fold_case(text::collapse_whitespace(s)) == text::fold_case(kNoUnknownSentinel);
}

inline std::string_view strip_decoration(std::string_view s) {
  constexpr std::string_view kEdge = "\"'`*";
  for (;;) {
    const auto before = s.size();
    s = text::trim(s);
    while (!s.empty() && kEdge.find(s.front()) != std::string_view::npos) s.remove_prefix(1);
    while (!s.empty() && kEdge.find(s.back()) != std::string_view::npos) s.remove_suffix(1);
    if (s.size() == before) return s;
  }
}

} // namespace detail

/// Parses the CSV-formatting call's output. Splits on commas, trims,
/// drops empties, punctuation-only items, oversize items and the
/// sentinel, then deduplicates case-insensitively. Comma-free input that
/// is too long to be a single keyword is MalformedCSV.
inline std::vector<std::string> parse_csv_keywords(std::string_view raw, const KeywordLimits& limits = {}) {
  const auto trimmed = text::trim(raw);
  if (detail::is_sentinel(trimmed)) return {};
  if (trimmed.find(',') == std::string_view::npos) {
    const auto single = detail::strip_decoration(trimmed);
    if (text::word_count(single) > limits.max_tokens || text::code_point_count(single) > limits.max_chars)
      fail(Errc::MalformedCsv, "expected comma-separated keywords, got free text");
  }
  std::vector<std::string> items;
  std::size_t pos = 0;
  while (pos <= trimmed.size()) {
    auto comma = trimmed.find(',', pos);
    if (comma == std::string_view::npos) comma = trimmed.size();
    const auto item = detail::strip_decoration(trimmed.substr(pos, comma - pos));
    if (!item.empty() && !detail::is_sentinel(item)) items.emplace_back(item);
    pos = comma + 1;
  }
  KeywordLimits unbounded = limits;
  unbounded.max_keywords = static_cast<std::size_t>(-1);
  return finalize_keywords(items, unbounded);
}

/// Two chat calls: identify unknown words (user = sample text), then
/// reformat that answer as CSV (user = first answer).
inline KeywordSet extract_llm_based(const Sample& sample, ChatSession& session,
                                    const PromptTemplateSet& templates, const KeywordLimits& limits = {}) {
  if (templates.language != sample.language)
    fail(Errc::TemplateLanguageMismatch, "templates do not match sample language");
  const auto& identified =
      session.chat(make_request(Purpose::KeywordIdentify, templates.keyword_identify, sample.text));
  const auto& cleaned =
      session.chat(make_request(Purpose::KeywordClean, templates.keyword_csv, identified.response_text));
  auto keywords = parse_csv_keywords(cleaned.response_text, limits);
  if (keywords.size() > limits.max_keywords) keywords.resize(limits.max_keywords);
  return {std::move(keywords), ExtractionMethod::LLMBased, sample.id};
}

} // namespace pmprag
