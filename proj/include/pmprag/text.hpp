#pragma once

// Unicode-aware text helpers shared by the tagger, the BM25 tokenizer,
// the dataset normalizer and the definition trimmer.

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "pmprag/error.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pmprag::text {

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Decodes the code point at `pos` and advances `pos`. Malformed bytes
/// decode as U+FFFD and consume one byte.
inline char32_t next_code_point(std::string_view s, std::size_t& pos) noexcept {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c = 0;
  U8_NEXT(bytes, i, static_cast<int32_t>(s.size()), c);
  pos = static_cast<std::size_t>(i);
  return c < 0 ? char32_t{0xFFFD} : static_cast<char32_t>(c);
}

/// Decodes the code point ending right before `pos` and moves `pos` back.
inline char32_t prev_code_point(std::string_view s, std::size_t& pos) noexcept {
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  int32_t i = static_cast<int32_t>(pos);
  UChar32 c = 0;
  U8_PREV(bytes, 0, i, c);
  pos = static_cast<std::size_t>(i);
  return c < 0 ? char32_t{0xFFFD} : static_cast<char32_t>(c);
}

inline bool is_space(char32_t c) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0; }

inline bool is_upper(char32_t c) noexcept { return u_isupper(static_cast<UChar32>(c)) != 0; }

/// Letters, combining marks and numbers. Everything else separates terms.
inline bool is_term_char(char32_t c) noexcept {
  const auto mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_L_MASK | U_GC_M_MASK | U_GC_N_MASK)) != 0;
}

inline std::size_t code_point_count(std::string_view s) noexcept {
  std::size_t n = 0;
  for (std::size_t pos = 0; pos < s.size(); ++n) next_code_point(s, pos);
  return n;
}

inline bool is_ascii(std::string_view s) noexcept {
  for (unsigned char c : s)
    if (c >= 0x80) return false;
  return true;
}

inline std::string fold_case(std::string_view s) {
  if (is_ascii(s)) {
    std::string out(s);
    for (auto& c : out)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
  }
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  u.foldCase();
  std::string out;
  u.toUTF8String(out);
  return out;
}

inline std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const auto* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) fail(Errc::InvalidArgument, "NFC normalizer unavailable");
  auto u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  auto normalized = normalizer->normalize(u, status);
  if (U_FAILURE(status)) fail(Errc::InvalidArgument, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

/// Collapses runs of Unicode whitespace to one ASCII space and trims both ends.
inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (std::size_t pos = 0; pos < s.size();) {
    const std::size_t begin = pos;
    const char32_t c = next_code_point(s, pos);
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.append(s.substr(begin, pos - begin));
  }
  return out;
}

inline std::string_view trim(std::string_view s) noexcept {
  std::size_t begin = 0;
  while (begin < s.size()) {
    std::size_t pos = begin;
    if (!is_space(next_code_point(s, pos))) break;
    begin = pos;
  }
  std::size_t end = s.size();
  while (end > begin) {
    std::size_t pos = end;
    if (!is_space(prev_code_point(s, pos))) break;
    end = pos;
  }
  return s.substr(begin, end - begin);
}

/// Whitespace-delimited words.
inline std::vector<Span> word_spans(std::string_view s) {
  std::vector<Span> spans;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t begin = pos;
    const char32_t c = next_code_point(s, pos);
    if (is_space(c)) {
      if (start != std::string_view::npos) spans.push_back({start, begin});
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = begin;
    }
  }
  if (start != std::string_view::npos) spans.push_back({start, s.size()});
  return spans;
}

inline std::size_t word_count(std::string_view s) { return word_spans(s).size(); }

/// Maximal runs of term characters (letters, marks, digits).
inline std::vector<Span> term_spans(std::string_view s) {
  std::vector<Span> spans;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < s.size()) {
    const std::size_t begin = pos;
    const char32_t c = next_code_point(s, pos);
    if (!is_term_char(c)) {
      if (start != std::string_view::npos) spans.push_back({start, begin});
      start = std::string_view::npos;
    } else if (start == std::string_view::npos) {
      start = begin;
    }
  }
  if (start != std::string_view::npos) spans.push_back({start, s.size()});
  return spans;
}

/// Case-folded terms: the token stream BM25 counts.
inline std::vector<std::string> terms(std::string_view s) {
  std::vector<std::string> out;
  for (const auto& span : term_spans(s)) out.push_back(fold_case(s.substr(span.start, span.size())));
  return out;
}

inline bool has_term_char(std::string_view s) noexcept {
  for (std::size_t pos = 0; pos < s.size();)
    if (is_term_char(next_code_point(s, pos))) return true;
  return false;
}

/// Sentences end at '.', '!' or '?' followed by whitespace or the end of text.
/// Returned spans are trimmed and never empty.
inline std::vector<Span> sentence_spans(std::string_view s) {
  std::vector<Span> spans;
  auto push = [&](std::size_t begin, std::size_t end) {
    const auto piece = trim(s.substr(begin, end - begin));
    if (piece.empty()) return;
    const auto offset = static_cast<std::size_t>(piece.data() - s.data());
    spans.push_back({offset, offset + piece.size()});
  };
  std::size_t begin = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t next = i + 1;
    if (next == s.size()) break;
    std::size_t probe = next;
    if (is_space(next_code_point(s, probe))) {
      push(begin, next);
      begin = next;
    }
  }
  push(begin, s.size());
  return spans;
}

inline std::size_t sentence_count(std::string_view s) { return sentence_spans(s).size(); }

/// The text up to the end of the `n`th sentence, trimmed.
inline std::string first_sentences(std::string_view s, std::size_t n) {
  const auto spans = sentence_spans(s);
  if (spans.empty() || n == 0) return {};
  if (spans.size() <= n) return std::string(trim(s));
  return std::string(s.substr(spans.front().start, spans[n - 1].end - spans.front().start));
}

} // namespace pmprag::text
