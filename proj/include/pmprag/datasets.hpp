#pragma once

// Loaders for the three evaluation corpora. All text goes through NFC,
// whitespace collapsing and trimming; case is preserved.

#include "json.hpp"

#include "pmprag/core.hpp"
#include "pmprag/error.hpp"
#include "pmprag/fs_util.hpp"
#include "pmprag/text.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pmprag {

inline std::string normalize_text(std::string_view s) { return text::collapse_whitespace(text::nfc(s)); }

struct DelimitedRecord {
  std::vector<std::string> fields;
  std::size_t line = 0; // 1-based line where the record starts
};

/// RFC 4180-style reader: quoted fields may contain the delimiter, doubled
/// quotes and newlines. Blank lines are skipped.
inline std::vector<DelimitedRecord> parse_delimited(std::string_view content, char delim) {
  if (content.starts_with("\xEF\xBB\xBF")) content.remove_prefix(3);
  std::vector<DelimitedRecord> out;
  DelimitedRecord rec;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  rec.line = 1;
  auto end_record = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) out.push_back(std::move(rec));
    rec = {};
    rec.line = line;
    field_started = false;
  };
  for (std::size_t i = 0; i < content.size(); ++i) {
    const char c = content[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      rec.fields.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
      continue;
    } else if (c == '\n') {
      ++line;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) fail(Errc::Format, "unterminated quoted field starting on line " + std::to_string(rec.line));
  if (!field.empty() || !rec.fields.empty()) end_record();
  return out;
}

namespace detail {

inline Label binary_label(std::string_view value, const std::string& where) {
  const auto v = text::trim(value);
  if (v == "1") return Label::Sarcastic;
  if (v == "0") return Label::NotSarcastic;
  fail(Errc::Format, where + ": label must be 0 or 1, got '" + std::string(v) + "'");
}

inline std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

} // namespace detail

/// SemEval-2018 Task 3 test file: tab-separated, header row, columns
/// (index, label, tweet).
inline std::vector<Sample> load_semeval(const std::filesystem::path& path) {
  const auto records = parse_delimited(read_file(path), '\t');
  std::vector<Sample> out;
  if (records.empty()) return out;
  if (records.front().fields.size() != 3)
    fail(Errc::Format, detail::location(path, records.front().line) + ": header must have 3 tab-separated columns");
  std::unordered_set<std::string> ids;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto where = detail::location(path, rec.line);
    if (rec.fields.size() != 3)
      fail(Errc::Format, where + ": expected 3 columns, got " + std::to_string(rec.fields.size()));
    Sample s;
    const auto index = std::string(text::trim(rec.fields[0]));
    s.id = "semeval:" + (index.empty() ? std::to_string(r - 1) : index);
    s.gold = detail::binary_label(rec.fields[1], where);
    s.text = normalize_text(rec.fields[2]);
    s.dataset = DatasetKind::SemEval2018T3;
    s.language = LanguageTag::English;
    if (s.text.empty()) fail(Errc::Format, where + ": empty tweet");
    if (!ids.insert(s.id).second) fail(Errc::Format, where + ": duplicate id " + s.id);
    out.push_back(std::move(s));
  }
  return out;
}

struct RawMustardEntry {
  std::string key;
  std::string utterance;
  std::vector<std::string> context;
  bool sarcasm = false;
  std::string speaker;
  std::vector<std::string> context_speakers;
  std::string show;
};

/// Prior turns joined by spaces, then the target utterance in braces.
inline std::string flatten_mustard(const RawMustardEntry& entry) {
  std::string out;
  for (const auto& turn : entry.context) {
    auto t = normalize_text(turn);
    if (t.empty()) continue;
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  if (!out.empty()) out.push_back(' ');
  return out + "{" + normalize_text(entry.utterance) + "}";
}

inline std::vector<RawMustardEntry> parse_mustard_entries(std::string_view json_text, const std::string& where) {
  nlohmann::ordered_json root;
  try {
    root = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Format, where + ": invalid JSON: " + e.what());
  }
  if (!root.is_object()) fail(Errc::Format, where + ": expected a JSON object keyed by entry id");
  std::vector<RawMustardEntry> out;
  for (const auto& [key, value] : root.items()) {
    const auto at = where + " entry " + key;
    if (!value.is_object()) fail(Errc::Format, at + ": not an object");
    if (!value.contains("utterance") || !value["utterance"].is_string())
      fail(Errc::Format, at + ": missing utterance");
    if (!value.contains("sarcasm") || !value["sarcasm"].is_boolean()) fail(Errc::Format, at + ": missing sarcasm");
    RawMustardEntry e;
    e.key = key;
    e.utterance = value["utterance"].get<std::string>();
    e.sarcasm = value["sarcasm"].get<bool>();
    if (value.contains("context")) {
      if (!value["context"].is_array()) fail(Errc::Format, at + ": context must be a list");
      for (const auto& turn : value["context"]) e.context.push_back(turn.get<std::string>());
    }
    if (value.contains("speaker") && value["speaker"].is_string()) e.speaker = value["speaker"].get<std::string>();
    if (value.contains("context_speakers") && value["context_speakers"].is_array())
      for (const auto& s : value["context_speakers"])
        if (s.is_string()) e.context_speakers.push_back(s.get<std::string>());
    if (value.contains("show") && value["show"].is_string()) e.show = value["show"].get<std::string>();
    if (normalize_text(e.utterance).empty()) fail(Errc::Format, at + ": empty utterance");
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<Sample> load_mustard(const std::filesystem::path& path) {
  std::vector<Sample> out;
  for (const auto& e : parse_mustard_entries(read_file(path), path.string()))
    out.push_back({"mustard:" + e.key, flatten_mustard(e), e.sarcasm ? Label::Sarcastic : Label::NotSarcastic,
                   DatasetKind::MUStARD, LanguageTag::English});
  return out;
}

/// Indonesian sarcastic-tweet split: CSV (or TSV by extension) with a header
/// naming "tweet" and "label" columns. When `expected_rows` is given the
/// row count must match it.
inline std::vector<Sample> load_twitter_id(const std::filesystem::path& path,
                                           std::optional<std::size_t> expected_rows = std::nullopt) {
  const char delim = path.extension() == ".tsv" ? '\t' : ',';
  const auto records = parse_delimited(read_file(path), delim);
  std::vector<Sample> out;
  if (records.empty()) fail(Errc::Format, path.string() + ": missing header");
  const auto& header = records.front().fields;
  std::optional<std::size_t> tweet_col;
  std::optional<std::size_t> label_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = text::fold_case(text::trim(header[i]));
    if (name == "tweet" || name == "text") tweet_col = i;
    if (name == "label") label_col = i;
  }
  if (!tweet_col || !label_col)
    fail(Errc::Format, detail::location(path, records.front().line) + ": header needs tweet and label columns");
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto where = detail::location(path, rec.line);
    if (rec.fields.size() != header.size())
      fail(Errc::Format, where + ": expected " + std::to_string(header.size()) + " columns, got " +
                             std::to_string(rec.fields.size()));
    Sample s;
    s.id = "twitter-id:" + std::to_string(r - 1);
    s.gold = detail::binary_label(rec.fields[*label_col], where);
    s.text = normalize_text(rec.fields[*tweet_col]);
    s.dataset = DatasetKind::TwitterIndonesia;
    s.language = LanguageTag::Indonesian;
    if (s.text.empty()) fail(Errc::Format, where + ": empty tweet");
    out.push_back(std::move(s));
  }
  if (expected_rows && *expected_rows != out.size())
    fail(Errc::Dataset, path.string() + ": expected " + std::to_string(*expected_rows) + " rows, loaded " +
                            std::to_string(out.size()));
  return out;
}

inline std::vector<Sample> load_dataset(DatasetKind kind, const std::filesystem::path& path,
                                        std::optional<std::size_t> expected_rows = std::nullopt) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) fail(Errc::Dataset, "dataset file not found: " + path.string());
  std::vector<Sample> out;
  switch (kind) {
  case DatasetKind::SemEval2018T3: out = load_semeval(path); break;
  case DatasetKind::MUStARD: out = load_mustard(path); break;
  case DatasetKind::TwitterIndonesia: return load_twitter_id(path, expected_rows);
  }
  if (expected_rows && *expected_rows != out.size())
    fail(Errc::Dataset, path.string() + ": expected " + std::to_string(*expected_rows) + " rows, loaded " +
                            std::to_string(out.size()));
  return out;
}

inline nlohmann::json to_json(const Sample& s) {
  return {{"id", s.id},
          {"text", s.text},
          {"gold", to_string(s.gold)},
          {"dataset", to_string(s.dataset)},
          {"language", to_string(s.language)}};
}

inline Sample sample_from_json(const nlohmann::json& j) {
  return {j.at("id").get<std::string>(), j.at("text").get<std::string>(),
          parse_label(j.at("gold").get<std::string>()), parse_dataset(j.at("dataset").get<std::string>()),
          parse_language(j.at("language").get<std::string>())};
}

} // namespace pmprag
