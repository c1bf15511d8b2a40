#pragma once

#include "pmprag/error.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace pmprag {

enum class Label { Sarcastic, NotSarcastic };

enum class DatasetKind { SemEval2018T3, MUStARD, TwitterIndonesia };

enum class LanguageTag { English, Indonesian };

enum class PipelineVariant { PMP, PMPWL, PMPWG, PMPWL_FS, PMPWG_FS };

enum class ExtractionMethod { None, TokenTagging, LLMBased };

enum class WordInfoSource { None, LLMOnly, GoogleSearch };

inline constexpr std::array<PipelineVariant, 5> kAllVariants = {
    PipelineVariant::PMP, PipelineVariant::PMPWL, PipelineVariant::PMPWG,
    PipelineVariant::PMPWL_FS, PipelineVariant::PMPWG_FS};

inline constexpr std::array<DatasetKind, 3> kAllDatasets = {
    DatasetKind::SemEval2018T3, DatasetKind::MUStARD, DatasetKind::TwitterIndonesia};

/// One labeled input text. Immutable once loaded.
struct Sample {
  std::string id;
  std::string text;
  Label gold = Label::NotSarcastic;
  DatasetKind dataset = DatasetKind::SemEval2018T3;
  LanguageTag language = LanguageTag::English;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct VariantPlan {
  ExtractionMethod extraction = ExtractionMethod::None;
  WordInfoSource retrieval = WordInfoSource::None;
  bool few_shot = false;

  friend bool operator==(const VariantPlan&, const VariantPlan&) = default;
};

/// Extraction/retrieval pairing and few-shot flag for each pipeline.
/// Token tagging always feeds LLM-only definitions; LLM-based extraction
/// always feeds web search.
inline constexpr VariantPlan variant_plan(PipelineVariant variant) noexcept {
  switch (variant) {
  case PipelineVariant::PMP: return {ExtractionMethod::None, WordInfoSource::None, false};
  case PipelineVariant::PMPWL: return {ExtractionMethod::TokenTagging, WordInfoSource::LLMOnly, false};
  case PipelineVariant::PMPWG: return {ExtractionMethod::LLMBased, WordInfoSource::GoogleSearch, false};
  case PipelineVariant::PMPWL_FS: return {ExtractionMethod::TokenTagging, WordInfoSource::LLMOnly, true};
  case PipelineVariant::PMPWG_FS: return {ExtractionMethod::LLMBased, WordInfoSource::GoogleSearch, true};
  }
  return {};
}

inline constexpr LanguageTag language_of(DatasetKind dataset) noexcept {
  return dataset == DatasetKind::TwitterIndonesia ? LanguageTag::Indonesian : LanguageTag::English;
}

// Answer tokens the reflection call ends with.
inline constexpr std::string_view answer_token(Label label) noexcept {
  return label == Label::Sarcastic ? "YES" : "NO";
}

inline std::optional<Label> label_from_answer(std::string_view token) {
  auto eq = [&](std::string_view want) {
    if (token.size() != want.size()) return false;
    for (std::size_t i = 0; i < token.size(); ++i) {
      char c = token[i];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c != want[i]) return false;
    }
    return true;
  };
  if (eq("YES")) return Label::Sarcastic;
  if (eq("NO")) return Label::NotSarcastic;
  return std::nullopt;
}

// Names used on the command line, in run logs and in file layouts.

inline constexpr std::string_view to_string(Label label) noexcept {
  return label == Label::Sarcastic ? "Sarcastic" : "NotSarcastic";
}

inline constexpr std::string_view to_string(LanguageTag language) noexcept {
  return language == LanguageTag::English ? "en" : "id";
}

inline constexpr std::string_view to_string(DatasetKind dataset) noexcept {
  switch (dataset) {
  case DatasetKind::SemEval2018T3: return "semeval";
  case DatasetKind::MUStARD: return "mustard";
  case DatasetKind::TwitterIndonesia: return "twitter-id";
  }
  return "";
}

inline constexpr std::string_view to_string(PipelineVariant variant) noexcept {
  switch (variant) {
  case PipelineVariant::PMP: return "pmp";
  case PipelineVariant::PMPWL: return "pmpwl";
  case PipelineVariant::PMPWG: return "pmpwg";
  case PipelineVariant::PMPWL_FS: return "pmpwl-fs";
  case PipelineVariant::PMPWG_FS: return "pmpwg-fs";
  }
  return "";
}

inline constexpr std::string_view to_string(WordInfoSource source) noexcept {
  switch (source) {
  case WordInfoSource::None: return "none";
  case WordInfoSource::LLMOnly: return "llm-only";
  case WordInfoSource::GoogleSearch: return "google-search";
  }
  return "";
}

inline constexpr std::string_view to_string(ExtractionMethod method) noexcept {
  switch (method) {
  case ExtractionMethod::None: return "none";
  case ExtractionMethod::TokenTagging: return "token-tagging";
  case ExtractionMethod::LLMBased: return "llm-based";
  }
  return "";
}

inline Label parse_label(std::string_view name) {
  if (name == "Sarcastic") return Label::Sarcastic;
  if (name == "NotSarcastic") return Label::NotSarcastic;
  fail(Errc::InvalidArgument, "unknown label '" + std::string(name) + "'");
}

inline LanguageTag parse_language(std::string_view name) {
  if (name == "en") return LanguageTag::English;
  if (name == "id") return LanguageTag::Indonesian;
  fail(Errc::InvalidArgument, "unknown language '" + std::string(name) + "'");
}

inline DatasetKind parse_dataset(std::string_view name) {
  for (auto d : kAllDatasets)
    if (to_string(d) == name) return d;
  fail(Errc::InvalidArgument, "unknown dataset '" + std::string(name) + "'");
}

inline PipelineVariant parse_variant(std::string_view name) {
  for (auto v : kAllVariants)
    if (to_string(v) == name) return v;
  fail(Errc::InvalidArgument, "unknown variant '" + std::string(name) + "'");
}

inline WordInfoSource parse_word_info_source(std::string_view name) {
  if (name == "llm-only") return WordInfoSource::LLMOnly;
  if (name == "google-search") return WordInfoSource::GoogleSearch;
  if (name == "none") return WordInfoSource::None;
  fail(Errc::InvalidArgument, "unknown word-info source '" + std::string(name) + "'");
}

} // namespace pmprag
