#pragma once

// The five pipelines. Every variant is the two-call skeleton
//   A1 = P1(X (+) W),  (A2, y) = P2(A1)
// where W is empty for the baseline, and the few-shot variants add F to
// the system prompt of P2 only.

#include "pmprag/core.hpp"
#include "pmprag/error.hpp"
#include "pmprag/keyword_extraction.hpp"
#include "pmprag/llm_gateway.hpp"
#include "pmprag/templates.hpp"
#include "pmprag/text.hpp"
#include "pmprag/word_retrieval.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmprag {

/// "<kw> is <definition>". A definition that already opens with the
/// keyword ("Wkwk is an expression ...") is used as is.
inline std::string definition_line(const WordInfo& info, const PromptTemplateSet& templates) {
  const auto folded_def = text::fold_case(info.definition);
  const auto folded_kw = text::fold_case(info.keyword);
  if (folded_def.starts_with(folded_kw + " ")) return info.definition;
  return info.keyword + " " + std::string(templates.definition_connective()) + " " + info.definition;
}

inline std::string render_word_info_block(const std::vector<WordInfo>& infos, const PromptTemplateSet& templates) {
  std::string out = templates.wordinfo_user_header;
  for (const auto& info : infos) out += "\n" + definition_line(info, templates);
  return out;
}

inline ChatRequest build_p1(const Sample& sample, const std::vector<WordInfo>& word_infos,
                            const PromptTemplateSet& templates) {
  if (templates.language != sample.language)
    fail(Errc::TemplateLanguageMismatch, "templates are " + std::string(to_string(templates.language)) +
                                             " but sample " + sample.id + " is " +
                                             std::string(to_string(sample.language)));
  if (word_infos.empty()) return make_request(Purpose::P1, templates.p1_system, sample.text);
  return make_request(Purpose::P1, templates.p1_system + "\n" + templates.wordinfo_system_suffix,
                      sample.text + "\n" + render_word_info_block(word_infos, templates));
}

inline ChatRequest build_p2(const std::string& a1, const std::optional<FewShotBlock>& few_shot,
                            const PromptTemplateSet& templates) {
  if (text::trim(a1).empty()) fail(Errc::InvalidArgument, "preliminary analysis is empty");
  if (!few_shot) return make_request(Purpose::P2, templates.p2_system, a1);
  return make_request(Purpose::P2, templates.p2_system + "\n\n" + few_shot->render(), a1);
}

namespace detail {

inline bool ascii_word_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c >= 0x80;
}

} // namespace detail

/// Label of the last standalone YES/NO token (any case).
inline Label parse_verdict(std::string_view a2) {
  std::optional<Label> last;
  for (std::size_t i = 0; i < a2.size();) {
    const auto c = static_cast<unsigned char>(a2[i]);
    if (!detail::ascii_word_char(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < a2.size() && detail::ascii_word_char(static_cast<unsigned char>(a2[j]))) ++j;
    if (auto label = label_from_answer(a2.substr(i, j - i))) last = label;
    i = j;
  }
  if (!last) fail(Errc::VerdictNotFound, "no YES/NO verdict in reflection");
  return *last;
}

struct PipelineTrace {
  std::string sample_id;
  PipelineVariant variant = PipelineVariant::PMP;
  std::optional<KeywordSet> keywords;
  std::vector<WordInfo> word_infos;
  ChatExchange p1_exchange;
  ChatExchange p2_exchange;
  std::string a1;
  std::string a2;
  Label verdict = Label::NotSarcastic;
  std::chrono::nanoseconds wall_time{0};
  std::vector<ChatExchange> exchanges; // every call for this sample, in order
};

/// A sample that could not be scored. Carries what was done before the
/// failure.
class SampleSkipped : public std::runtime_error {
public:
  SampleSkipped(Errc cause, const std::string& reason, std::vector<ChatExchange> exchanges,
                std::optional<KeywordSet> keywords)
      : std::runtime_error(reason), cause_(cause), exchanges_(std::move(exchanges)), keywords_(std::move(keywords)) {}

  [[nodiscard]] Errc cause() const noexcept { return cause_; }
  [[nodiscard]] const std::vector<ChatExchange>& exchanges() const noexcept { return exchanges_; }
  [[nodiscard]] const std::optional<KeywordSet>& keywords() const noexcept { return keywords_; }

private:
  Errc cause_;
  std::vector<ChatExchange> exchanges_;
  std::optional<KeywordSet> keywords_;
};

struct PipelineDeps {
  Gateway& gateway;
  const TemplateCatalog& templates;
  const TaggerPort* tagger = nullptr;
  RetrievalDeps retrieval;
  std::size_t few_shot_k = 2;
  KeywordLimits limits;
};

inline bool skips_sample(Errc code) {
  switch (code) {
  case Errc::Transport:
  case Errc::EmptyResponse:
  case Errc::MissingTranscript:
  case Errc::Tagger:
  case Errc::MalformedCsv:
  case Errc::SearchQuota:
  case Errc::SearchTransport:
  case Errc::VerdictNotFound: return true;
  default: return false;
  }
}

/// Runs one sample through one variant. Per-sample failures surface as
/// SampleSkipped; configuration errors propagate unchanged.
inline PipelineTrace run_pipeline(const Sample& sample, PipelineVariant variant, const PipelineDeps& deps) {
  const auto started = std::chrono::steady_clock::now();
  const auto plan = variant_plan(variant);
  const auto& templates = deps.templates.for_language(sample.language);
  if (plan.extraction == ExtractionMethod::TokenTagging && deps.tagger == nullptr)
    fail(Errc::Config, "variant " + std::string(to_string(variant)) + " needs a tagger");
  if (plan.retrieval == WordInfoSource::GoogleSearch && deps.retrieval.search == nullptr)
    fail(Errc::Config, "variant " + std::string(to_string(variant)) + " needs a search client");

  ChatSession session(deps.gateway);
  PipelineTrace trace;
  trace.sample_id = sample.id;
  trace.variant = variant;
  try {
    switch (plan.extraction) {
    case ExtractionMethod::None: break;
    case ExtractionMethod::TokenTagging:
      trace.keywords = extract_token_tagging(sample, *deps.tagger, deps.limits);
      break;
    case ExtractionMethod::LLMBased:
      trace.keywords = extract_llm_based(sample, session, templates, deps.limits);
      break;
    }
    if (trace.keywords && !trace.keywords->keywords.empty())
      trace.word_infos =
          retrieve_word_infos(trace.keywords->keywords, plan.retrieval, session, templates, deps.retrieval);

    trace.p1_exchange = session.chat(build_p1(sample, trace.word_infos, templates));
    trace.a1 = trace.p1_exchange.response_text;
    std::optional<FewShotBlock> few_shot;
    if (plan.few_shot) few_shot = few_shot_block(templates, deps.few_shot_k);
    trace.p2_exchange = session.chat(build_p2(trace.a1, few_shot, templates));
    trace.a2 = trace.p2_exchange.response_text;
    trace.verdict = parse_verdict(trace.a2);
  } catch (const Error& e) {
    if (!skips_sample(e.code())) throw;
    throw SampleSkipped(e.code(), e.what(), session.exchanges(), trace.keywords);
  }
  trace.exchanges = session.exchanges();
  trace.wall_time = std::chrono::steady_clock::now() - started;
  return trace;
}

} // namespace pmprag
