#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmprag {

/// Failure categories raised across the library. Callers that isolate
/// per-sample failures switch on these instead of parsing messages.
enum class Errc {
  InvalidArgument,
  Config,
  Format,
  Dataset,
  Transport,
  EmptyResponse,
  MissingTranscript,
  StoreWrite,
  Tagger,
  MalformedCsv,
  SearchQuota,
  SearchTransport,
  Domain,
  DefinitionUnavailable,
  TemplateLanguageMismatch,
  VerdictNotFound,
  UnknownSampleId,
  DuplicatePrediction,
  EmptyEvaluation,
  LogParse,
};

inline constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
  case Errc::InvalidArgument: return "InvalidArgument";
  case Errc::Config: return "ConfigError";
  case Errc::Format: return "FormatError";
  case Errc::Dataset: return "DatasetError";
  case Errc::Transport: return "TransportError";
  case Errc::EmptyResponse: return "EmptyResponse";
  case Errc::MissingTranscript: return "MissingTranscript";
  case Errc::StoreWrite: return "StoreWriteError";
  case Errc::Tagger: return "TaggerError";
  case Errc::MalformedCsv: return "MalformedCSV";
  case Errc::SearchQuota: return "SearchQuotaExceeded";
  case Errc::SearchTransport: return "SearchTransportError";
  case Errc::Domain: return "DomainError";
  case Errc::DefinitionUnavailable: return "DefinitionUnavailable";
  case Errc::TemplateLanguageMismatch: return "TemplateLanguageMismatch";
  case Errc::VerdictNotFound: return "VerdictNotFound";
  case Errc::UnknownSampleId: return "UnknownSampleId";
  case Errc::DuplicatePrediction: return "DuplicatePrediction";
  case Errc::EmptyEvaluation: return "EmptyEvaluation";
  case Errc::LogParse: return "LogParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) { throw Error(code, message); }

} // namespace pmprag
