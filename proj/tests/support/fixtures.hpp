#pragma once

#include "json.hpp"

#include "pmprag/fs_util.hpp"
#include "pmprag/runner.hpp"

#include <filesystem>
#include <sstream>
#include <string>

#ifndef PMPRAG_FIXTURE_DIR
#error "PMPRAG_FIXTURE_DIR must be defined"
#endif

namespace pmprag::testing {

inline constexpr const char* kFixtureModel = "fixture-model";

inline std::filesystem::path fixture_dir() { return PMPRAG_FIXTURE_DIR; }

inline std::filesystem::path fixture_data(DatasetKind kind) {
  switch (kind) {
  case DatasetKind::SemEval2018T3: return fixture_dir() / "semeval.tsv";
  case DatasetKind::MUStARD: return fixture_dir() / "mustard.json";
  case DatasetKind::TwitterIndonesia: return fixture_dir() / "twitter_id.csv";
  }
  return {};
}

inline std::filesystem::path fixture_transcripts() { return fixture_dir() / "transcripts" / kFixtureModel; }

inline std::filesystem::path expected_dir(DatasetKind kind, PipelineVariant variant) {
  return fixture_dir() / "expected" / std::string(to_string(kind)) / std::string(to_string(variant));
}

/// Replay configuration over the committed fixtures.
inline RunConfig fixture_replay_config(DatasetKind kind, PipelineVariant variant, const std::filesystem::path& out) {
  RunConfig c;
  c.dataset = kind;
  c.data_path = fixture_data(kind);
  c.variant = variant;
  c.model_name = kFixtureModel;
  c.backend = BackendKind::Replay;
  c.output_dir = out;
  c.transcripts_dir = fixture_transcripts();
  c.use_cache = false;
  c.concurrency = 2;
  return c;
}

/// Run log with the timing field removed from every record.
inline std::string strip_timing(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::ordered_json::parse(line);
    j.erase("wall_time_ms");
    out += j.dump() + "\n";
  }
  return out;
}

} // namespace pmprag::testing
