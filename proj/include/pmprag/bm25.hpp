#pragma once

// Okapi BM25 over word-window chunks of retrieved documents.
//
//   score(q, D) = sum_i idf(q_i) * f(q_i, D) * (k1 + 1)
//                          / (f(q_i, D) + k1 * (1 - b + b * |D| / avgDL))
//   idf(q_i)    = ln((N - n(q_i) + 0.5) / (n(q_i) + 0.5) + 1)
//
// Terms come from text::terms: case-folded, split on anything that is not
// a letter, mark or digit, no stemming, no stopword removal.

#include "pmprag/error.hpp"
#include "pmprag/text.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pmprag {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;

  void validate() const {
    if (!(k1 > 0.0)) fail(Errc::InvalidArgument, "BM25 k1 must be positive");
    if (!(b >= 0.0 && b <= 1.0)) fail(Errc::InvalidArgument, "BM25 b must lie in [0, 1]");
  }
};

struct Chunk {
  std::string text;
  std::string source_url;
  std::size_t index = 0;       // position within its source document
  std::size_t token_count = 0; // BM25 terms in text
  std::size_t token_offset = 0; // first term's position in the document

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct CorpusStats {
  std::size_t n_docs = 0;
  double avg_doc_len = 0.0;
  std::unordered_map<std::string, std::size_t> doc_freq;

  [[nodiscard]] std::size_t df(const std::string& term) const {
    const auto it = doc_freq.find(term);
    return it == doc_freq.end() ? 0 : it->second;
  }
};

/// Windows of `chunk_size` terms starting at offsets 0, s, 2s, ... (s =
/// chunk_size - overlap) while the offset is inside the document; the last
/// window may be shorter. Chunk text is the original substring spanning
/// its terms.
inline std::vector<Chunk> chunk_document(std::string_view doc, std::size_t chunk_size, std::size_t overlap,
                                         std::string_view source_url = {}) {
  if (chunk_size == 0 || overlap >= chunk_size)
    fail(Errc::InvalidArgument, "chunking requires chunk_size > overlap >= 0");
  if (doc.empty()) fail(Errc::InvalidArgument, "cannot chunk empty text");
  const auto spans = text::term_spans(doc);
  const std::size_t step = chunk_size - overlap;
  std::vector<Chunk> out;
  for (std::size_t offset = 0, index = 0; offset < spans.size(); offset += step, ++index) {
    const std::size_t last = std::min(offset + chunk_size, spans.size()) - 1;
    const auto start = spans[offset].start;
    const auto end = spans[last].end;
    out.push_back({std::string(doc.substr(start, end - start)), std::string(source_url), index,
                   last - offset + 1, offset});
  }
  return out;
}

inline double bm25_idf(std::size_t n_docs, std::size_t n_containing) {
  if (n_docs < 1) fail(Errc::Domain, "IDF requires at least one document");
  if (n_containing > n_docs) fail(Errc::Domain, "document frequency exceeds corpus size");
  const double n = static_cast<double>(n_docs);
  const double nq = static_cast<double>(n_containing);
  return std::log((n - nq + 0.5) / (nq + 0.5) + 1.0);
}

inline CorpusStats corpus_stats(const std::vector<std::vector<std::string>>& docs) {
  if (docs.empty()) fail(Errc::InvalidArgument, "corpus is empty");
  CorpusStats stats;
  stats.n_docs = docs.size();
  std::size_t total = 0;
  for (const auto& doc : docs) {
    total += doc.size();
    std::unordered_set<std::string_view> seen(doc.begin(), doc.end());
    for (auto term : seen) ++stats.doc_freq[std::string(term)];
  }
  stats.avg_doc_len = static_cast<double>(total) / static_cast<double>(stats.n_docs);
  return stats;
}

inline CorpusStats corpus_stats(const std::vector<Chunk>& chunks) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(chunks.size());
  for (const auto& c : chunks) docs.push_back(text::terms(c.text));
  return corpus_stats(docs);
}

/// Score of a pre-tokenized document. Absent query terms contribute zero;
/// a repeated query term contributes once per repetition.
inline double bm25_score_terms(const std::vector<std::string>& query, const std::vector<std::string>& doc_terms,
                               const CorpusStats& stats, const Bm25Params& params) {
  params.validate();
  if (stats.avg_doc_len <= 0.0) return 0.0;
  std::unordered_map<std::string_view, std::size_t> tf;
  for (const auto& t : doc_terms) ++tf[t];
  const double len_norm =
      params.k1 * (1.0 - params.b + params.b * static_cast<double>(doc_terms.size()) / stats.avg_doc_len);
  double score = 0.0;
  for (const auto& q : query) {
    const auto it = tf.find(q);
    if (it == tf.end()) continue;
    const double f = static_cast<double>(it->second);
    score += bm25_idf(stats.n_docs, stats.df(q)) * f * (params.k1 + 1.0) / (f + len_norm);
  }
  return score;
}

inline double bm25_score(const std::vector<std::string>& query, const Chunk& doc, const CorpusStats& stats,
                         const Bm25Params& params = {}) {
  return bm25_score_terms(query, text::terms(doc.text), stats, params);
}

struct ScoredChunk {
  Chunk chunk;
  double score = 0.0;
};

/// All chunks scored against the tokenized keyword, best first; ties fall
/// back to (source_url, index).
inline std::vector<ScoredChunk> score_chunks(std::string_view keyword, const std::vector<Chunk>& chunks,
                                             const Bm25Params& params = {}) {
  if (chunks.empty()) fail(Errc::InvalidArgument, "no chunks to rank");
  std::vector<std::vector<std::string>> docs;
  docs.reserve(chunks.size());
  for (const auto& c : chunks) docs.push_back(text::terms(c.text));
  const auto stats = corpus_stats(docs);
  const auto query = text::terms(keyword);
  std::vector<ScoredChunk> scored;
  scored.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i)
    scored.push_back({chunks[i], bm25_score_terms(query, docs[i], stats, params)});
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.chunk.source_url != b.chunk.source_url) return a.chunk.source_url < b.chunk.source_url;
    return a.chunk.index < b.chunk.index;
  });
  return scored;
}

inline std::vector<Chunk> rank_chunks(std::string_view keyword, const std::vector<Chunk>& chunks,
                                      const Bm25Params& params, std::size_t top_k) {
  if (top_k < 1) fail(Errc::InvalidArgument, "top_k must be at least 1");
  auto scored = score_chunks(keyword, chunks, params);
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < scored.size() && i < top_k; ++i) out.push_back(std::move(scored[i].chunk));
  return out;
}

} // namespace pmprag
