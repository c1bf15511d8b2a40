#include "catch_amalgamated.hpp"

#include "pmprag/bm25.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

using namespace pmprag;
using Catch::Matchers::WithinAbs;

namespace {

// Direct evaluation of the scoring formula over space-separated lowercase
// ASCII documents. Shares no code with the library.
std::vector<std::string> split_spaces(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double oracle_score(const std::vector<std::string>& query, std::size_t doc, const std::vector<std::string>& corpus,
                    double k1 = 1.2, double b = 0.75) {
  std::vector<std::vector<std::string>> docs;
  for (const auto& d : corpus) docs.push_back(split_spaces(d));
  double total_len = 0;
  for (const auto& d : docs) total_len += static_cast<double>(d.size());
  const double N = static_cast<double>(docs.size());
  const double avgdl = total_len / N;
  double score = 0;
  for (const auto& q : query) {
    double n = 0;
    for (const auto& d : docs)
      if (std::find(d.begin(), d.end(), q) != d.end()) n += 1;
    const double idf = std::log((N - n + 0.5) / (n + 0.5) + 1.0);
    const double f = static_cast<double>(std::count(docs[doc].begin(), docs[doc].end(), q));
    const double dl = static_cast<double>(docs[doc].size());
    score += idf * f * (k1 + 1) / (f + k1 * (1 - b + b * dl / avgdl));
  }
  return score;
}

std::vector<Chunk> as_chunks(const std::vector<std::string>& corpus, const std::string& url = "u") {
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    out.push_back({corpus[i], url, i, split_spaces(corpus[i]).size(), 0});
  return out;
}

std::string random_doc(std::mt19937& rng, std::size_t max_words) {
  static const std::vector<std::string> vocab{"a", "b", "c", "d", "e", "kw", "wkwk", "ipb", "slang", "laugh", "goods"};
  std::uniform_int_distribution<std::size_t> len(1, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::string out;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) out += (i ? " " : "") + vocab[pick(rng)];
  return out;
}

} // namespace

TEST_CASE("idf golden values", "[bm25]") {
  CHECK_THAT(bm25_idf(2, 1), WithinAbs(0.6931471805599453, 1e-12));
  CHECK_THAT(bm25_idf(1, 1), WithinAbs(0.28768207245178085, 1e-12));
  CHECK_THAT(bm25_idf(1000, 0), WithinAbs(std::log(2002.0), 1e-12));
}

TEST_CASE("idf domain", "[bm25]") {
  CHECK_THROWS_AS(bm25_idf(0, 0), Error);
  CHECK_THROWS_AS(bm25_idf(2, 3), Error);
  for (std::size_t n = 1; n <= 50; ++n) {
    CHECK(bm25_idf(50, n) < bm25_idf(50, n - 1));
    CHECK(bm25_idf(50, n) > 0.0);
  }
}

TEST_CASE("two-document golden score", "[bm25]") {
  const std::vector<std::string> corpus{"a b a", "b c"};
  const auto chunks = as_chunks(corpus);
  const auto stats = corpus_stats(chunks);
  CHECK(stats.n_docs == 2);
  CHECK(stats.avg_doc_len == 2.5);
  const double score = bm25_score({"a"}, chunks[0], stats);
  CHECK_THAT(score, WithinAbs(oracle_score({"a"}, 0, corpus), 1e-12));
  CHECK_THAT(score, WithinAbs(0.902321773509988, 1e-12));
  CHECK(bm25_score({"z"}, chunks[0], stats) == 0.0);
  CHECK_THAT(bm25_score({"a", "a"}, chunks[0], stats), WithinAbs(2 * score, 1e-12));
}

TEST_CASE("params are validated", "[bm25]") {
  const auto chunks = as_chunks({"a b"});
  const auto stats = corpus_stats(chunks);
  CHECK_THROWS_AS(bm25_score({"a"}, chunks[0], stats, {0.0, 0.75}), Error);
  CHECK_THROWS_AS(bm25_score({"a"}, chunks[0], stats, {1.2, 1.5}), Error);
}

TEST_CASE("score matches oracle on random corpora", "[bm25][property]") {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<std::size_t> n_docs(1, 20);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> corpus;
    for (std::size_t i = 0, n = n_docs(rng); i < n; ++i) corpus.push_back(random_doc(rng, 50));
    const auto query = split_spaces(random_doc(rng, 3));
    const auto chunks = as_chunks(corpus);
    const auto stats = corpus_stats(chunks);
    for (std::size_t d = 0; d < corpus.size(); ++d)
      REQUIRE_THAT(bm25_score(query, chunks[d], stats), WithinAbs(oracle_score(query, d, corpus), 1e-9));
  }
}

TEST_CASE("rank_chunks orders by oracle score with tie-break", "[bm25]") {
  const std::vector<std::string> corpus{"b c d", "a b a", "a c c c c"};
  const auto chunks = as_chunks(corpus);
  const auto ranked = rank_chunks("a", chunks, {}, 3);
  std::vector<std::size_t> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return oracle_score({"a"}, x, corpus) > oracle_score({"a"}, y, corpus);
  });
  REQUIRE(ranked.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(ranked[i].index == order[i]);

  SECTION("all zero scores keep tie-break order") {
    std::vector<Chunk> mixed{{"x y", "https://b", 0, 2, 0}, {"x", "https://a", 1, 1, 0}, {"y", "https://a", 0, 1, 0}};
    const auto top = rank_chunks("zzz", mixed, {}, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].source_url == "https://a");
    CHECK(top[0].index == 0);
    CHECK(top[1].index == 1);
  }
  SECTION("single chunk") { CHECK(rank_chunks("q", as_chunks({"nothing here"}), {}, 3).size() == 1); }
  SECTION("bad arguments") {
    CHECK_THROWS_AS(rank_chunks("a", {}, {}, 3), Error);
    CHECK_THROWS_AS(rank_chunks("a", chunks, {}, 0), Error);
  }
}

TEST_CASE("duplicating the corpus keeps the ranking", "[bm25][property]") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> corpus;
    for (int i = 0; i < 6; ++i) corpus.push_back(random_doc(rng, 20));
    auto chunks = as_chunks(corpus, "https://x");
    auto doubled = chunks;
    for (auto c : chunks) {
      c.source_url = "https://y";
      doubled.push_back(c);
    }
    CHECK(corpus_stats(doubled).avg_doc_len == corpus_stats(chunks).avg_doc_len);
    const auto once = score_chunks("kw", chunks);
    const auto twice = score_chunks("kw", doubled);
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
    for (const auto& s : once) a.push_back(s.chunk.index);
    for (const auto& s : twice)
      if (s.chunk.source_url == "https://x") b.push_back(s.chunk.index);
    CHECK(a == b);
  }
}

TEST_CASE("chunk windows", "[bm25][chunking]") {
  const std::string ten = "w0 w1 w2 w3 w4 w5 w6 w7 w8 w9";
  CHECK(chunk_document(ten, 10, 0).size() == 1);

  const auto chunks = chunk_document(ten, 4, 1, "https://doc");
  REQUIRE(chunks.size() == 4);
  CHECK(chunks[0].token_offset == 0);
  CHECK(chunks[1].token_offset == 3);
  CHECK(chunks[2].token_offset == 6);
  CHECK(chunks[3].token_offset == 9);
  CHECK(chunks[3].token_count == 1);
  CHECK(chunks[1].text == "w3 w4 w5 w6");
  CHECK(chunks[3].source_url == "https://doc");
  CHECK(chunks[2].index == 2);

  CHECK_THROWS_AS(chunk_document(ten, 4, 4), Error);
  CHECK_THROWS_AS(chunk_document(ten, 0, 0), Error);
  CHECK_THROWS_AS(chunk_document("", 4, 0), Error);
}

TEST_CASE("chunk text keeps original punctuation", "[bm25][chunking]") {
  const auto chunks = chunk_document("Hello, world! It's fine.", 2, 0);
  REQUIRE(chunks.size() == 3);
  CHECK(chunks[0].text == "Hello, world");
  CHECK(chunks[1].text == "It's");
  CHECK(chunks[2].text == "fine");
}

TEST_CASE("overlap-free chunks partition the terms", "[bm25][chunking][property]") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<std::size_t> size(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const auto doc = random_doc(rng, 200);
    const auto n = split_spaces(doc).size();
    const auto chunk_size = size(rng);
    const auto chunks = chunk_document(doc, chunk_size, 0);
    std::size_t total = 0;
    std::string rebuilt;
    for (const auto& c : chunks) {
      total += c.token_count;
      rebuilt += (rebuilt.empty() ? "" : " ") + c.text;
    }
    CHECK(total == n);
    CHECK(rebuilt == doc);
  }
}
