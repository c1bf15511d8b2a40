#include "catch_amalgamated.hpp"

#include "pmprag/fs_util.hpp"
#include "pmprag/prompt_pipeline.hpp"

#include "fake_network.hpp"

#include <random>

using namespace pmprag;

namespace {

auto code_is(Errc code) {
  return Catch::Matchers::Predicate<Error>([code](const Error& e) { return e.code() == code; },
                                           std::string("error code ") + std::string(errc_name(code)));
}

std::string render(const ChatRequest& r) { return "[system]\n" + r.system() + "\n[user]\n" + r.user() + "\n"; }

std::string golden(const std::string& name) {
  return read_file(std::filesystem::path(PMPRAG_GOLDEN_DIR) / "prompts" / (name + ".txt"));
}

const Sample kEnglish{"semeval:7", "Sweet United Nations video. Just in time for Christmas.", Label::Sarcastic,
                      DatasetKind::SemEval2018T3, LanguageTag::English};
const Sample kIndonesian{"twitter-id:0", "Mantap, macet lagi wkwk", Label::Sarcastic,
                         DatasetKind::TwitterIndonesia, LanguageTag::Indonesian};

const std::vector<WordInfo> kEnglishInfos{
    {"United Nations", "an intergovernmental organization founded in 1945.", WordInfoSource::LLMOnly, {}},
    {"Christmas", "Christmas is an annual festival held on 25 December.", WordInfoSource::LLMOnly, {}}};
const std::vector<WordInfo> kIndonesianInfos{
    {"wkwk", "ekspresi tawa dalam tulisan daring.", WordInfoSource::LLMOnly, {}}};

const std::string kEnglishA1 = "The speaker praises a video while hinting the timing is odd.";
const std::string kIndonesianA1 = "Pembicara memuji kemacetan sambil tertawa.";

class ListSearch final : public SearchPort {
public:
  std::vector<SearchResult> search(const std::string& keyword, int) override {
    ++calls;
    return {{keyword, "https://encyclopedia.test/" + keyword,
             keyword + " is a word people type in chats to show they are laughing at something funny or silly "
                       "and it appears very often in casual posts",
             1}};
  }
  int calls = 0;
};

class QuotaSearch final : public SearchPort {
public:
  std::vector<SearchResult> search(const std::string&, int) override { fail(Errc::SearchQuota, "quota"); }
};

std::vector<Purpose> purposes(const std::vector<ChatRequest>& requests) {
  std::vector<Purpose> out;
  for (const auto& r : requests) out.push_back(r.purpose);
  return out;
}

} // namespace

TEST_CASE("P1 and P2 match the golden prompts", "[prompts][golden]") {
  const auto& en = builtin_english_templates();
  const auto& id = builtin_indonesian_templates();
  const auto en_fs = few_shot_block(en);
  const auto id_fs = few_shot_block(id);

  CHECK(render(build_p1(kEnglish, {}, en)) == golden("en_plain_p1"));
  CHECK(render(build_p1(kEnglish, kEnglishInfos, en)) == golden("en_wordinfo_p1"));
  CHECK(render(build_p1(kEnglish, kEnglishInfos, en)) == golden("en_fewshot_p1"));
  CHECK(render(build_p2(kEnglishA1, std::nullopt, en)) == golden("en_plain_p2"));
  CHECK(render(build_p2(kEnglishA1, std::nullopt, en)) == golden("en_wordinfo_p2"));
  CHECK(render(build_p2(kEnglishA1, en_fs, en)) == golden("en_fewshot_p2"));

  CHECK(render(build_p1(kIndonesian, {}, id)) == golden("id_plain_p1"));
  CHECK(render(build_p1(kIndonesian, kIndonesianInfos, id)) == golden("id_wordinfo_p1"));
  CHECK(render(build_p1(kIndonesian, kIndonesianInfos, id)) == golden("id_fewshot_p1"));
  CHECK(render(build_p2(kIndonesianA1, std::nullopt, id)) == golden("id_plain_p2"));
  CHECK(render(build_p2(kIndonesianA1, std::nullopt, id)) == golden("id_wordinfo_p2"));
  CHECK(render(build_p2(kIndonesianA1, id_fs, id)) == golden("id_fewshot_p2"));
}

TEST_CASE("template files match the embedded copies", "[prompts][templates]") {
  const auto catalog = TemplateCatalog::load(PMPRAG_TEMPLATE_DIR);
  CHECK(catalog.english == builtin_english_templates());
  CHECK(catalog.indonesian == builtin_indonesian_templates());
  CHECK(clean_template_text("## note\nline one\nline two\n") == "line one\nline two");
  CHECK_THROWS_MATCHES(load_template_set("/nonexistent", LanguageTag::English), Error, code_is(Errc::Config));
}

TEST_CASE("few-shot blocks", "[prompts][fewshot]") {
  for (const auto* t : {&builtin_english_templates(), &builtin_indonesian_templates()}) {
    const auto block = few_shot_block(*t);
    CHECK(block.k() == 2);
    CHECK(ends_with_decision(block.examples[0]));
    CHECK(ends_with_decision(block.examples[1]));
    // One sarcastic and one literal example.
    CHECK(block.examples[0].ends_with("YES"));
    CHECK(block.examples[1].ends_with("NO"));
    CHECK(block.take(1).k() == 1);
    CHECK_THROWS_AS(block.take(3), Error);
  }
  CHECK(few_shot_block(builtin_english_templates()).header == "Here are example reflections:");
  CHECK(few_shot_block(builtin_indonesian_templates()).header.empty());
  CHECK_THROWS_MATCHES(parse_few_shot("Tweet: x\nno decision here"), Error, code_is(Errc::Format));
}

TEST_CASE("word info makes prompts strictly longer", "[prompts][property]") {
  const auto& en = builtin_english_templates();
  const auto plain = build_p1(kEnglish, {}, en);
  for (std::size_t n = 1; n <= kEnglishInfos.size(); ++n) {
    const std::vector<WordInfo> infos(kEnglishInfos.begin(), kEnglishInfos.begin() + static_cast<std::ptrdiff_t>(n));
    const auto with = build_p1(kEnglish, infos, en);
    CHECK(with.system().starts_with(plain.system()));
    CHECK(with.user().starts_with(plain.user()));
    CHECK(with.user().size() > plain.user().size());
    CHECK(with.system().size() > plain.system().size());
  }
  const auto fs = build_p2(kEnglishA1, few_shot_block(en), en);
  CHECK(fs.system().starts_with(build_p2(kEnglishA1, std::nullopt, en).system()));
  CHECK(fs.user() == kEnglishA1);
}

TEST_CASE("prompt building errors", "[prompts]") {
  CHECK_THROWS_MATCHES(build_p1(kIndonesian, {}, builtin_english_templates()), Error,
                       code_is(Errc::TemplateLanguageMismatch));
  CHECK_THROWS_MATCHES(build_p2("   ", std::nullopt, builtin_english_templates()), Error,
                       code_is(Errc::InvalidArgument));
  const WordInfo already{"Wkwk", "wkwk is laughter.", WordInfoSource::LLMOnly, {}};
  CHECK(definition_line(already, builtin_english_templates()) == "wkwk is laughter.");
  const WordInfo bare{"IPB", "sebuah universitas di Bogor.", WordInfoSource::LLMOnly, {}};
  CHECK(definition_line(bare, builtin_indonesian_templates()) == "IPB adalah sebuah universitas di Bogor.");
}

TEST_CASE("verdict parsing", "[prompts][verdict]") {
  CHECK(parse_verdict("Final decision: YES") == Label::Sarcastic);
  CHECK(parse_verdict("Final decision: no") == Label::NotSarcastic);
  CHECK(parse_verdict("At first YES, but after reflection: NO.") == Label::NotSarcastic);
  CHECK(parse_verdict("NO... actually **Yes**") == Label::Sarcastic);
  CHECK(parse_verdict("Keputusan akhir: YES") == Label::Sarcastic);
  // Substrings of other words do not count.
  CHECK(parse_verdict("NOTHING is YESTERDAY, so NO") == Label::NotSarcastic);
  CHECK_THROWS_MATCHES(parse_verdict("None of the above; nobody knows"), Error, code_is(Errc::VerdictNotFound));
  CHECK_THROWS_MATCHES(parse_verdict(""), Error, code_is(Errc::VerdictNotFound));
}

TEST_CASE("verdict ignores surrounding whitespace", "[prompts][verdict][property]") {
  std::mt19937 rng(77);
  const std::vector<std::string> bodies{"Reflection done.\nFinal decision: YES", "So the answer is NO",
                                        "yes and then no and then YES", "NO"};
  const std::vector<std::string> pads{"", " ", "\n", "\t", "\r\n", "  \n\n "};
  for (int t = 0; t < 200; ++t) {
    const auto& body = bodies[rng() % bodies.size()];
    const auto padded = pads[rng() % pads.size()] + body + pads[rng() % pads.size()];
    CHECK(parse_verdict(padded) == parse_verdict(body));
  }
}

TEST_CASE("pipeline call sequences", "[pipeline]") {
  testing::ScriptedBackend backend(testing::fake_model_script());
  Gateway gateway(backend);
  const TemplateCatalog catalog;
  const HeuristicTagger tagger;
  ListSearch search;
  WordInfoCache cache;
  PipelineDeps deps{gateway, catalog, &tagger, {&search, nullptr, &cache, {}}, 2, {}};
  const Sample walmart{"semeval:1", "I love Walmart on a Monday", Label::Sarcastic, DatasetKind::SemEval2018T3,
                       LanguageTag::English};

  SECTION("baseline") {
    const auto trace = run_pipeline(walmart, PipelineVariant::PMP, deps);
    CHECK(purposes(backend.requests()) == std::vector<Purpose>{Purpose::P1, Purpose::P2});
    CHECK_FALSE(trace.keywords);
    CHECK(trace.word_infos.empty());
    CHECK(trace.verdict == Label::Sarcastic);
    CHECK(trace.exchanges.size() == 2);
    CHECK(backend.requests()[0].system() == catalog.english.p1_system);
    CHECK(backend.requests()[1].system() == catalog.english.p2_system);
    CHECK(backend.requests()[1].user() == trace.a1);
  }
  SECTION("token tagging with model definitions") {
    const auto trace = run_pipeline(walmart, PipelineVariant::PMPWL, deps);
    CHECK(purposes(backend.requests()) ==
          std::vector<Purpose>{Purpose::DefineWord, Purpose::DefineWord, Purpose::P1, Purpose::P2});
    REQUIRE(trace.keywords);
    CHECK(trace.keywords->keywords == std::vector<std::string>{"Walmart", "Monday"});
    REQUIRE(trace.word_infos.size() == 2);
    CHECK(trace.word_infos[0].source == WordInfoSource::LLMOnly);
    CHECK(backend.requests()[2].user().find("Entity facts:\nWalmart is") != std::string::npos);

    // Definitions now come from the cache.
    const auto again = run_pipeline(walmart, PipelineVariant::PMPWL_FS, deps);
    const auto all = purposes(backend.requests());
    CHECK(std::vector<Purpose>(all.begin() + 4, all.end()) == std::vector<Purpose>{Purpose::P1, Purpose::P2});
    CHECK(backend.requests().back().system().find("Here are example reflections:") != std::string::npos);
    CHECK(again.word_infos == trace.word_infos);
  }
  SECTION("model keywords with web definitions") {
    const auto trace = run_pipeline(walmart, PipelineVariant::PMPWG_FS, deps);
    CHECK(purposes(backend.requests()) ==
          std::vector<Purpose>{Purpose::KeywordIdentify, Purpose::KeywordClean, Purpose::RefineChunks, Purpose::P1,
                               Purpose::P2});
    CHECK(search.calls == 1);
    REQUIRE(trace.word_infos.size() == 1);
    CHECK(trace.word_infos[0].keyword == "Walmart");
    CHECK(trace.word_infos[0].source == WordInfoSource::GoogleSearch);
    REQUIRE(trace.word_infos[0].evidence);
    CHECK(trace.word_infos[0].evidence->at(0).url == "https://encyclopedia.test/Walmart");
    CHECK(text::sentence_count(trace.word_infos[0].definition) <= 2);
  }
  SECTION("Indonesian samples use Indonesian templates") {
    const auto trace = run_pipeline(kIndonesian, PipelineVariant::PMPWG, deps);
    CHECK(backend.requests().front().system() == catalog.indonesian.keyword_identify);
    CHECK(backend.requests().back().system() == catalog.indonesian.p2_system);
    CHECK(trace.verdict == Label::Sarcastic);
  }
}

TEST_CASE("no keywords means the baseline prompts", "[pipeline][property]") {
  const Sample quiet{"semeval:2", "the bus was late again today", Label::NotSarcastic, DatasetKind::SemEval2018T3,
                     LanguageTag::English};
  const TemplateCatalog catalog;
  const HeuristicTagger tagger;
  ListSearch search;
  std::vector<ChatRequest> baseline;
  {
    testing::ScriptedBackend backend(testing::fake_model_script());
    Gateway gateway(backend);
    PipelineDeps deps{gateway, catalog, &tagger, {&search, nullptr, nullptr, {}}, 2, {}};
    run_pipeline(quiet, PipelineVariant::PMP, deps);
    baseline = backend.requests();
  }
  for (auto v : {PipelineVariant::PMPWL, PipelineVariant::PMPWG}) {
    testing::ScriptedBackend backend(testing::fake_model_script());
    Gateway gateway(backend);
    PipelineDeps deps{gateway, catalog, &tagger, {&search, nullptr, nullptr, {}}, 2, {}};
    const auto trace = run_pipeline(quiet, v, deps);
    REQUIRE(trace.keywords);
    CHECK(trace.keywords->keywords.empty());
    const auto requests = backend.requests();
    REQUIRE(requests.size() >= 2);
    const std::vector<ChatRequest> tail(requests.end() - 2, requests.end());
    CHECK(tail[0].messages == baseline[0].messages);
    CHECK(tail[1].messages == baseline[1].messages);
  }
  CHECK(search.calls == 0);
}

TEST_CASE("per-sample failures skip the sample", "[pipeline]") {
  const TemplateCatalog catalog;
  const HeuristicTagger tagger;
  const Sample s{"semeval:3", "Walmart again", Label::Sarcastic, DatasetKind::SemEval2018T3, LanguageTag::English};

  SECTION("no verdict") {
    testing::ScriptedBackend backend([](const ChatRequest& r) -> std::string {
      return r.purpose == Purpose::P1 ? "hmm" : "I cannot tell.";
    });
    Gateway gateway(backend);
    PipelineDeps deps{gateway, catalog, &tagger, {}, 2, {}};
    try {
      run_pipeline(s, PipelineVariant::PMP, deps);
      FAIL("expected a skip");
    } catch (const SampleSkipped& e) {
      CHECK(e.cause() == Errc::VerdictNotFound);
      CHECK(e.exchanges().size() == 2);
    }
  }
  SECTION("search quota") {
    testing::ScriptedBackend backend(testing::fake_model_script());
    Gateway gateway(backend);
    QuotaSearch quota;
    PipelineDeps deps{gateway, catalog, &tagger, {&quota, nullptr, nullptr, {}}, 2, {}};
    try {
      run_pipeline(s, PipelineVariant::PMPWG, deps);
      FAIL("expected a skip");
    } catch (const SampleSkipped& e) {
      CHECK(e.cause() == Errc::SearchQuota);
      REQUIRE(e.keywords());
      CHECK(e.keywords()->keywords == std::vector<std::string>{"Walmart"});
    }
  }
  SECTION("malformed keyword list") {
    testing::ScriptedBackend backend([](const ChatRequest& r) -> std::string {
      if (r.purpose == Purpose::KeywordClean) return "I think the words that are unknown to me are these ones here";
      return "Unknown: Walmart.";
    });
    Gateway gateway(backend);
    ListSearch search;
    PipelineDeps deps{gateway, catalog, &tagger, {&search, nullptr, nullptr, {}}, 2, {}};
    CHECK_THROWS_AS(run_pipeline(s, PipelineVariant::PMPWG, deps), SampleSkipped);
  }
  SECTION("configuration errors are not skips") {
    testing::ScriptedBackend backend(testing::fake_model_script());
    Gateway gateway(backend);
    PipelineDeps no_tagger{gateway, catalog, nullptr, {}, 2, {}};
    CHECK_THROWS_MATCHES(run_pipeline(s, PipelineVariant::PMPWL, no_tagger), Error, code_is(Errc::Config));
    PipelineDeps no_search{gateway, catalog, &tagger, {}, 2, {}};
    CHECK_THROWS_MATCHES(run_pipeline(s, PipelineVariant::PMPWG, no_search), Error, code_is(Errc::Config));
    CHECK(backend.requests().empty());
  }
}
