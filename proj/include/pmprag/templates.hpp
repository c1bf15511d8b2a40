#pragma once

// Prompt templates per language. The built-in copies below are the
// reference text; templates/<lang>/<name>.txt on disk must match them
// byte for byte (tests enforce this) and can be loaded at startup instead.

#include "pmprag/core.hpp"
#include "pmprag/error.hpp"
#include "pmprag/fs_util.hpp"

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pmprag {

struct PromptTemplateSet {
  LanguageTag language = LanguageTag::English;
  std::string p1_system;
  std::string p2_system;
  std::string wordinfo_user_header;
  std::string wordinfo_system_suffix;
  std::string fewshot_header_and_examples;
  std::string keyword_identify;
  std::string keyword_csv;
  // Definition prompts. Not part of the published prompt set; authored here.
  std::string define_word;
  std::string refine_chunks;
  std::string refine_reask;

  friend bool operator==(const PromptTemplateSet&, const PromptTemplateSet&) = default;

  /// "<keyword> is <definition>" / "<keyword> adalah <definition>".
  [[nodiscard]] std::string_view definition_connective() const noexcept {
    return language == LanguageTag::English ? "is" : "adalah";
  }
};

inline constexpr std::string_view kTemplateFileNames[] = {
    "p1_system",     "p2_system",   "wordinfo_user_header", "wordinfo_system_suffix", "fewshot",
    "keyword_identify", "keyword_csv", "define_word",       "refine_chunks",          "refine_reask"};

inline std::string* template_field(PromptTemplateSet& set, std::string_view name) {
  if (name == "p1_system") return &set.p1_system;
  if (name == "p2_system") return &set.p2_system;
  if (name == "wordinfo_user_header") return &set.wordinfo_user_header;
  if (name == "wordinfo_system_suffix") return &set.wordinfo_system_suffix;
  if (name == "fewshot") return &set.fewshot_header_and_examples;
  if (name == "keyword_identify") return &set.keyword_identify;
  if (name == "keyword_csv") return &set.keyword_csv;
  if (name == "define_word") return &set.define_word;
  if (name == "refine_chunks") return &set.refine_chunks;
  if (name == "refine_reask") return &set.refine_reask;
  return nullptr;
}

// clang-format off
inline const PromptTemplateSet& builtin_english_templates() {
  static const PromptTemplateSet set{
      .language = LanguageTag::English,
      .p1_system = R"pmp(You will be given a text, and will analyze the statement. Repeat back the statement to analyze. Then, analyze the following:
- What does the speaker imply about the situation with their statement?
- What does the speaker think about the situation?
- Are what the speaker implies and what the speaker thinks saying the same thing?
Finally, decide if the speaker is pretending to have a certain attitude toward the conversation.)pmp",
      .p2_system = R"pmp(You will be given a piece of movie dialogue, a statement marked in brackets, and a preliminary analysis on the marked statement. Summarize the preliminary analysis and the given dialogue. Decide whether the statement is sarcastic or not by first analyzing the following:
The Implicature – What is implied in the conversation beyond the literal meaning?
The Presuppositions – What information in the conversation is taken for granted?
The Intent of the Speaker – What do the speaker(s) hope to achieve with their statement and who are the speakers?
The Polarity – Does the last sentence have a positive or negative tone?
Pretense – Is there pretense in the speaker’s attitude?
Meaning – What is the difference between the literal and implied meaning of the statement?
Reflect on the preliminary analysis and what should change, then decide if the statement is sarcastic.)pmp",
      .wordinfo_user_header = R"pmp(Entity facts:)pmp",
      .wordinfo_system_suffix = R"pmp(There are also some entity facts from the sentence that you can use. Only use them if directly relevant, do NOT invent new facts.)pmp",
      .fewshot_header_and_examples = R"pmp(Here are example reflections:
Tweet: Great — the power went out during my online final. Perfect timing
Implicature: The literal praise ("Great", "Perfect timing") contradicts the negative situation (power outage during an important exam); the speaker likely means the opposite.
Presuppositions: It is assumed the outage disrupted the exam and caused stress.
Speaker intent: To express frustration and criticize the situation indirectly, not to genuinely praise it.
Polarity: Literal wording is positive, but implied polarity is negative.
Pretense: There is clear pretense — the speaker is pretending to praise while actually conveying annoyance.
Meaning: The literal and implied meanings diverge (literal praise vs. implied complaint), indicating irony.
Final reflection: Strong contrast between wording and situation supports a sarcastic reading.
Final decision: YES
Tweet: Finally finished my thesis defense today. So relieved and grateful to my advisor
Implicature: The literal statement matches the situation (a finished defense); nothing beyond relief and gratitude is implied.
Presuppositions: It is assumed the defense was demanding and is now over.
Speaker intent: To share genuine relief and thank the advisor.
Polarity: Literal wording is positive, and implied polarity is also positive.
Pretense: There is no pretense; the stated attitude fits the situation.
Meaning: The literal and implied meanings are the same.
Final reflection: Wording and situation agree, so nothing points to a sarcastic reading.
Final decision: NO)pmp",
      .keyword_identify = R"pmp(You will be given a text. Your task is to identify words from the text that you do not understand.)pmp",
      .keyword_csv = R"pmp(You will be given a text containing a list of unknown words. Your task is to separate the words into comma-separated values (CSV). If there are no unknown words, answer with 'NO UNKNOWN'
example output:
first,second,third)pmp",
      .define_word = R"pmp(You will be given a word or phrase taken from a social media text. Explain what it means in one or two sentences, using only what you already know. Answer with the definition only.)pmp",
      .refine_chunks = R"pmp(You will be given a keyword and several text passages retrieved from the web. Summarize the passages, ignore content that is not about the keyword, and extract its key meaning. Answer with a short definition of the keyword in one or two sentences, and nothing else.)pmp",
      .refine_reask = R"pmp(That is too long. Rewrite the definition in at most two sentences.)pmp",
  };
  return set;
}

inline const PromptTemplateSet& builtin_indonesian_templates() {
  static const PromptTemplateSet set{
      .language = LanguageTag::Indonesian,
      .p1_system = R"pmp(Kamu akan diberikan sebuah teks dan diminta untuk menganalisis pernyataan di dalamnya. Ulangi kembali pernyataan yang akan dianalisis. Kemudian, analisis hal-hal berikut:
- Apa yang diimplikasikan oleh pembicara tentang situasi melalui pernyataannya?
- Apa yang dipikirkan pembicara tentang situasi tersebut?
- Apakah yang diimplikasikan dan yang dipikirkan pembicara menyampaikan hal yang sama?
Terakhir, tentukan apakah pembicara berpura-pura memiliki sikap tertentu terhadap percakapan tersebut.)pmp",
      .p2_system = R"pmp(Kamu akan diberikan sebuah pernyataan dan analisis awal terhadap pernyataan tersebut. Ringkas analisis awal tersebut. Tentukan apakah pernyataan tersebut bersifat sarkastik atau tidak dengan terlebih dahulu menganalisis hal-hal berikut:
Implikatur – Apa yang tersirat dalam percakapan di luar makna literal?
Presuposisi – Informasi apa dalam percakapan yang dianggap sudah diketahui?
Niat pembicara – Apa yang ingin dicapai pembicara dengan pernyataannya dan siapa pembicaranya?
Polaritas – Apakah kalimat terakhir bernada positif atau negatif?
Kepura-puraan – Apakah ada kepura-puraan dalam sikap pembicara?
Makna – Apa perbedaan antara makna literal dan makna tersirat dari pernyataan tersebut?
Renungkan analisis awal dan apa yang perlu diubah, lalu tentukan apakah pernyataan tersebut bersifat sarkastik.)pmp",
      .wordinfo_user_header = R"pmp(Definisi kata-kata penting:)pmp",
      .wordinfo_system_suffix = R"pmp(Selain itu, ada disediakan beberapa fakta entitas dari kalimat yang dapat Anda gunakan. Hanya gunakan fakta tersebut jika langsung relevan, JANGAN menciptakan fakta baru.)pmp",
      .fewshot_header_and_examples = R"pmp(Tweet: Bagus banget, listrik mati pas lagi final online. Sumpah rejeki beneran
Implikatur: Kalimat tampak memuji ("Bagus banget") tetapi konteks (listrik mati saat final) jelas negatif; pembicara menyindir situasi.
Presuposisi: Diasumsikan listrik mati dan menimbulkan masalah pada ujian/online.
Niat pembicara: Mengungkapkan kekesalan dengan ironi, bukan benar-benar memuji.
Polaritas: Literal positif, implisit negatif.
Kepura-puraan: Ada pretense — pura-pura menyatakan kejelekan sebagai "bagus".
Makna: Perbedaan jelas antara makna literal (pujian) dan tersirat (keluhan).
Refleksi akhir: Kontras kata vs konteks kuat; indikator sarkastik jelas.
Keputusan akhir: YES
Tweet: Alhamdulillah akhirnya sidang skripsi selesai juga. Lega banget, makasih buat dosen pembimbing
Implikatur: Kalimat literal sesuai dengan situasi (sidang sudah selesai); tidak ada makna tersirat selain rasa lega dan terima kasih.
Presuposisi: Diasumsikan sidang skripsi melelahkan dan sekarang sudah selesai.
Niat pembicara: Berbagi rasa lega dan berterima kasih dengan tulus.
Polaritas: Literal positif, implisit juga positif.
Kepura-puraan: Tidak ada kepura-puraan; sikap pembicara sesuai dengan situasi.
Makna: Makna literal dan tersirat sama.
Refleksi akhir: Kata-kata dan konteks selaras; tidak ada indikator sarkastik.
Keputusan akhir: NO)pmp",
      .keyword_identify = R"pmp(Anda akan diberikan sebuah teks. Tugas anda adalah menyebutkan kata-kata yang anda tidak mengerti dari teks tersebut.)pmp",
      .keyword_csv = R"pmp(Anda akan diberikan teks berisi penjelasan kata-kata yang tidak dimengerti. Tugas anda adalah memisahkan kata-kata tersebut menjadi daftar yang dipisahkan koma (CSV). Kalau tidak ada kata-kata yang tidak dimengerti, jawab dengan 'NO UNKNOWN'
contoh output:
pertama,kedua,ketiga)pmp",
      .define_word = R"pmp(Anda akan diberikan sebuah kata atau frasa dari teks media sosial. Jelaskan artinya dalam satu atau dua kalimat, hanya berdasarkan pengetahuan yang anda miliki. Jawab hanya dengan definisinya.)pmp",
      .refine_chunks = R"pmp(Anda akan diberikan sebuah kata kunci dan beberapa potongan teks yang diambil dari web. Ringkas potongan teks tersebut, abaikan isi yang tidak berkaitan dengan kata kunci, dan ambil makna utamanya. Jawab dengan definisi singkat kata kunci tersebut dalam satu atau dua kalimat, tanpa tambahan lain.)pmp",
      .refine_reask = R"pmp(Itu terlalu panjang. Tulis ulang definisinya dalam paling banyak dua kalimat.)pmp",
  };
  return set;
}
// clang-format on

inline const PromptTemplateSet& builtin_templates(LanguageTag language) {
  return language == LanguageTag::English ? builtin_english_templates() : builtin_indonesian_templates();
}

/// Template file body: "## " comment lines dropped, one trailing newline
/// removed.
inline std::string clean_template_text(std::string_view raw) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    auto nl = raw.find('\n', pos);
    const bool last = nl == std::string_view::npos;
    auto line = raw.substr(pos, last ? std::string_view::npos : nl - pos);
    if (!line.starts_with("## ")) {
      out.append(line);
      if (!last) out.push_back('\n');
    }
    if (last) break;
    pos = nl + 1;
  }
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

inline PromptTemplateSet load_template_set(const std::filesystem::path& root, LanguageTag language) {
  PromptTemplateSet set;
  set.language = language;
  const auto dir = root / std::string(to_string(language));
  for (auto name : kTemplateFileNames) {
    const auto path = dir / (std::string(name) + ".txt");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) fail(Errc::Config, "missing template " + path.string());
    *template_field(set, name) = clean_template_text(read_file(path));
  }
  return set;
}

/// k worked reflections appended to the reflection call's system prompt.
struct FewShotBlock {
  std::string header; // may be empty
  std::vector<std::string> examples;

  [[nodiscard]] std::size_t k() const noexcept { return examples.size(); }

  [[nodiscard]] std::string render() const {
    std::string out = header;
    for (const auto& ex : examples) {
      if (!out.empty()) out.push_back('\n');
      out += ex;
    }
    return out;
  }

  [[nodiscard]] FewShotBlock take(std::size_t k) const {
    if (k > examples.size()) fail(Errc::InvalidArgument, "few-shot block has fewer than k examples");
    return {header, {examples.begin(), examples.begin() + static_cast<std::ptrdiff_t>(k)}};
  }
};

inline bool ends_with_decision(std::string_view example) {
  for (std::string_view prefix : {"Final decision: ", "Keputusan akhir: "}) {
    const auto nl = example.rfind('\n');
    auto last = nl == std::string_view::npos ? example : example.substr(nl + 1);
    if (last.starts_with(prefix)) {
      last.remove_prefix(prefix.size());
      if (last == "YES" || last == "NO") return true;
    }
  }
  return false;
}

/// Splits the few-shot template into its header and examples. Each example
/// starts at a "Tweet:" line and must end with a final-decision line.
inline FewShotBlock parse_few_shot(std::string_view text) {
  FewShotBlock block;
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header_lines;
  while (std::getline(in, line)) {
    if (line.starts_with("Tweet:")) {
      block.examples.push_back(line);
    } else if (block.examples.empty()) {
      header_lines.push_back(line);
    } else {
      block.examples.back() += "\n" + line;
    }
  }
  for (std::size_t i = 0; i < header_lines.size(); ++i) block.header += (i ? "\n" : "") + header_lines[i];
  for (const auto& ex : block.examples)
    if (!ends_with_decision(ex)) fail(Errc::Format, "few-shot example lacks a final decision line");
  return block;
}

inline FewShotBlock few_shot_block(const PromptTemplateSet& templates, std::size_t k = 2) {
  return parse_few_shot(templates.fewshot_header_and_examples).take(k);
}

/// Templates for both languages; the pipeline picks by sample language.
struct TemplateCatalog {
  PromptTemplateSet english = builtin_english_templates();
  PromptTemplateSet indonesian = builtin_indonesian_templates();

  [[nodiscard]] const PromptTemplateSet& for_language(LanguageTag language) const noexcept {
    return language == LanguageTag::English ? english : indonesian;
  }

  static TemplateCatalog load(const std::filesystem::path& root) {
    return {load_template_set(root, LanguageTag::English), load_template_set(root, LanguageTag::Indonesian)};
  }
};

} // namespace pmprag
