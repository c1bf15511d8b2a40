#pragma once

// Confusion counts and macro-averaged metrics. Sarcastic is the positive
// class; skipped samples are counted but never scored.

#include "json.hpp"

#include "pmprag/core.hpp"
#include "pmprag/error.hpp"

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pmprag {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;
  std::uint64_t skipped = 0;

  [[nodiscard]] std::uint64_t scored() const noexcept { return tp + fp + fn + tn; }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// A prediction; nullopt means the sample was skipped.
struct Prediction {
  std::string sample_id;
  std::optional<Label> label;
};

inline ConfusionMatrix confusion(const std::vector<Prediction>& preds, const std::map<std::string, Label>& golds) {
  ConfusionMatrix cm;
  std::unordered_set<std::string> seen;
  for (const auto& p : preds) {
    const auto gold = golds.find(p.sample_id);
    if (gold == golds.end()) fail(Errc::UnknownSampleId, "no gold label for " + p.sample_id);
    if (!seen.insert(p.sample_id).second) fail(Errc::DuplicatePrediction, "duplicate prediction for " + p.sample_id);
    if (!p.label) {
      ++cm.skipped;
      continue;
    }
    const bool gold_pos = gold->second == Label::Sarcastic;
    const bool pred_pos = *p.label == Label::Sarcastic;
    if (gold_pos && pred_pos) ++cm.tp;
    else if (gold_pos) ++cm.fn;
    else if (pred_pos) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision_macro = 0.0;
  double recall_macro = 0.0;
  double f1_macro = 0.0;
  std::map<Label, ClassMetrics> per_class;
  std::uint64_t n_scored = 0;
  std::uint64_t n_skipped = 0;
  ConfusionMatrix matrix;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

namespace detail {

inline double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

inline ClassMetrics class_metrics(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  const double denom = m.precision + m.recall;
  m.f1 = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
  return m;
}

} // namespace detail

inline MetricsReport macro_metrics(const ConfusionMatrix& cm) {
  const auto n = cm.scored();
  if (n == 0) fail(Errc::EmptyEvaluation, "no scored samples (" + std::to_string(cm.skipped) + " skipped)");
  MetricsReport r;
  r.matrix = cm;
  r.n_scored = n;
  r.n_skipped = cm.skipped;
  const auto pos = detail::class_metrics(cm.tp, cm.fp, cm.fn);
  const auto neg = detail::class_metrics(cm.tn, cm.fn, cm.fp);
  r.per_class[Label::Sarcastic] = pos;
  r.per_class[Label::NotSarcastic] = neg;
  r.accuracy = detail::ratio(cm.tp + cm.tn, n);
  r.precision_macro = (pos.precision + neg.precision) / 2.0;
  r.recall_macro = (pos.recall + neg.recall) / 2.0;
  r.f1_macro = (pos.f1 + neg.f1) / 2.0;
  return r;
}

inline nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto label : {Label::Sarcastic, Label::NotSarcastic}) {
    const auto& m = r.per_class.at(label);
    per_class[std::string(to_string(label))] = {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  }
  return {{"accuracy", r.accuracy},
          {"precision_macro", r.precision_macro},
          {"recall_macro", r.recall_macro},
          {"f1_macro", r.f1_macro},
          {"per_class", per_class},
          {"n_scored", r.n_scored},
          {"n_skipped", r.n_skipped},
          {"confusion",
           {{"tp", r.matrix.tp}, {"fp", r.matrix.fp}, {"fn", r.matrix.fn}, {"tn", r.matrix.tn}}}};
}

inline MetricsReport metrics_report_from_json(const nlohmann::json& j) {
  MetricsReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.precision_macro = j.at("precision_macro").get<double>();
  r.recall_macro = j.at("recall_macro").get<double>();
  r.f1_macro = j.at("f1_macro").get<double>();
  for (const auto label : {Label::Sarcastic, Label::NotSarcastic}) {
    const auto& m = j.at("per_class").at(std::string(to_string(label)));
    r.per_class[label] = {m.at("precision").get<double>(), m.at("recall").get<double>(), m.at("f1").get<double>()};
  }
  r.n_scored = j.at("n_scored").get<std::uint64_t>();
  r.n_skipped = j.at("n_skipped").get<std::uint64_t>();
  const auto& c = j.at("confusion");
  r.matrix = {c.at("tp").get<std::uint64_t>(), c.at("fp").get<std::uint64_t>(), c.at("fn").get<std::uint64_t>(),
              c.at("tn").get<std::uint64_t>(), r.n_skipped};
  return r;
}

/// Fixed-width plain-text rendering.
inline std::string render_table(const MetricsReport& r, const std::string& title = {}) {
  std::string out;
  char line[160];
  if (!title.empty()) out += title + "\n";
  std::snprintf(line, sizeof line, "%-14s %10s %10s %10s\n", "class", "precision", "recall", "f1");
  out += line;
  for (const auto label : {Label::Sarcastic, Label::NotSarcastic}) {
    const auto& m = r.per_class.at(label);
    std::snprintf(line, sizeof line, "%-14s %10.4f %10.4f %10.4f\n", std::string(to_string(label)).c_str(),
                  m.precision, m.recall, m.f1);
    out += line;
  }
  std::snprintf(line, sizeof line, "%-14s %10.4f %10.4f %10.4f\n", "macro", r.precision_macro, r.recall_macro,
                r.f1_macro);
  out += line;
  std::snprintf(line, sizeof line, "%-14s %10.4f\n", "accuracy", r.accuracy);
  out += line;
  std::snprintf(line, sizeof line, "%-14s %10llu\n%-14s %10llu\n", "scored",
                static_cast<unsigned long long>(r.n_scored), "skipped", static_cast<unsigned long long>(r.n_skipped));
  out += line;
  std::snprintf(line, sizeof line, "%-14s tp=%llu fp=%llu fn=%llu tn=%llu\n", "confusion",
                static_cast<unsigned long long>(r.matrix.tp), static_cast<unsigned long long>(r.matrix.fp),
                static_cast<unsigned long long>(r.matrix.fn), static_cast<unsigned long long>(r.matrix.tn));
  out += line;
  return out;
}

} // namespace pmprag
