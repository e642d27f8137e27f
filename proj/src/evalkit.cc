// Copyright 2026 The radex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radex/evalkit.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "io_util.h"
#include "json.hpp"
#include "radex/error.h"
#include "radex/textprep.h"

namespace radex {

using json = nlohmann::json;

const std::vector<std::string>& PredictionSet::TermsFor(const std::string& id) const {
  static const std::vector<std::string> kEmpty;
  auto it = predictions.find(id);
  return it == predictions.end() ? kEmpty : it->second;
}

PredictionSet ReadPredictionsJsonl(std::istream& in, std::string system_name) {
  PredictionSet preds;
  preds.system_name = std::move(system_name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (internal::Trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParseError, e.what(), line_no);
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string()) {
      throw Error(ErrorKind::kParseError, "missing string field 'id'", line_no);
    }
    std::string id = record["id"].get<std::string>();
    if (id.empty()) throw Error(ErrorKind::kParseError, "empty id", line_no);
    std::vector<std::string> terms;
    if (auto it = record.find("terms"); it != record.end()) {
      if (!it->is_array()) {
        throw Error(ErrorKind::kParseError, "terms must be an array", line_no);
      }
      for (const json& t : *it) {
        if (!t.is_string()) {
          throw Error(ErrorKind::kParseError, "terms must be strings", line_no);
        }
        terms.push_back(t.get<std::string>());
      }
    }
    if (!preds.predictions.emplace(id, std::move(terms)).second) {
      throw Error(ErrorKind::kDuplicateId, "duplicate prediction id '" + id + "'",
                  line_no);
    }
  }
  return preds;
}

PredictionSet LoadPredictionsJsonl(const std::filesystem::path& path,
                                   std::string system_name) {
  std::ifstream in = internal::OpenInput(path);
  if (system_name.empty()) system_name = path.stem().string();
  return ReadPredictionsJsonl(in, std::move(system_name));
}

void WritePredictionsJsonl(const PredictionSet& preds, std::ostream& out) {
  for (const auto& [id, terms] : preds.predictions) {
    json record = {{"id", id}, {"terms", terms}};
    out << record.dump() << '\n';
  }
}

void SavePredictionsJsonl(const PredictionSet& preds,
                          const std::filesystem::path& path) {
  std::ofstream out = internal::OpenOutput(path);
  WritePredictionsJsonl(preds, out);
}

std::vector<std::string> ApplyFallback(std::vector<std::string> terms) {
  if (terms.empty()) terms.emplace_back(kFallbackWord);
  return terms;
}

std::vector<std::string> ScoringWords(const std::vector<std::string>& terms) {
  std::vector<std::string> words = NormalizeTerms(ApplyFallback(terms)).words;
  // Terms made only of punctuation normalize to nothing.
  if (words.empty()) words.emplace_back(kFallbackWord);
  return words;
}

std::string JoinAnnotation(const std::vector<std::string>& terms) {
  std::string out;
  for (const std::string& w : ScoringWords(terms)) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  out.push_back('.');
  return out;
}

namespace {

std::map<std::string, std::size_t> NgramCounts(const std::vector<std::string>& words,
                                               std::size_t k) {
  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i + k <= words.size(); ++i) {
    std::string key;
    for (std::size_t j = 0; j < k; ++j) {
      key += words[i + j];
      key.push_back('\x1f');
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

double BleuN(const std::vector<std::string>& candidate,
             const std::vector<std::string>& reference, int n) {
  if (n < 1 || n > 4) {
    throw Error(ErrorKind::kInvalidOrder,
                "BLEU order must be in 1..4, got " + std::to_string(n));
  }
  if (reference.empty()) throw Error(ErrorKind::kEmptyReference, "empty reference");
  if (candidate.empty()) return 0.0;

  double log_sum = 0.0;
  for (int k = 1; k <= n; ++k) {
    auto ku = static_cast<std::size_t>(k);
    if (candidate.size() < ku) return 0.0;
    std::map<std::string, std::size_t> cand = NgramCounts(candidate, ku);
    std::map<std::string, std::size_t> ref = NgramCounts(reference, ku);
    std::size_t clipped = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) clipped += std::min(count, it->second);
    }
    if (clipped == 0) return 0.0;
    double total = static_cast<double>(candidate.size() - ku + 1);
    log_sum += std::log(static_cast<double>(clipped) / total);
  }
  double c = static_cast<double>(candidate.size());
  double r = static_cast<double>(reference.size());
  double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum / n);
}

namespace {

void RequireGold(const Corpus& gold) {
  if (gold.empty()) throw Error(ErrorKind::kEmptyGold, "gold corpus is empty");
}

}  // namespace

double CorpusBleu(const PredictionSet& preds, const Corpus& gold, int n) {
  RequireGold(gold);
  double sum = 0.0;
  for (const Report& r : gold) {
    sum += BleuN(ScoringWords(preds.TermsFor(r.id)), ScoringWords(r.mesh_terms), n);
  }
  return sum / static_cast<double>(gold.size());
}

double PrfCounts::Precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double PrfCounts::Recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double PrfCounts::F1() const {
  double p = Precision(), r = Recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

PrfCounts MicroPrf(const PredictionSet& preds, const Corpus& gold) {
  RequireGold(gold);
  PrfCounts total;
  for (const Report& r : gold) {
    auto cand = NormalizeTerms(ScoringWords(preds.TermsFor(r.id))).counts;
    auto ref = NormalizeTerms(ScoringWords(r.mesh_terms)).counts;
    for (const auto& [word, c] : cand) {
      auto it = ref.find(word);
      std::size_t g = it == ref.end() ? 0 : it->second;
      std::size_t overlap = std::min(c, g);
      total.tp += overlap;
      total.fp += c - overlap;
    }
    for (const auto& [word, g] : ref) {
      auto it = cand.find(word);
      std::size_t c = it == cand.end() ? 0 : it->second;
      total.fn += g - std::min(c, g);
    }
  }
  return total;
}

std::vector<std::pair<std::string, PrfCounts>> PerPathologyPrf(
    const PredictionSet& preds, const Corpus& gold,
    const std::vector<std::string>& pathologies) {
  if (pathologies.empty()) {
    throw Error(ErrorKind::kEmptyPathologyList, "no pathologies to score");
  }
  RequireGold(gold);
  std::vector<std::pair<std::string, PrfCounts>> table;
  std::set<std::string> seen;
  for (const std::string& p : pathologies) {
    if (seen.insert(p).second) table.emplace_back(p, PrfCounts{});
  }
  for (const Report& r : gold) {
    std::vector<std::string> cand_words = ScoringWords(preds.TermsFor(r.id));
    std::vector<std::string> ref_words = ScoringWords(r.mesh_terms);
    std::set<std::string> cand(cand_words.begin(), cand_words.end());
    std::set<std::string> ref(ref_words.begin(), ref_words.end());
    for (auto& [pathology, counts] : table) {
      bool predicted = cand.count(pathology) > 0;
      bool actual = ref.count(pathology) > 0;
      if (predicted && actual) ++counts.tp;
      if (predicted && !actual) ++counts.fp;
      if (!predicted && actual) ++counts.fn;
    }
  }
  return table;
}

const std::vector<std::string>& BenchmarkPathologies() {
  static const std::vector<std::string> kList = {
      "opacity",     "aorta",         "fractures",    "osteophyte",
      "scoliosis",   "density",       "pneumothorax", "cardiomegaly",
      "emphysema",   "arthritis",     "granuloma",    "kyphosis",
      "pneumonia",   "spondylosis",   "deformity",    "hypertension",
      "consolidation", "mass",        "thickening",   "hernia",
      "lucency",     "consolidation", "bronchiectasis"};
  return kList;
}

std::vector<std::string> DefaultPathologies() {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string& p : BenchmarkPathologies()) {
    if (seen.insert(p).second) out.push_back(p);
  }
  return out;
}

std::vector<std::string> LoadPathologies(const std::string& file_or_default) {
  if (file_or_default == "default23") return DefaultPathologies();
  std::ifstream in = internal::OpenInput(file_or_default);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::vector<Token> tokens = Tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.size() > 1) {
      throw Error(ErrorKind::kParseError, "pathology must be a single word", line_no);
    }
    out.push_back(tokens.front().norm);
  }
  if (out.empty()) {
    throw Error(ErrorKind::kEmptyPathologyList, "no pathologies in " + file_or_default);
  }
  return out;
}

EvalReport Evaluate(const PredictionSet& preds, const Corpus& gold,
                    const std::vector<std::string>& pathologies) {
  EvalReport report;
  report.system_name = preds.system_name;
  report.n_reports = gold.size();
  for (int n = 1; n <= 4; ++n) report.bleu[n - 1] = CorpusBleu(preds, gold, n);
  report.overall = MicroPrf(preds, gold);
  report.per_pathology = PerPathologyPrf(preds, gold, pathologies);
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string CsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string MarkdownField(const std::string& field) {
  std::string out;
  for (char c : field) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out.push_back(' ');
    else out.push_back(c);
  }
  return out;
}

struct Table {
  std::string title;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void Emit(const Table& table, TableFormat format, std::ostream& out) {
  if (format == TableFormat::kCsv) {
    out << CsvField(table.title) << "\r\n";
    auto line = [&](const std::vector<std::string>& fields) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        out << CsvField(fields[i]);
      }
      out << "\r\n";
    };
    line(table.header);
    for (const auto& row : table.rows) line(row);
    out << "\r\n";
    return;
  }
  out << "### " << MarkdownField(table.title) << "\n\n|";
  for (const std::string& h : table.header) out << ' ' << MarkdownField(h) << " |";
  out << "\n|";
  for (std::size_t i = 0; i < table.header.size(); ++i) out << (i == 0 ? "---|" : "---:|");
  out << '\n';
  for (const auto& row : table.rows) {
    out << '|';
    for (const std::string& f : row) out << ' ' << MarkdownField(f) << " |";
    out << '\n';
  }
  out << '\n';
}

std::vector<std::string> PrfRow(const std::string& system, const PrfCounts& c) {
  return {system,
          Percent(c.Precision()),
          Percent(c.Recall()),
          Percent(c.F1()),
          std::to_string(c.tp),
          std::to_string(c.fp),
          std::to_string(c.fn)};
}

const std::vector<std::string> kPrfHeader = {"System", "Precision (%)", "Recall (%)",
                                             "F1 (%)", "TP", "FP", "FN"};

}  // namespace

std::string RenderTables(const std::vector<EvalReport>& reports, TableFormat format) {
  if (reports.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "nothing to render");
  }
  std::ostringstream out;

  Table bleu{"BLEU",
             {"System", "BLEU-1 (%)", "BLEU-2 (%)", "BLEU-3 (%)", "BLEU-4 (%)"},
             {}};
  for (const EvalReport& r : reports) {
    bleu.rows.push_back({r.system_name, Percent(r.bleu[0]), Percent(r.bleu[1]),
                         Percent(r.bleu[2]), Percent(r.bleu[3])});
  }
  Emit(bleu, format, out);

  Table overall{"Precision, Recall, F1", kPrfHeader, {}};
  for (const EvalReport& r : reports) overall.rows.push_back(PrfRow(r.system_name, r.overall));
  Emit(overall, format, out);

  std::vector<std::string> pathologies;
  std::set<std::string> seen;
  for (const EvalReport& r : reports) {
    for (const auto& [p, counts] : r.per_pathology) {
      if (seen.insert(p).second) pathologies.push_back(p);
    }
  }
  for (const std::string& p : pathologies) {
    Table table{p, kPrfHeader, {}};
    for (const EvalReport& r : reports) {
      auto it = std::find_if(r.per_pathology.begin(), r.per_pathology.end(),
                             [&](const auto& e) { return e.first == p; });
      if (it == r.per_pathology.end()) {
        table.rows.push_back({r.system_name, "-", "-", "-", "-", "-", "-"});
      } else {
        table.rows.push_back(PrfRow(r.system_name, it->second));
      }
    }
    Emit(table, format, out);
  }
  return out.str();
}

}  // namespace radex
