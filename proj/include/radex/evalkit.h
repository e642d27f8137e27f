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

#ifndef RADEX_EVALKIT_H_
#define RADEX_EVALKIT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "radex/corpus.h"

namespace radex {

// Word substituted for an empty or missing prediction.
inline constexpr char kFallbackWord[] = "normal";

struct PredictionSet {
  std::string system_name;
  std::map<std::string, std::vector<std::string>> predictions;

  // Missing ids yield an empty list.
  const std::vector<std::string>& TermsFor(const std::string& id) const;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// Predictions JSONL: {"id": "...", "terms": ["...", ...]}
PredictionSet ReadPredictionsJsonl(std::istream& in, std::string system_name);
PredictionSet LoadPredictionsJsonl(const std::filesystem::path& path,
                                   std::string system_name = {});
void WritePredictionsJsonl(const PredictionSet& preds, std::ostream& out);
void SavePredictionsJsonl(const PredictionSet& preds,
                          const std::filesystem::path& path);

// Empty input becomes {"normal"}.
std::vector<std::string> ApplyFallback(std::vector<std::string> terms);

// Normalized words after the fallback; never empty.
std::vector<std::string> ScoringWords(const std::vector<std::string>& terms);

// Normalized words joined by single spaces with a trailing full stop.
std::string JoinAnnotation(const std::vector<std::string>& terms);

// Cumulative BLEU-n without smoothing.
double BleuN(const std::vector<std::string>& candidate,
             const std::vector<std::string>& reference, int n);

// Mean of per-report BLEU-n over the gold reports.
double CorpusBleu(const PredictionSet& preds, const Corpus& gold, int n);

struct PrfCounts {
  std::size_t tp = 0, fp = 0, fn = 0;

  double Precision() const;
  double Recall() const;
  double F1() const;

  PrfCounts& operator+=(const PrfCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const PrfCounts&, const PrfCounts&) = default;
};

// Word-multiset overlap per report, pooled over reports.
PrfCounts MicroPrf(const PredictionSet& preds, const Corpus& gold);

// Report-level presence of each pathology word. Result keeps input order;
// repeated pathology words are scored once.
std::vector<std::pair<std::string, PrfCounts>> PerPathologyPrf(
    const PredictionSet& preds, const Corpus& gold,
    const std::vector<std::string>& pathologies);

// The benchmark pathology vocabulary as printed (23 entries, "consolidation"
// twice).
const std::vector<std::string>& BenchmarkPathologies();
// Same list with repeats removed (22 words).
std::vector<std::string> DefaultPathologies();
// One word per line, '#' comments; "default23" selects DefaultPathologies().
std::vector<std::string> LoadPathologies(const std::string& file_or_default);

struct EvalReport {
  std::string system_name;
  std::size_t n_reports = 0;
  std::array<double, 4> bleu = {0, 0, 0, 0};
  PrfCounts overall;
  std::vector<std::pair<std::string, PrfCounts>> per_pathology;
};

EvalReport Evaluate(const PredictionSet& preds, const Corpus& gold,
                    const std::vector<std::string>& pathologies);

enum class TableFormat { kMarkdown, kCsv };

// BLEU table, overall P/R/F1 table, then one table per pathology. Values are
// percentages with two decimals.
std::string RenderTables(const std::vector<EvalReport>& reports, TableFormat format);

}  // namespace radex

#endif  // RADEX_EVALKIT_H_
