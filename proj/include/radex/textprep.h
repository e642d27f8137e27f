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

#ifndef RADEX_TEXTPREP_H_
#define RADEX_TEXTPREP_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "radex/corpus.h"

namespace radex {

// De-identification placeholder norm. Kept as a token, never a keyword.
inline constexpr std::string_view kRedactionNorm = "xxxx";

struct Token {
  std::string surface;
  std::string norm;
  std::size_t sentence_index = 0;
  std::size_t position = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

enum class Label { kNonKeyword, kKeyword };

// The tokens of one report's findings followed by its impression.
struct TokenizedReport {
  std::string report_id;
  std::vector<Token> tokens;
};

struct LabeledSequence {
  std::string report_id;
  std::vector<Token> tokens;
  std::vector<Label> labels;
};

// Splits on '.', '!' or '?' followed by whitespace or end of text. A short
// number followed by '.' ("1.", "2.") is a list enumerator: it never ends a
// sentence and, away from the sentence start, begins a new one.
std::vector<std::string> SegmentSentences(std::string_view text);

// Whitespace split; leading/trailing punctuation (ASCII and common Unicode
// punctuation) is stripped and the remainder lower-cased. Pieces that strip
// to nothing are dropped. sentence_index/position are left at 0.
std::vector<Token> Tokenize(std::string_view sentence);

// Tokenizes findings then impression; sentence indices and positions run
// across both sections.
TokenizedReport TokenizeReport(const Report& report);

struct NormalizedTerms {
  std::vector<std::string> words;
  std::map<std::string, std::size_t> counts;
};

NormalizedTerms NormalizeTerms(const std::vector<std::string>& terms);

// IO labeling: a token is KEYWORD iff its norm is in the normalized gold word
// set. Throws Error(kMismatchedReport) when the token stream belongs to a
// different report.
LabeledSequence LabelTokens(const Report& report, const TokenizedReport& tokens);

// Labeled JSONL: {"id": ..., "tokens": [norm, ...], "labels": ["K"|"O", ...]}
std::vector<LabeledSequence> ReadLabeledJsonl(std::istream& in);
std::vector<LabeledSequence> LoadLabeledJsonl(const std::filesystem::path& path);
void WriteLabeledJsonl(const std::vector<LabeledSequence>& data, std::ostream& out);
void SaveLabeledJsonl(const std::vector<LabeledSequence>& data,
                      const std::filesystem::path& path);

}  // namespace radex

#endif  // RADEX_TEXTPREP_H_
