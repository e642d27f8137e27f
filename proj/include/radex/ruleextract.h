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

#ifndef RADEX_RULEEXTRACT_H_
#define RADEX_RULEEXTRACT_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "radex/corpus.h"
#include "radex/textprep.h"

namespace radex {

// Normalized pathology phrases (lower-case, single-spaced, 1-4 words).
class Lexicon {
 public:
  static constexpr std::size_t kMaxWords = 4;

  Lexicon() = default;
  Lexicon(std::initializer_list<std::string_view> entries);

  // Normalizes with the tokenizer; returns false for entries that normalize
  // to nothing. Throws Error(kInvalidArgument) above kMaxWords words.
  bool Add(std::string_view entry);
  bool Contains(std::string_view normalized) const {
    return entries_.count(std::string(normalized)) > 0;
  }

  const std::set<std::string>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // One term per line, '#' starts a comment.
  static Lexicon Parse(std::istream& in);
  static Lexicon Load(const std::filesystem::path& path);
  // The 22 distinct pathology words of the benchmark vocabulary plus the
  // multiword findings of the reference reports.
  static Lexicon Default();

 private:
  std::set<std::string> entries_;
};

// Negation cues and scope terminators. Entries with a space are multiword
// cues that only fire when every word is present in order.
struct NegationRules {
  std::vector<std::vector<std::string>> cues;
  std::set<std::string> terminators;

  static NegationRules Default();
  // No cues at all: plain dictionary lookup.
  static NegationRules None() { return {}; }
  // Text files, one entry per line, '#' comments.
  static NegationRules Load(const std::filesystem::path& cue_file,
                            const std::filesystem::path& terminator_file);
};

// Positions refer to Token::position. The governed span is
// [span_begin, span_end) and is empty when span_begin == span_end.
struct NegationScope {
  std::size_t sentence_index = 0;
  std::size_t trigger = 0;
  std::size_t span_begin = 0;
  std::size_t span_end = 0;

  bool Covers(std::size_t begin, std::size_t end) const {
    return begin >= span_begin && end <= span_end && begin < end;
  }
  friend bool operator==(const NegationScope&, const NegationScope&) = default;
};

// A cue opens a scope that runs from the token after the cue to the end of
// its sentence or the first terminator word.
std::vector<NegationScope> DetectNegation(const std::vector<Token>& tokens,
                                          const NegationRules& rules);

struct TermMatch {
  std::string term;
  std::size_t begin = 0;  // token position of first word
  std::size_t end = 0;    // one past the last word
};

// Longest-match lexicon phrases over the report's tokens, sentence by
// sentence, that are not wholly inside a negation scope. Results are in text
// order with repeats collapsed to the first occurrence.
std::vector<TermMatch> MatchDictionary(const TokenizedReport& tokens,
                                       const Lexicon& lexicon,
                                       const NegationRules& rules);

std::vector<std::string> ExtractDictionary(const Report& report,
                                           const Lexicon& lexicon,
                                           const NegationRules& rules =
                                               NegationRules::Default());

}  // namespace radex

#endif  // RADEX_RULEEXTRACT_H_
