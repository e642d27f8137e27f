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

#include "radex/ruleextract.h"

#include <algorithm>
#include <istream>
#include <sstream>

#include "io_util.h"
#include "radex/error.h"

namespace radex {

namespace {

constexpr std::string_view kDefaultLexicon[] = {
    "opacity", "aorta", "fractures", "osteophyte", "scoliosis", "density",
    "pneumothorax", "cardiomegaly", "emphysema", "arthritis", "granuloma",
    "kyphosis", "pneumonia", "spondylosis", "deformity", "hypertension",
    "consolidation", "mass", "thickening", "hernia", "lucency", "bronchiectasis",
    "calcified granuloma", "focal airspace disease", "airspace disease",
    "pleural effusion", "pleural effusions", "pulmonary edema",
    "pulmonary congestion", "indwelling catheters", "costophrenic angle",
    "thoracic aorta", "nodular opacity", "pleural thickening", "rib fractures",
    "calcinosis", "cicatrix", "nodule",
};

constexpr std::string_view kDefaultCues[] = {
    "no", "not", "without", "absent", "resolved",
    "negative for", "free of", "clear of", "rule out",
};

constexpr std::string_view kDefaultTerminators[] = {
    "but", "although", "though", "which", "except",
};

std::vector<std::string> NormWords(std::string_view text) {
  std::vector<std::string> words;
  for (Token& t : Tokenize(text)) words.push_back(std::move(t.norm));
  return words;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

// Non-empty, non-comment lines.
std::vector<std::string> ReadEntries(std::istream& in) {
  std::vector<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string_view trimmed = internal::Trim(line);
    if (!trimmed.empty()) entries.emplace_back(trimmed);
  }
  return entries;
}

}  // namespace

Lexicon::Lexicon(std::initializer_list<std::string_view> entries) {
  for (std::string_view e : entries) Add(e);
}

bool Lexicon::Add(std::string_view entry) {
  std::vector<std::string> words = NormWords(entry);
  if (words.empty()) return false;
  if (words.size() > kMaxWords) {
    throw Error(ErrorKind::kInvalidArgument,
                "lexicon entry longer than 4 words: " + std::string(entry));
  }
  entries_.insert(JoinWords(words));
  return true;
}

Lexicon Lexicon::Parse(std::istream& in) {
  Lexicon lexicon;
  for (const std::string& e : ReadEntries(in)) lexicon.Add(e);
  return lexicon;
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  std::ifstream in = internal::OpenInput(path);
  return Parse(in);
}

Lexicon Lexicon::Default() {
  Lexicon lexicon;
  for (std::string_view e : kDefaultLexicon) lexicon.Add(e);
  return lexicon;
}

NegationRules NegationRules::Default() {
  NegationRules rules;
  for (std::string_view cue : kDefaultCues) rules.cues.push_back(NormWords(cue));
  for (std::string_view t : kDefaultTerminators) rules.terminators.emplace(t);
  return rules;
}

NegationRules NegationRules::Load(const std::filesystem::path& cue_file,
                                  const std::filesystem::path& terminator_file) {
  NegationRules rules;
  std::ifstream cues = internal::OpenInput(cue_file);
  for (const std::string& e : ReadEntries(cues)) {
    std::vector<std::string> words = NormWords(e);
    if (!words.empty()) rules.cues.push_back(std::move(words));
  }
  std::ifstream terms = internal::OpenInput(terminator_file);
  for (const std::string& e : ReadEntries(terms)) {
    for (std::string& w : NormWords(e)) rules.terminators.insert(std::move(w));
  }
  return rules;
}

namespace {

// [begin, end) index ranges of tokens sharing a sentence index.
std::vector<std::pair<std::size_t, std::size_t>> SentenceRanges(
    const std::vector<Token>& tokens) {
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= tokens.size(); ++i) {
    if (i == tokens.size() ||
        tokens[i].sentence_index != tokens[start].sentence_index) {
      ranges.emplace_back(start, i);
      start = i;
    }
  }
  if (tokens.empty()) ranges.clear();
  return ranges;
}

bool CueAt(const std::vector<Token>& tokens, std::size_t i, std::size_t end,
           const std::vector<std::string>& cue) {
  if (cue.empty() || i + cue.size() > end) return false;
  for (std::size_t k = 0; k < cue.size(); ++k) {
    if (tokens[i + k].norm != cue[k]) return false;
  }
  return true;
}

}  // namespace

std::vector<NegationScope> DetectNegation(const std::vector<Token>& tokens,
                                          const NegationRules& rules) {
  // Longer cues win when several start at the same token.
  std::vector<const std::vector<std::string>*> cues;
  for (const auto& cue : rules.cues) cues.push_back(&cue);
  std::stable_sort(cues.begin(), cues.end(), [](const auto* a, const auto* b) {
    return a->size() > b->size();
  });

  std::vector<NegationScope> scopes;
  for (auto [begin, end] : SentenceRanges(tokens)) {
    std::size_t i = begin;
    while (i < end) {
      const std::vector<std::string>* hit = nullptr;
      for (const auto* cue : cues) {
        if (CueAt(tokens, i, end, *cue)) {
          hit = cue;
          break;
        }
      }
      if (hit == nullptr) {
        ++i;
        continue;
      }
      std::size_t first = i + hit->size();
      std::size_t stop = first;
      while (stop < end && rules.terminators.count(tokens[stop].norm) == 0) ++stop;
      NegationScope scope;
      scope.sentence_index = tokens[i].sentence_index;
      scope.trigger = tokens[i].position;
      scope.span_begin = first < end ? tokens[first].position
                                     : tokens[end - 1].position + 1;
      scope.span_end = stop < end ? tokens[stop].position
                                  : tokens[end - 1].position + 1;
      scopes.push_back(scope);
      i = first;
    }
  }
  return scopes;
}

std::vector<TermMatch> MatchDictionary(const TokenizedReport& report,
                                       const Lexicon& lexicon,
                                       const NegationRules& rules) {
  const std::vector<Token>& tokens = report.tokens;
  std::vector<NegationScope> scopes = DetectNegation(tokens, rules);

  std::size_t max_words = 1;
  for (const std::string& e : lexicon.entries()) {
    max_words = std::max<std::size_t>(
        max_words, 1 + std::count(e.begin(), e.end(), ' '));
  }

  std::vector<TermMatch> matches;
  std::set<std::string> seen;
  for (auto [begin, end] : SentenceRanges(tokens)) {
    std::size_t i = begin;
    while (i < end) {
      std::size_t longest = 0;
      std::string phrase;
      std::string candidate;
      for (std::size_t len = 1; len <= max_words && i + len <= end; ++len) {
        if (len > 1) candidate.push_back(' ');
        candidate += tokens[i + len - 1].norm;
        if (lexicon.Contains(candidate)) {
          longest = len;
          phrase = candidate;
        }
      }
      if (longest == 0) {
        ++i;
        continue;
      }
      TermMatch m{phrase, tokens[i].position, tokens[i + longest - 1].position + 1};
      bool negated = std::any_of(scopes.begin(), scopes.end(), [&](const NegationScope& s) {
        return s.Covers(m.begin, m.end);
      });
      if (!negated && seen.insert(m.term).second) matches.push_back(std::move(m));
      i += longest;
    }
  }
  return matches;
}

std::vector<std::string> ExtractDictionary(const Report& report,
                                           const Lexicon& lexicon,
                                           const NegationRules& rules) {
  if (lexicon.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "lexicon is empty");
  }
  std::vector<std::string> terms;
  for (TermMatch& m : MatchDictionary(TokenizeReport(report), lexicon, rules)) {
    terms.push_back(std::move(m.term));
  }
  return terms;
}

}  // namespace radex
