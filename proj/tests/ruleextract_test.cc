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
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "radex/error.h"
#include "radex/random.h"

namespace radex {
namespace {

using Words = std::vector<std::string>;

std::vector<Token> SentenceTokens(const std::string& text) {
  return TokenizeReport(Report{"s", text, "", {}}).tokens;
}

TEST_CASE("negation scope runs to sentence end") {
  auto scopes = DetectNegation(SentenceTokens("No focal airspace disease"),
                               NegationRules::Default());
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0].trigger == 0);
  CHECK(scopes[0].span_begin == 1);
  CHECK(scopes[0].span_end == 4);
}

TEST_CASE("no cue, no scope") {
  CHECK(DetectNegation(SentenceTokens("Stable calcified granuloma"),
                       NegationRules::Default())
            .empty());
}

TEST_CASE("'or' does not close a scope") {
  auto scopes = DetectNegation(SentenceTokens("No pneumothorax or pleural effusion"),
                               NegationRules::Default());
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0].span_begin == 1);
  CHECK(scopes[0].span_end == 5);
  CHECK(scopes[0].Covers(1, 2));
  CHECK(scopes[0].Covers(3, 5));
}

TEST_CASE("lone cue yields an empty scope") {
  auto scopes = DetectNegation(SentenceTokens("No."), NegationRules::Default());
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0].span_begin == scopes[0].span_end);
  CHECK_FALSE(scopes[0].Covers(0, 1));
}

TEST_CASE("scopes stop at terminators and sentence boundaries") {
  auto tokens = SentenceTokens("No effusion but small pneumothorax. Mild edema.");
  auto scopes = DetectNegation(tokens, NegationRules::Default());
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0].span_begin == 1);
  CHECK(scopes[0].span_end == 2);  // "but" at position 2
}

TEST_CASE("multiword cues need every word") {
  auto rules = NegationRules::Default();
  CHECK(DetectNegation(SentenceTokens("Negative chest"), rules).empty());
  auto scopes = DetectNegation(SentenceTokens("Negative for pneumonia"), rules);
  REQUIRE(scopes.size() == 1);
  CHECK(scopes[0].trigger == 0);
  CHECK(scopes[0].span_begin == 2);
  CHECK(DetectNegation(SentenceTokens("Lungs are clear of consolidation"), rules).size() == 1);
  CHECK(DetectNegation(SentenceTokens("Lungs are clear"), rules).empty());
}

TEST_CASE("worked example keeps only the asserted granuloma") {
  Report example = testing::WorkedExampleReport();
  CHECK(ExtractDictionary(example, Lexicon::Default()) == Words{"calcified granuloma"});
  Lexicon minimal{"pleural effusion", "pneumothorax", "calcified granuloma",
                  "focal airspace disease"};
  CHECK(ExtractDictionary(example, minimal) == Words{"calcified granuloma"});
  // Without negation every mention comes back.
  CHECK(ExtractDictionary(example, minimal, NegationRules::None()) ==
        Words{"focal airspace disease", "pleural effusion", "pneumothorax",
              "calcified granuloma"});
}

TEST_CASE("dictionary extraction basics") {
  Lexicon lex{"opacity", "pleural effusion", "pneumothorax", "effusion"};
  CHECK(ExtractDictionary(Report{"a", "Normal heart.", "", {}}, lex).empty());
  CHECK(ExtractDictionary(Report{"a", "No pneumothorax. Small pleural effusion.", "", {}},
                          lex) == Words{"pleural effusion"});
  // Longest match wins and repeats collapse to the first occurrence.
  CHECK(ExtractDictionary(Report{"a", "Pleural effusion. Effusion. Opacity. Pleural effusion.", "", {}},
                          lex) == Words{"pleural effusion", "effusion", "opacity"});
  // Phrases never span a redaction or a sentence boundary.
  Lexicon angle{"costophrenic angle"};
  CHECK(ExtractDictionary(Report{"a", "Blunted costophrenic XXXX angle.", "", {}}, angle).empty());
  CHECK(ExtractDictionary(Report{"a", "Left costophrenic. Angle is sharp.", "", {}}, angle).empty());
  CHECK_THROWS_AS(ExtractDictionary(Report{"a", "x", "", {}}, Lexicon()), Error);
}

TEST_CASE("sample report 2 baseline output") {
  Report r = testing::SampleReport2();
  Words got = ExtractDictionary(r, Lexicon::Default());
  CHECK(std::find(got.begin(), got.end(), "pneumothorax") == got.end());
  CHECK(std::find(got.begin(), got.end(), "pleural effusion") == got.end());
  CHECK(std::find(got.begin(), got.end(), "rib fractures") == got.end());
  CHECK(std::find(got.begin(), got.end(), "nodular opacity") != got.end());
  CHECK(std::find(got.begin(), got.end(), "deformity") != got.end());
  CHECK(std::find(got.begin(), got.end(), "airspace disease") != got.end());
}

TEST_CASE("lexicon parsing and defaults") {
  std::istringstream in("# comment\nPleural Effusion\n\n  opacity  # trailing\nopacity\n");
  Lexicon lex = Lexicon::Parse(in);
  CHECK(lex.size() == 2);
  CHECK(lex.Contains("pleural effusion"));
  CHECK_THROWS_AS(Lexicon{"one two three four five"}, Error);

  Lexicon defaults = Lexicon::Default();
  CHECK(defaults.Contains("calcified granuloma"));
  CHECK_FALSE(defaults.Contains("cardiomediastinal silhouette"));
  CHECK(Lexicon::Load(RADEX_DATA_DIR "/default_lexicon.txt").entries() == defaults.entries());

  NegationRules loaded = NegationRules::Load(RADEX_DATA_DIR "/negation_cues.txt",
                                             RADEX_DATA_DIR "/negation_terminators.txt");
  NegationRules builtin = NegationRules::Default();
  CHECK(loaded.cues == builtin.cues);
  CHECK(loaded.terminators == builtin.terminators);
}

TEST_CASE("extraction properties on random reports") {
  const Words vocab = {"no",     "opacity", "pleural", "effusion", "mass", "and",
                       "or",     "but",     "stable",  "XXXX",     "lung", "without",
                       "thickening"};
  Lexicon lex{"opacity", "pleural effusion", "effusion", "mass", "pleural thickening"};
  SplitMix64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = 1 + rng.NextBelow(16); i < n; ++i) {
      text += vocab[rng.NextBelow(vocab.size())];
      text += rng.NextBelow(5) == 0 ? ". " : " ";
    }
    Report r{"p", text, "", {}};
    TokenizedReport tokens = TokenizeReport(r);
    std::vector<TermMatch> matches = MatchDictionary(tokens, lex, NegationRules::Default());
    for (const TermMatch& m : matches) {
      CHECK(lex.Contains(m.term));
      std::string joined;
      for (std::size_t p = m.begin; p < m.end; ++p) {
        if (p > m.begin) joined.push_back(' ');
        joined += tokens.tokens[p].norm;
        CHECK(tokens.tokens[p].sentence_index == tokens.tokens[m.begin].sentence_index);
      }
      CHECK(joined == m.term);
    }

    // An entry whose words never occur in the text changes nothing.
    Lexicon bigger = lex;
    bigger.Add("bronchiectasis");
    bigger.Add("hiatal hernia");
    CHECK(ExtractDictionary(r, bigger) == ExtractDictionary(r, lex));

    // Prefixing every sentence with a cue negates every mention.
    std::string negated;
    for (const std::string& s : SegmentSentences(text)) negated += "No " + s + " ";
    bool has_terminator = false;
    for (const Token& t : tokens.tokens) has_terminator |= t.norm == "but";
    if (!has_terminator) {
      CHECK(ExtractDictionary(Report{"n", negated, "", {}}, lex).empty());
    }
  }
}

}  // namespace
}  // namespace radex
