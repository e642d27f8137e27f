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

#include "radex/textprep.h"

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "radex/error.h"
#include "radex/random.h"

namespace radex {
namespace {

std::vector<std::string> NormsOf(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const Token& t : tokens) out.push_back(t.norm);
  return out;
}

using Words = std::vector<std::string>;

TEST_CASE("segment sentences") {
  CHECK(SegmentSentences("No pneumothorax. No pleural effusion.") ==
        Words{"No pneumothorax.", "No pleural effusion."});
  CHECK(SegmentSentences("").empty());
  CHECK(SegmentSentences("   ").empty());
  CHECK(SegmentSentences("Is it stable? Yes! Good") == Words{"Is it stable?", "Yes!", "Good"});
  // Decimal points and abbreviations without following space do not split.
  CHECK(SegmentSentences("A 2.5 cm nodule.") == Words{"A 2.5 cm nodule."});
}

TEST_CASE("segment sentences: enumerators start a new sentence") {
  Words s = SegmentSentences(
      "1. Cardiomegaly and small bilateral pleural effusions 2. Abnormal pulmonary "
      "opacities");
  CHECK(s == Words{"1. Cardiomegaly and small bilateral pleural effusions",
                   "2. Abnormal pulmonary opacities"});

  s = SegmentSentences("1. No effusion. 2. Stable granuloma.");
  CHECK(s == Words{"1. No effusion.", "2. Stable granuloma."});
}

TEST_CASE("tokenize") {
  CHECK(NormsOf(Tokenize("calcified granuloma.")) == Words{"calcified", "granuloma"});
  CHECK(NormsOf(Tokenize("costophrenic XXXX blunting")) ==
        Words{"costophrenic", "xxxx", "blunting"});
  CHECK(Tokenize("\xe2\x80\x94").empty());
  CHECK(Tokenize("-- ... ,").empty());

  std::vector<Token> t = Tokenize("(Right-sided) “Effusion”,");
  REQUIRE(t.size() == 2);
  CHECK(t[0].surface == "Right-sided");
  CHECK(t[0].norm == "right-sided");
  CHECK(t[1].norm == "effusion");
}

TEST_CASE("tokenize report assigns sentence indices and positions across sections") {
  Report r{"id", "No pneumothorax. Stable granuloma.", "Normal.", {}};
  TokenizedReport tr = TokenizeReport(r);
  REQUIRE(tr.tokens.size() == 5);
  CHECK(tr.report_id == "id");
  CHECK(tr.tokens[0].sentence_index == 0);
  CHECK(tr.tokens[2].sentence_index == 1);
  CHECK(tr.tokens[4].sentence_index == 2);
  for (std::size_t i = 0; i < tr.tokens.size(); ++i) CHECK(tr.tokens[i].position == i);
}

TEST_CASE("tokenize property: norms are lowercase, non-empty, space free") {
  const std::string alphabet = "abcXYZ-.,;:!? \t\n()'\"01";
  SplitMix64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    std::size_t len = rng.NextBelow(40);
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng.NextBelow(alphabet.size())]);
    for (const Token& t : Tokenize(s)) {
      CHECK(!t.norm.empty());
      CHECK(std::none_of(t.norm.begin(), t.norm.end(),
                         [](char c) { return (c >= 'A' && c <= 'Z') || c == ' ' || c == '\t' || c == '\n'; }));
    }
  }
}

TEST_CASE("normalize terms") {
  NormalizedTerms n = NormalizeTerms({"Aorta, Thoracic", "Cicatrix", "Costophrenic Angle", "Thickening"});
  CHECK(n.words == Words{"aorta", "thoracic", "cicatrix", "costophrenic", "angle", "thickening"});
  CHECK(NormalizeTerms({}).words.empty());
  NormalizedTerms dup = NormalizeTerms({"Pleural Effusion", "Effusion"});
  CHECK(dup.counts.at("effusion") == 2);
  CHECK(dup.counts.at("pleural") == 1);
}

TEST_CASE("label tokens on the worked example") {
  Report example = testing::WorkedExampleReport();
  LabeledSequence seq = LabelTokens(example, TokenizeReport(example));
  REQUIRE(seq.labels.size() == seq.tokens.size());
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const std::string& norm = seq.tokens[i].norm;
    bool expect = norm == "calcified" || norm == "granuloma";
    CHECK_MESSAGE((seq.labels[i] == Label::kKeyword) == expect, norm);
  }
  CHECK(std::any_of(seq.tokens.begin(), seq.tokens.end(),
                    [](const Token& t) { return t.norm == "pneumothorax"; }));
}

TEST_CASE("label tokens: empty gold, repeats, redactions, mismatch") {
  Report r{"a", "Pleural thickening. Apical thickening. XXXX thickening.", "", {}};
  LabeledSequence none = LabelTokens(r, TokenizeReport(r));
  CHECK(std::all_of(none.labels.begin(), none.labels.end(),
                    [](Label l) { return l == Label::kNonKeyword; }));

  r.mesh_terms = {"Thickening", "XXXX"};
  LabeledSequence seq = LabelTokens(r, TokenizeReport(r));
  // Brute-force scan: every "thickening" is KEYWORD, nothing else.
  std::size_t keywords = 0;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    bool is_kw = seq.labels[i] == Label::kKeyword;
    CHECK(is_kw == (seq.tokens[i].norm == "thickening"));
    keywords += is_kw;
  }
  CHECK(keywords == 3);

  TokenizedReport other = TokenizeReport(Report{"b", "x", "", {}});
  try {
    LabelTokens(r, other);
    FAIL("expected MismatchedReport");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMismatchedReport);
  }
}

TEST_CASE("label property: idempotent, gold-order independent, keywords in gold") {
  SplitMix64 rng(5);
  const Words vocab = {"opacity", "mass", "no", "the", "pleural", "effusion", "XXXX", "lung"};
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = 1 + rng.NextBelow(12); i < n; ++i) {
      text += vocab[rng.NextBelow(vocab.size())];
      text += rng.NextBelow(4) == 0 ? ". " : " ";
    }
    Report r{"p", text, "", {}};
    for (std::size_t i = 0, n = rng.NextBelow(4); i < n; ++i) {
      r.mesh_terms.push_back(vocab[rng.NextBelow(vocab.size())]);
    }
    TokenizedReport tokens = TokenizeReport(r);
    LabeledSequence a = LabelTokens(r, tokens);
    LabeledSequence b = LabelTokens(r, tokens);
    CHECK(a.labels == b.labels);
    CHECK(a.labels.size() == tokens.tokens.size());
    Report permuted = r;
    std::reverse(permuted.mesh_terms.begin(), permuted.mesh_terms.end());
    CHECK(LabelTokens(permuted, tokens).labels == a.labels);
    auto gold = NormalizeTerms(r.mesh_terms).counts;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
      if (a.labels[i] == Label::kKeyword) {
        CHECK(gold.count(a.tokens[i].norm) == 1);
        CHECK(a.tokens[i].norm != "xxxx");
      }
    }
  }
}

TEST_CASE("labeled jsonl round trip and errors") {
  Report r = testing::SampleReport3();
  std::vector<LabeledSequence> data = {LabelTokens(r, TokenizeReport(r))};
  std::ostringstream out;
  WriteLabeledJsonl(data, out);
  std::istringstream in(out.str());
  std::vector<LabeledSequence> back = ReadLabeledJsonl(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].report_id == "sample3");
  CHECK(back[0].labels == data[0].labels);
  CHECK(NormsOf(back[0].tokens) == NormsOf(data[0].tokens));

  std::istringstream bad("{\"id\":\"a\",\"tokens\":[\"x\"],\"labels\":[\"B\"]}\n");
  CHECK_THROWS_AS(ReadLabeledJsonl(bad), Error);
  std::istringstream uneven("{\"id\":\"a\",\"tokens\":[\"x\"],\"labels\":[]}\n");
  CHECK_THROWS_AS(ReadLabeledJsonl(uneven), Error);
}

}  // namespace
}  // namespace radex
