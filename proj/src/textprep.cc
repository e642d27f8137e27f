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

#include <cctype>
#include <istream>
#include <ostream>

#include "io_util.h"
#include "json.hpp"
#include "radex/error.h"

namespace radex {

using internal::IsSpace;
using json = nlohmann::json;

namespace {

struct Piece {
  std::size_t begin;
  std::size_t end;
};

std::vector<Piece> SplitWhitespace(std::string_view text) {
  std::vector<Piece> pieces;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    pieces.push_back({start, i});
  }
  return pieces;
}

bool IsEnumerator(std::string_view piece) {
  if (piece.size() < 2 || piece.size() > 3 || piece.back() != '.') return false;
  for (std::size_t i = 0; i + 1 < piece.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(piece[i]))) return false;
  }
  return true;
}

bool EndsSentence(std::string_view piece) {
  char c = piece.back();
  return c == '.' || c == '!' || c == '?';
}

// Decodes one UTF-8 sequence starting at `s[i]`; returns its length in bytes
// (1 for malformed input, which is then treated as a single opaque byte).
std::size_t Utf8Length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

char32_t DecodeAt(std::string_view s, std::size_t i, std::size_t len) {
  auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[i + k]); };
  switch (len) {
    case 2: return ((byte(0) & 0x1F) << 6) | (byte(1) & 0x3F);
    case 3:
      return ((byte(0) & 0x0F) << 12) | ((byte(1) & 0x3F) << 6) | (byte(2) & 0x3F);
    case 4:
      return ((byte(0) & 0x07) << 18) | ((byte(1) & 0x3F) << 12) |
             ((byte(2) & 0x3F) << 6) | (byte(3) & 0x3F);
    default: return byte(0);
  }
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) return std::ispunct(static_cast<int>(cp)) != 0;
  return (cp >= 0x00A1 && cp <= 0x00BF) ||  // Latin-1 punctuation
         (cp >= 0x2010 && cp <= 0x205E) ||  // General Punctuation dashes/quotes
         (cp >= 0x3000 && cp <= 0x303F);    // CJK punctuation
}

// Code point boundaries of `s`.
std::vector<std::size_t> Boundaries(std::string_view s) {
  std::vector<std::size_t> b;
  std::size_t i = 0;
  while (i < s.size()) {
    b.push_back(i);
    std::size_t len = Utf8Length(static_cast<unsigned char>(s[i]));
    if (i + len > s.size()) len = 1;
    i += len;
  }
  b.push_back(s.size());
  return b;
}

std::string_view StripPunctuation(std::string_view piece) {
  std::vector<std::size_t> b = Boundaries(piece);
  std::size_t lo = 0, hi = b.size() - 1;
  while (lo < hi && IsPunctuation(DecodeAt(piece, b[lo], b[lo + 1] - b[lo]))) ++lo;
  while (hi > lo && IsPunctuation(DecodeAt(piece, b[hi - 1], b[hi] - b[hi - 1]))) --hi;
  return piece.substr(b[lo], b[hi] - b[lo]);
}

}  // namespace

std::vector<std::string> SegmentSentences(std::string_view text) {
  std::vector<std::string> sentences;
  std::vector<Piece> pieces = SplitWhitespace(text);
  std::size_t first = 0;  // first piece of the open sentence
  auto close = [&](std::size_t last_exclusive) {
    if (last_exclusive > first) {
      std::size_t b = pieces[first].begin;
      std::size_t e = pieces[last_exclusive - 1].end;
      sentences.emplace_back(text.substr(b, e - b));
    }
    first = last_exclusive;
  };
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::string_view piece = text.substr(pieces[i].begin, pieces[i].end - pieces[i].begin);
    bool is_last = i + 1 == pieces.size();
    if (IsEnumerator(piece) && !is_last) {
      if (i > first) close(i);
      continue;
    }
    if (EndsSentence(piece)) close(i + 1);
  }
  close(pieces.size());
  return sentences;
}

std::vector<Token> Tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  for (const Piece& p : SplitWhitespace(sentence)) {
    std::string_view raw = sentence.substr(p.begin, p.end - p.begin);
    std::string_view stripped = StripPunctuation(raw);
    if (stripped.empty()) continue;
    Token t;
    t.surface = std::string(stripped);
    t.norm = internal::AsciiLower(stripped);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

TokenizedReport TokenizeReport(const Report& report) {
  TokenizedReport out;
  out.report_id = report.id;
  std::size_t sentence_index = 0;
  for (const std::string* section : {&report.findings, &report.impression}) {
    for (const std::string& sentence : SegmentSentences(*section)) {
      std::vector<Token> tokens = Tokenize(sentence);
      if (tokens.empty()) continue;
      for (Token& t : tokens) {
        t.sentence_index = sentence_index;
        t.position = out.tokens.size();
        out.tokens.push_back(std::move(t));
      }
      ++sentence_index;
    }
  }
  return out;
}

NormalizedTerms NormalizeTerms(const std::vector<std::string>& terms) {
  NormalizedTerms out;
  for (const std::string& term : terms) {
    for (Token& t : Tokenize(term)) {
      ++out.counts[t.norm];
      out.words.push_back(std::move(t.norm));
    }
  }
  return out;
}

LabeledSequence LabelTokens(const Report& report, const TokenizedReport& tokens) {
  if (tokens.report_id != report.id) {
    throw Error(ErrorKind::kMismatchedReport,
                "tokens of '" + tokens.report_id + "' labeled against '" +
                    report.id + "'");
  }
  NormalizedTerms gold = NormalizeTerms(report.mesh_terms);
  LabeledSequence seq;
  seq.report_id = report.id;
  seq.tokens = tokens.tokens;
  seq.labels.reserve(seq.tokens.size());
  for (const Token& t : seq.tokens) {
    bool keyword = t.norm != kRedactionNorm && gold.counts.count(t.norm) > 0;
    seq.labels.push_back(keyword ? Label::kKeyword : Label::kNonKeyword);
  }
  return seq;
}

std::vector<LabeledSequence> ReadLabeledJsonl(std::istream& in) {
  std::vector<LabeledSequence> data;
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
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
        !record.contains("tokens") || !record["tokens"].is_array() ||
        !record.contains("labels") || !record["labels"].is_array()) {
      throw Error(ErrorKind::kParseError, "expected id, tokens and labels", line_no);
    }
    const json& tokens = record["tokens"];
    const json& labels = record["labels"];
    if (tokens.size() != labels.size()) {
      throw Error(ErrorKind::kParseError, "tokens and labels differ in length",
                  line_no);
    }
    LabeledSequence seq;
    seq.report_id = record["id"].get<std::string>();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!tokens[i].is_string() || !labels[i].is_string()) {
        throw Error(ErrorKind::kParseError, "tokens and labels must be strings",
                    line_no);
      }
      std::string norm = tokens[i].get<std::string>();
      std::string label = labels[i].get<std::string>();
      if (label != "K" && label != "O") {
        throw Error(ErrorKind::kParseError, "label must be K or O", line_no);
      }
      seq.tokens.push_back(Token{norm, norm, 0, i});
      seq.labels.push_back(label == "K" ? Label::kKeyword : Label::kNonKeyword);
    }
    data.push_back(std::move(seq));
  }
  return data;
}

std::vector<LabeledSequence> LoadLabeledJsonl(const std::filesystem::path& path) {
  std::ifstream in = internal::OpenInput(path);
  return ReadLabeledJsonl(in);
}

void WriteLabeledJsonl(const std::vector<LabeledSequence>& data, std::ostream& out) {
  for (const LabeledSequence& seq : data) {
    json tokens = json::array();
    json labels = json::array();
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      tokens.push_back(seq.tokens[i].norm);
      labels.push_back(seq.labels[i] == Label::kKeyword ? "K" : "O");
    }
    json record = {{"id", seq.report_id}, {"tokens", tokens}, {"labels", labels}};
    out << record.dump() << '\n';
  }
}

void SaveLabeledJsonl(const std::vector<LabeledSequence>& data,
                      const std::filesystem::path& path) {
  std::ofstream out = internal::OpenOutput(path);
  WriteLabeledJsonl(data, out);
}

}  // namespace radex
