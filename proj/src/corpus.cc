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

#include "radex/corpus.h"

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>

#include "io_util.h"
#include "json.hpp"
#include "radex/error.h"
#include "radex/random.h"

namespace radex {

using internal::AsciiLower;
using internal::Trim;
using json = nlohmann::json;

void Corpus::Add(Report report) {
  if (report.id.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "report id must be non-empty");
  }
  auto [it, inserted] = index_.emplace(report.id, reports_.size());
  if (!inserted) {
    throw Error(ErrorKind::kDuplicateId, "duplicate report id '" + report.id + "'");
  }
  reports_.push_back(std::move(report));
}

const Report* Corpus::Find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &reports_[it->second];
}

void SplitSpec::Validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r >= 0.0)) {
      throw Error(ErrorKind::kInvalidSplit, "split ratios must be non-negative");
    }
    sum += r;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorKind::kInvalidSplit, "split ratios must sum to 1");
  }
}

namespace {

enum class Section { kNone, kFindings, kImpression, kIgnored };

struct HeaderMatch {
  Section section;
  std::string_view rest;
};

// Recognizes "LABEL: inline text" at the start of a line.
std::optional<HeaderMatch> MatchHeader(std::string_view line) {
  std::string_view s = Trim(line);
  std::size_t colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  std::string_view label = s.substr(0, colon);
  std::string_view rest = Trim(s.substr(colon + 1));
  std::string lower = AsciiLower(label);
  if (lower == "findings") return HeaderMatch{Section::kFindings, rest};
  if (lower == "impression") return HeaderMatch{Section::kImpression, rest};
  // Unknown headers must be upper-case words, so prose such as
  // "Note: ..." inside a section is not mistaken for one.
  if (label.front() < 'A' || label.front() > 'Z') return std::nullopt;
  for (char c : label) {
    bool ok = (c >= 'A' && c <= 'Z') || c == ' ' || c == '/' || c == '-';
    if (!ok) return std::nullopt;
  }
  return HeaderMatch{Section::kIgnored, rest};
}

}  // namespace

Report ParseSectionedText(std::string_view text, std::string id) {
  if (Trim(text).empty()) {
    throw Error(ErrorKind::kEmptyInput, "report '" + id + "' has no text");
  }
  Report report;
  report.id = std::move(id);

  std::string findings, impression;
  bool seen_findings = false, seen_impression = false;
  Section current = Section::kNone;

  auto append = [&](std::string_view piece) {
    std::string* target = current == Section::kFindings     ? &findings
                          : current == Section::kImpression ? &impression
                                                            : nullptr;
    if (target == nullptr) return;
    if (!target->empty()) target->push_back('\n');
    target->append(piece);
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (auto header = MatchHeader(line)) {
      if (header->section == Section::kFindings) {
        if (seen_findings) {
          throw Error(ErrorKind::kDuplicateSection,
                      "FINDINGS appears twice in '" + report.id + "'");
        }
        seen_findings = true;
      } else if (header->section == Section::kImpression) {
        if (seen_impression) {
          throw Error(ErrorKind::kDuplicateSection,
                      "IMPRESSION appears twice in '" + report.id + "'");
        }
        seen_impression = true;
      }
      current = header->section;
      if (!header->rest.empty()) append(header->rest);
    } else {
      append(line);
    }
    pos = eol + 1;
  }

  report.findings = std::string(Trim(findings));
  report.impression = std::string(Trim(impression));
  return report;
}

Report LoadSectionedFile(const std::filesystem::path& path) {
  return ParseSectionedText(internal::ReadFile(path), path.stem().string());
}

namespace {

std::string RequireString(const json& record, const char* key,
                          std::size_t line, bool required) {
  auto it = record.find(key);
  if (it == record.end()) {
    if (required) {
      throw Error(ErrorKind::kParseError,
                  std::string("missing field '") + key + "'", line);
    }
    return {};
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::kParseError,
                std::string("field '") + key + "' must be a string", line);
  }
  return it->get<std::string>();
}

}  // namespace

Corpus ReadCorpusJsonl(std::istream& in, std::string source) {
  Corpus corpus(std::move(source));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParseError, e.what(), line_no);
    }
    if (!record.is_object()) {
      throw Error(ErrorKind::kParseError, "record must be an object", line_no);
    }
    Report report;
    report.id = RequireString(record, "id", line_no, true);
    if (report.id.empty()) {
      throw Error(ErrorKind::kParseError, "empty id", line_no);
    }
    report.findings = RequireString(record, "findings", line_no, false);
    report.impression = RequireString(record, "impression", line_no, false);
    if (auto it = record.find("mesh_terms"); it != record.end()) {
      if (!it->is_array()) {
        throw Error(ErrorKind::kParseError, "mesh_terms must be an array",
                    line_no);
      }
      for (const auto& term : *it) {
        if (!term.is_string()) {
          throw Error(ErrorKind::kParseError, "mesh_terms entries must be strings",
                      line_no);
        }
        report.mesh_terms.push_back(term.get<std::string>());
      }
    }
    try {
      corpus.Add(std::move(report));
    } catch (const Error& e) {
      throw Error(e.kind(), "duplicate report id", line_no);
    }
  }
  return corpus;
}

Corpus LoadCorpusJsonl(const std::filesystem::path& path) {
  std::ifstream in = internal::OpenInput(path);
  return ReadCorpusJsonl(in, path.string());
}

void WriteCorpusJsonl(const Corpus& corpus, std::ostream& out) {
  for (const Report& r : corpus) {
    json record = json::object();
    record["id"] = r.id;
    record["findings"] = r.findings;
    record["impression"] = r.impression;
    record["mesh_terms"] = r.mesh_terms;
    out << record.dump() << '\n';
  }
}

void SaveCorpusJsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out = internal::OpenOutput(path);
  WriteCorpusJsonl(corpus, out);
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

CorpusSplit SplitCorpus(const Corpus& corpus, const SplitSpec& spec) {
  if (corpus.empty()) {
    throw Error(ErrorKind::kEmptyCorpus, "cannot split an empty corpus");
  }
  spec.Validate();

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  SplitMix64 rng(spec.seed);
  FisherYatesShuffle(order, rng);

  const double n = static_cast<double>(corpus.size());
  // The epsilon keeps products such as 3955 * 0.8 from flooring one short.
  auto count = [n](double ratio) {
    return static_cast<std::size_t>(std::floor(n * ratio + 1e-9));
  };
  std::size_t n_train = count(spec.ratios[0]);
  std::size_t n_val = std::min(count(spec.ratios[1]), corpus.size() - n_train);

  CorpusSplit split{Corpus(corpus.source() + "#train"),
                    Corpus(corpus.source() + "#validation"),
                    Corpus(corpus.source() + "#test")};
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Report& r = corpus.reports()[order[k]];
    if (k < n_train) {
      split.train.Add(r);
    } else if (k < n_train + n_val) {
      split.validation.Add(r);
    } else {
      split.test.Add(r);
    }
  }
  return split;
}

}  // namespace radex
