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

#ifndef RADEX_CORPUS_H_
#define RADEX_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace radex {

// One radiology report: the two narrative sections that are processed and the
// gold MeSH annotation terms.
struct Report {
  std::string id;
  std::string findings;
  std::string impression;
  std::vector<std::string> mesh_terms;

  bool usable() const { return !findings.empty() || !impression.empty(); }

  friend bool operator==(const Report&, const Report&) = default;
};

// Ordered collection of reports with unique ids. Insertion order is the
// iteration order.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::string source) : source_(std::move(source)) {}

  // Throws Error(kDuplicateId) if the id is already present.
  void Add(Report report);

  const std::vector<Report>& reports() const { return reports_; }
  const std::string& source() const { return source_; }
  std::size_t size() const { return reports_.size(); }
  bool empty() const { return reports_.empty(); }

  // nullptr when absent.
  const Report* Find(std::string_view id) const;

  auto begin() const { return reports_.begin(); }
  auto end() const { return reports_.end(); }

 private:
  std::vector<Report> reports_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string source_;
};

struct SplitSpec {
  std::uint64_t seed = 0;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};

  // Throws Error(kInvalidSplit) unless ratios are >= 0 and sum to 1 +- 1e-9.
  void Validate() const;
};

struct CorpusSplit {
  Corpus train;
  Corpus validation;
  Corpus test;
};

// Splits text into FINDINGS / IMPRESSION sections. Header lines match
// "FINDINGS:" or "IMPRESSION:" case-insensitively and may carry inline text.
// Other upper-case "LABEL:" lines open sections that are discarded.
Report ParseSectionedText(std::string_view text, std::string id);

Corpus LoadCorpusJsonl(const std::filesystem::path& path);
Corpus ReadCorpusJsonl(std::istream& in, std::string source);
void SaveCorpusJsonl(const Corpus& corpus, const std::filesystem::path& path);
void WriteCorpusJsonl(const Corpus& corpus, std::ostream& out);

// Reads a sectioned .txt file; the filename stem becomes the report id.
Report LoadSectionedFile(const std::filesystem::path& path);

// Seeded Fisher-Yates shuffle, then train gets floor(N*r0), validation
// floor(N*r1) and test the remainder.
CorpusSplit SplitCorpus(const Corpus& corpus, const SplitSpec& spec);

}  // namespace radex

#endif  // RADEX_CORPUS_H_
