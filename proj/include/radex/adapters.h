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

#ifndef RADEX_ADAPTERS_H_
#define RADEX_ADAPTERS_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radex/corpus.h"
#include "radex/error.h"
#include "radex/evalkit.h"
#include "radex/ruleextract.h"

namespace radex {

struct ExternalFormat {
  enum class Kind { kJsonl, kMtiBatch };

  Kind kind = Kind::kJsonl;
  std::map<std::string, std::string> options;

  // "jsonl" or "mti_batch"; anything else throws Error(kUnknownFormat).
  static ExternalFormat FromName(const std::string& name);
};

// jsonl: the predictions JSONL format.
// mti_batch: pipe-delimited "ID|Term|..." lines; fields past the second are
// ignored, lines starting with '*' are comments, terms group by ID in file
// order.
PredictionSet ImportPredictions(const std::filesystem::path& path,
                                const ExternalFormat& format,
                                std::string system_name = {});
PredictionSet ReadMtiBatch(std::istream& in, std::string system_name);

// Splits on ';' when present, otherwise on ','. Adjacent fragments "B, A"
// whose reordering "A B" is a lexicon entry are re-joined (inverted MeSH
// headings such as "Aorta, Thoracic").
std::vector<std::string> ConvertRawMesh(const std::string& raw,
                                        const Lexicon& known_multiword);

struct AnnotatorEndpoint {
  std::string url;
  double timeout_seconds = 30.0;
  int max_retries = 2;
  std::optional<std::string> auth_token;
  // First retry waits this long; each further retry doubles it.
  std::chrono::milliseconds backoff_base{1000};
  // Concurrent requests; 1 means sequential.
  std::size_t max_in_flight = 1;

  void Validate() const;
};

struct AnnotationResult {
  PredictionSet predictions;
  std::vector<std::string> failed_ids;
  std::vector<std::string> warnings;
};

// Thrown when every report failed. Carries the all-empty predictions so a
// caller can still score or persist them.
class EndpointUnreachable : public Error {
 public:
  EndpointUnreachable(const std::string& message, AnnotationResult partial)
      : Error(ErrorKind::kEndpointUnreachable, message),
        partial_(std::move(partial)) {}
  const AnnotationResult& partial() const { return partial_; }

 private:
  AnnotationResult partial_;
};

// POSTs {"id", "text"} per report (text = findings + "\n" + impression) and
// expects {"terms": [...]}. Timeouts, transport failures and 5xx responses are
// retried with exponential backoff; 4xx is not retried. A report that still
// fails gets an empty term list and a warning. A 200 response that does not
// match the contract throws Error(kMalformedResponse).
AnnotationResult AnnotateRemote(const AnnotatorEndpoint& endpoint,
                                const Corpus& corpus,
                                std::string system_name = "remote");

}  // namespace radex

#endif  // RADEX_ADAPTERS_H_
