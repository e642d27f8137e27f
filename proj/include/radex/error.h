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

#ifndef RADEX_ERROR_H_
#define RADEX_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace radex {

enum class ErrorKind {
  kEmptyInput,
  kDuplicateSection,
  kParseError,
  kDuplicateId,
  kEmptyCorpus,
  kInvalidSplit,
  kMismatchedReport,
  kDimensionMismatch,
  kEmptyFile,
  kEmptySequence,
  kEmptyTrainingSet,
  kInvalidOrder,
  kEmptyReference,
  kEmptyGold,
  kEmptyPathologyList,
  kUnknownFormat,
  kEndpointUnreachable,
  kMalformedResponse,
  kInvalidModel,
  kInvalidArgument,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures surface as this exception. `line()` is the 1-based
// input line for parse failures and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0);

  ErrorKind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace radex

#endif  // RADEX_ERROR_H_
