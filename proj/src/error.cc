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

#include "radex/error.h"

namespace radex {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kDuplicateSection: return "DuplicateSection";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kDuplicateId: return "DuplicateId";
    case ErrorKind::kEmptyCorpus: return "EmptyCorpus";
    case ErrorKind::kInvalidSplit: return "InvalidSplit";
    case ErrorKind::kMismatchedReport: return "MismatchedReport";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kEmptyFile: return "EmptyFile";
    case ErrorKind::kEmptySequence: return "EmptySequence";
    case ErrorKind::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::kInvalidOrder: return "InvalidOrder";
    case ErrorKind::kEmptyReference: return "EmptyReference";
    case ErrorKind::kEmptyGold: return "EmptyGold";
    case ErrorKind::kEmptyPathologyList: return "EmptyPathologyList";
    case ErrorKind::kUnknownFormat: return "UnknownFormat";
    case ErrorKind::kEndpointUnreachable: return "EndpointUnreachable";
    case ErrorKind::kMalformedResponse: return "MalformedResponse";
    case ErrorKind::kInvalidModel: return "InvalidModel";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Decorate(ErrorKind kind, const std::string& message,
                     std::size_t line) {
  std::string out(ErrorKindName(kind));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::size_t line)
    : std::runtime_error(Decorate(kind, message, line)),
      kind_(kind),
      line_(line) {}

}  // namespace radex
