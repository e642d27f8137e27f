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

#ifndef RADEX_TESTS_SYNTHETIC_H_
#define RADEX_TESTS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "radex/corpus.h"
#include "radex/textprep.h"

namespace radex::testing {

// Ten single-word findings used by the synthetic grammar.
const std::vector<std::string>& SyntheticPathologies();

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<LabeledSequence> labeled;
};

// Reports built from positive, negated and neutral sentence templates. A
// pathology word is KEYWORD only where it is asserted; negated mentions are
// NONKEYWORD. No word is both asserted and negated within one report, so the
// gold terms (asserted words in text order) label the tokens exactly.
SyntheticCorpus MakeSyntheticCorpus(std::size_t n_reports, std::uint64_t seed,
                                    const std::string& id_prefix = "syn");

}  // namespace radex::testing

#endif  // RADEX_TESTS_SYNTHETIC_H_
