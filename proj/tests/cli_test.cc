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

#include "radex/cli.h"

#include <sstream>

#include "doctest.h"
#include "oracles.h"
#include "radex/corpus.h"
#include "radex/evalkit.h"
#include "synthetic.h"
#include "test_util.h"

namespace radex {
namespace {

struct Run {
  int code;
  std::string out, err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = CliMain(args, out, err);
  return {code, out.str(), err.str()};
}

TEST_CASE("usage errors exit with 1") {
  CHECK(Cli({}).code == kExitUsage);
  CHECK(Cli({"frobnicate"}).code == kExitUsage);
  CHECK(Cli({"split"}).code == kExitUsage);
  CHECK(Cli({"--help"}).code == kExitOk);
  testing::TempDir dir;
  testing::WriteText(dir / "c.jsonl", "{\"id\":\"a\",\"findings\":\"x\",\"impression\":\"\",\"mesh_terms\":[]}\n");
  std::string c = (dir / "c.jsonl").string();
  CHECK(Cli({"split", "--corpus", c, "--ratios", "0.8,0.2", "--out-dir", dir.path().string()}).code ==
        kExitUsage);
  CHECK(Cli({"compare", "--pred", c, "--gold", c}).code == kExitUsage);
  CHECK(Cli({"eval", "--pred", c, "--gold", c, "--format", "xml"}).code == kExitUsage);
  CHECK(Cli({"ingest", "--out", (dir / "o.jsonl").string()}).code == kExitUsage);
}

TEST_CASE("data errors exit with 2") {
  testing::TempDir dir;
  testing::WriteText(dir / "bad.jsonl", "{not json\n");
  Run r = Cli({"label", "--corpus", (dir / "bad.jsonl").string(), "--out",
               (dir / "o.jsonl").string()});
  CHECK(r.code == kExitData);
  CHECK(r.err.find("ParseError") != std::string::npos);

  testing::WriteText(dir / "c.jsonl", "{\"id\":\"a\",\"findings\":\"x\",\"impression\":\"\",\"mesh_terms\":[]}\n");
  CHECK(Cli({"split", "--corpus", (dir / "c.jsonl").string(), "--ratios", "0.5,0.2,0.2",
             "--out-dir", dir.path().string()})
            .code == kExitData);
  testing::WriteText(dir / "junk.bin", "junk");
  CHECK(Cli({"tag", "--model", (dir / "junk.bin").string(), "--corpus",
             (dir / "c.jsonl").string(), "--out", (dir / "p.jsonl").string()})
            .code == kExitData);
}

TEST_CASE("split is deterministic") {
  testing::TempDir dir;
  auto syn = testing::MakeSyntheticCorpus(40, 3);
  SaveCorpusJsonl(syn.corpus, dir / "all.jsonl");
  for (const char* sub : {"a", "b"}) {
    Run r = Cli({"split", "--corpus", (dir / "all.jsonl").string(), "--seed", "11", "--out-dir",
                 (dir / sub).string()});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out == "train 32, validation 4, test 4\n");
  }
  for (const char* f : {"train.jsonl", "validation.jsonl", "test.jsonl"}) {
    CHECK(testing::ReadText(dir.path() / "a" / f) == testing::ReadText(dir.path() / "b" / f));
  }
}

TEST_CASE("ingest from sectioned text with raw headings") {
  testing::TempDir dir;
  std::filesystem::create_directories(dir / "txt");
  testing::WriteText(dir.path() / "txt" / "r1.txt",
                     "FINDINGS: Scarring in the costophrenic angle.\nIMPRESSION: Stable.\n");
  testing::WriteText(dir / "mesh.tsv", "r1\tAngle, Costophrenic, Cicatrix\n");
  Run r = Cli({"ingest", "--txt", (dir / "txt").string(), "--mesh", (dir / "mesh.tsv").string(),
               "--out", (dir / "c.jsonl").string()});
  REQUIRE(r.code == kExitOk);
  Corpus c = LoadCorpusJsonl(dir / "c.jsonl");
  REQUIRE(c.size() == 1);
  CHECK(c.reports()[0].id == "r1");
  CHECK(c.reports()[0].mesh_terms == std::vector<std::string>{"Costophrenic Angle", "Cicatrix"});
}

TEST_CASE("end-to-end pipeline and comparison tables") {
  testing::TempDir dir;
  auto path = [&](const char* name) { return (dir / name).string(); };
  auto syn = testing::MakeSyntheticCorpus(30, 5);
  SaveCorpusJsonl(syn.corpus, dir / "all.jsonl");

  REQUIRE(Cli({"split", "--corpus", path("all.jsonl"), "--seed", "1", "--out-dir",
               path("split")}).code == kExitOk);
  std::string train = (dir / "split" / "train.jsonl").string();
  std::string val = (dir / "split" / "validation.jsonl").string();
  std::string test = (dir / "split" / "test.jsonl").string();
  REQUIRE(Cli({"label", "--corpus", train, "--out", path("train.lab")}).code == kExitOk);
  REQUIRE(Cli({"label", "--corpus", val, "--out", path("val.lab")}).code == kExitOk);
  Run t = Cli({"train", "--train", path("train.lab"), "--val", path("val.lab"), "--dim", "8",
               "--hidden", "6", "--epochs", "3", "--seed", "2", "--model", path("m.bin"),
               "--history", path("h.csv")});
  REQUIRE(t.code == kExitOk);
  CHECK(testing::ReadText(dir / "h.csv").rfind("epoch,train_loss,validation_f1\n", 0) == 0);
  REQUIRE(Cli({"tag", "--model", path("m.bin"), "--corpus", test, "--out", path("tagger.jsonl")})
              .code == kExitOk);
  REQUIRE(Cli({"baseline", "--corpus", test, "--out", path("baseline.jsonl")}).code == kExitOk);
  REQUIRE(Cli({"baseline", "--corpus", test, "--no-negation", "--out", path("plain.jsonl")}).code ==
          kExitOk);

  // A system missing a report still scores; the report counts as "normal".
  testing::WriteText(dir / "mti.txt", "* nothing for most reports\n" +
                                          LoadCorpusJsonl(test).reports()[0].id + "|Opacity|C1|1|MH\n");
  REQUIRE(Cli({"import", "--input", path("mti.txt"), "--format", "mti_batch", "--system-name", "MTI",
               "--out", path("mti.jsonl")}).code == kExitOk);

  Run md = Cli({"compare", "--pred", path("tagger.jsonl"), path("baseline.jsonl"),
                path("plain.jsonl"), path("mti.jsonl"), "--gold", test});
  REQUIRE(md.code == kExitOk);
  CHECK(md.out.find("### BLEU") != std::string::npos);
  CHECK(md.out.find("| baseline |") != std::string::npos);
  CHECK(md.out.find("| mti |") != std::string::npos);

  REQUIRE(Cli({"compare", "--pred", path("baseline.jsonl"), path("mti.jsonl"), "--gold", test,
               "--format", "csv", "--pathologies", "default23", "--out", path("t.csv")})
              .code == kExitOk);
  auto rows = testing::ParseCsv(testing::ReadText(dir / "t.csv"));
  CHECK(rows[0] == std::vector<std::string>{"BLEU"});
  CHECK(rows[2][0] == "baseline");
  CHECK(rows[3][0] == "mti");

  Run one = Cli({"eval", "--pred", path("baseline.jsonl"), "--gold", test});
  CHECK(one.code == kExitOk);
}

}  // namespace
}  // namespace radex
