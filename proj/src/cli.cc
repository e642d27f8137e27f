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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "io_util.h"
#include "radex/adapters.h"
#include "radex/corpus.h"
#include "radex/error.h"
#include "radex/evalkit.h"
#include "radex/ruleextract.h"
#include "radex/tagger.h"
#include "radex/textprep.h"

namespace radex {

namespace fs = std::filesystem;

namespace {

struct IngestOptions {
  std::vector<std::string> txt;
  std::vector<std::string> jsonl;
  std::string mesh;
  std::string lexicon;
  std::string out;
};

struct SplitOptions {
  std::string corpus;
  std::uint64_t seed = 0;
  std::string ratios = "0.8,0.1,0.1";
  std::string out_dir = ".";
};

struct LabelOptions {
  std::string corpus;
  std::string out;
};

struct TrainOptions {
  std::string train;
  std::string val;
  std::string embeddings;
  std::size_t dim = 100;
  std::string model;
  std::string history;
  TrainConfig cfg;
};

struct TagOptions {
  std::string model;
  std::string corpus;
  std::string out;
};

struct BaselineOptions {
  std::string corpus;
  std::string lexicon;
  std::string cues;
  std::string terminators;
  bool no_negation = false;
  std::string out;
};

struct ImportOptions {
  std::string input;
  std::string format = "jsonl";
  std::string system_name;
  std::string out;
};

struct AnnotateOptions {
  std::string url;
  std::string corpus;
  std::string out;
  double timeout = 30.0;
  int retries = 2;
  std::size_t parallel = 1;
  long backoff_ms = 1000;
};

struct EvalOptions {
  std::vector<std::string> preds;
  std::string gold;
  std::string pathologies = "default23";
  std::string format = "md";
  std::string out;
};

Lexicon LexiconOrDefault(const std::string& path) {
  return path.empty() ? Lexicon::Default() : Lexicon::Load(path);
}

// "id<TAB>raw MeSH string" per line.
std::map<std::string, std::string> LoadRawMesh(const std::string& path) {
  std::map<std::string, std::string> out;
  std::ifstream in = internal::OpenInput(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (internal::Trim(line).empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorKind::kParseError, "expected id<TAB>terms", line_no);
    }
    out[std::string(internal::Trim(line.substr(0, tab)))] = line.substr(tab + 1);
  }
  return out;
}

void RunIngest(const IngestOptions& o, std::ostream& out) {
  Corpus corpus(o.out);
  for (const std::string& path : o.jsonl) {
    for (const Report& r : LoadCorpusJsonl(path)) corpus.Add(r);
  }
  std::vector<fs::path> txt_files;
  for (const std::string& path : o.txt) {
    if (fs::is_directory(path)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
          found.push_back(entry.path());
        }
      }
      std::sort(found.begin(), found.end());
      txt_files.insert(txt_files.end(), found.begin(), found.end());
    } else {
      txt_files.emplace_back(path);
    }
  }
  std::map<std::string, std::string> mesh;
  if (!o.mesh.empty()) mesh = LoadRawMesh(o.mesh);
  Lexicon lexicon = LexiconOrDefault(o.lexicon);
  for (const fs::path& file : txt_files) {
    Report r = LoadSectionedFile(file);
    if (auto it = mesh.find(r.id); it != mesh.end()) {
      r.mesh_terms = ConvertRawMesh(it->second, lexicon);
    }
    corpus.Add(std::move(r));
  }
  SaveCorpusJsonl(corpus, o.out);
  out << "ingested " << corpus.size() << " reports into " << o.out << '\n';
}

std::array<double, 3> ParseRatios(const std::string& text) {
  std::array<double, 3> ratios{};
  std::stringstream ss(text);
  std::string field;
  std::size_t n = 0;
  while (std::getline(ss, field, ',')) {
    if (n == 3) break;
    char* end = nullptr;
    ratios[n] = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || !internal::Trim(end).empty()) {
      throw CLI::ValidationError("--ratios", "not a number: " + field);
    }
    ++n;
  }
  if (n != 3 || std::getline(ss, field, ',')) {
    throw CLI::ValidationError("--ratios", "expected three comma-separated ratios");
  }
  return ratios;
}

void RunSplit(const SplitOptions& o, std::ostream& out) {
  SplitSpec spec;
  spec.seed = o.seed;
  spec.ratios = ParseRatios(o.ratios);
  CorpusSplit split = SplitCorpus(LoadCorpusJsonl(o.corpus), spec);
  fs::create_directories(o.out_dir);
  SaveCorpusJsonl(split.train, fs::path(o.out_dir) / "train.jsonl");
  SaveCorpusJsonl(split.validation, fs::path(o.out_dir) / "validation.jsonl");
  SaveCorpusJsonl(split.test, fs::path(o.out_dir) / "test.jsonl");
  out << "train " << split.train.size() << ", validation " << split.validation.size()
      << ", test " << split.test.size() << '\n';
}

void RunLabel(const LabelOptions& o, std::ostream& out) {
  std::vector<LabeledSequence> data;
  for (const Report& r : LoadCorpusJsonl(o.corpus)) {
    data.push_back(LabelTokens(r, TokenizeReport(r)));
  }
  SaveLabeledJsonl(data, o.out);
  out << "labeled " << data.size() << " reports into " << o.out << '\n';
}

void RunTrain(const TrainOptions& o, std::ostream& out) {
  std::vector<LabeledSequence> train = LoadLabeledJsonl(o.train);
  std::vector<LabeledSequence> val;
  if (!o.val.empty()) val = LoadLabeledJsonl(o.val);
  EmbeddingTable table = o.embeddings.empty() ? EmbeddingTable(o.dim)
                                              : EmbeddingTable::Load(o.embeddings, o.dim);
  TaggerModel init(std::move(table), o.cfg.hidden_size, o.cfg.seed);
  TrainResult result = Train(std::move(init), train, val, o.cfg);
  result.model.SaveFile(o.model);
  if (!o.history.empty()) {
    std::ofstream h = internal::OpenOutput(o.history);
    h << "epoch,train_loss,validation_f1\n";
    h.precision(17);
    for (const EpochStats& s : result.history) {
      h << s.epoch << ',' << s.train_loss << ',' << s.validation_f1 << '\n';
    }
  }
  const EpochStats& best = result.history[result.best_epoch - 1];
  out << "trained " << result.history.size() << " epochs; best epoch "
      << result.best_epoch << " (validation F1 " << best.validation_f1
      << "); model written to " << o.model << '\n';
}

void RunTag(const TagOptions& o, std::ostream& out) {
  TaggerModel model = TaggerModel::LoadFile(o.model);
  PredictionSet preds;
  preds.system_name = "tagger";
  for (const Report& r : LoadCorpusJsonl(o.corpus)) {
    preds.predictions[r.id] = PredictTerms(model, r);
  }
  SavePredictionsJsonl(preds, o.out);
  out << "tagged " << preds.predictions.size() << " reports into " << o.out << '\n';
}

void RunBaseline(const BaselineOptions& o, std::ostream& out) {
  Lexicon lexicon = LexiconOrDefault(o.lexicon);
  NegationRules rules = NegationRules::Default();
  if (o.no_negation) {
    rules = NegationRules::None();
  } else if (!o.cues.empty() || !o.terminators.empty()) {
    if (o.cues.empty() || o.terminators.empty()) {
      throw CLI::ValidationError("--negation-cues",
                                 "cue and terminator files must be given together");
    }
    rules = NegationRules::Load(o.cues, o.terminators);
  }
  PredictionSet preds;
  preds.system_name = "baseline";
  for (const Report& r : LoadCorpusJsonl(o.corpus)) {
    preds.predictions[r.id] = ExtractDictionary(r, lexicon, rules);
  }
  SavePredictionsJsonl(preds, o.out);
  out << "extracted terms for " << preds.predictions.size() << " reports into "
      << o.out << '\n';
}

void RunImport(const ImportOptions& o, std::ostream& out) {
  PredictionSet preds =
      ImportPredictions(o.input, ExternalFormat::FromName(o.format), o.system_name);
  SavePredictionsJsonl(preds, o.out);
  out << "imported " << preds.predictions.size() << " reports into " << o.out << '\n';
}

void RunAnnotate(const AnnotateOptions& o, std::ostream& out, std::ostream& err) {
  AnnotatorEndpoint endpoint;
  endpoint.url = o.url;
  endpoint.timeout_seconds = o.timeout;
  endpoint.max_retries = o.retries;
  endpoint.max_in_flight = o.parallel;
  endpoint.backoff_base = std::chrono::milliseconds(o.backoff_ms);
  if (const char* token = std::getenv("RADEX_TOKEN"); token != nullptr && *token) {
    endpoint.auth_token = token;
  }
  Corpus corpus = LoadCorpusJsonl(o.corpus);
  AnnotationResult result;
  try {
    result = AnnotateRemote(endpoint, corpus);
  } catch (const EndpointUnreachable& e) {
    SavePredictionsJsonl(e.partial().predictions, o.out);
    throw;
  }
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  SavePredictionsJsonl(result.predictions, o.out);
  out << "annotated " << result.predictions.predictions.size() << " reports ("
      << result.failed_ids.size() << " failed) into " << o.out << '\n';
}

void RunEval(const EvalOptions& o, std::ostream& out) {
  Corpus gold = LoadCorpusJsonl(o.gold);
  std::vector<std::string> pathologies = LoadPathologies(o.pathologies);
  std::vector<EvalReport> reports;
  for (const std::string& path : o.preds) {
    reports.push_back(Evaluate(LoadPredictionsJsonl(path), gold, pathologies));
  }
  TableFormat format = o.format == "csv" ? TableFormat::kCsv : TableFormat::kMarkdown;
  std::string text = RenderTables(reports, format);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file = internal::OpenOutput(o.out);
    file << text;
  }
}

void AddEvalFlags(CLI::App* cmd, EvalOptions& o, std::size_t min_preds) {
  cmd->add_option("--pred", o.preds, "Predictions JSONL; system name is the file stem")
      ->required()
      ->expected(static_cast<int>(min_preds), -1)
      ->check(CLI::ExistingFile);
  cmd->add_option("--gold", o.gold, "Gold corpus JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--pathologies", o.pathologies,
                  "Pathology word file, or default23 for the benchmark vocabulary");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"md", "csv"}));
  cmd->add_option("--out", o.out, "Write tables here instead of standard output");
}

}  // namespace

int CliMain(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"radex: pathology term extraction and benchmarking for radiology reports",
               "radex"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "Build a corpus JSONL from text or JSONL reports");
  c_ingest->add_option("--txt", ingest.txt, "Sectioned .txt files or directories");
  c_ingest->add_option("--jsonl", ingest.jsonl, "Corpus JSONL files")->check(CLI::ExistingFile);
  c_ingest->add_option("--mesh", ingest.mesh, "id<TAB>raw MeSH string file for .txt reports")
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--lexicon", ingest.lexicon, "Lexicon for inverted heading repair")
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--out", ingest.out, "Output corpus JSONL")->required();

  SplitOptions split;
  auto* c_split = app.add_subcommand("split", "Seeded train/validation/test split");
  c_split->add_option("--corpus", split.corpus)->required()->check(CLI::ExistingFile);
  c_split->add_option("--seed", split.seed);
  c_split->add_option("--ratios", split.ratios, "train,validation,test");
  c_split->add_option("--out-dir", split.out_dir);

  LabelOptions label;
  auto* c_label = app.add_subcommand("label", "KEYWORD/NONKEYWORD token labels from gold terms");
  c_label->add_option("--corpus", label.corpus)->required()->check(CLI::ExistingFile);
  c_label->add_option("--out", label.out)->required();

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "Train the sequence tagger");
  c_train->add_option("--train", train.train, "Labeled JSONL")->required()->check(CLI::ExistingFile);
  c_train->add_option("--val", train.val, "Labeled JSONL")->check(CLI::ExistingFile);
  c_train->add_option("--embeddings", train.embeddings, "Text embedding file")
      ->check(CLI::ExistingFile);
  c_train->add_option("--dim", train.dim)->check(CLI::PositiveNumber);
  c_train->add_option("--hidden", train.cfg.hidden_size)->check(CLI::PositiveNumber);
  c_train->add_option("--epochs", train.cfg.epochs)->check(CLI::PositiveNumber);
  c_train->add_option("--lr", train.cfg.learning_rate)->check(CLI::PositiveNumber);
  c_train->add_option("--clip", train.cfg.clip_norm)->check(CLI::PositiveNumber);
  c_train->add_option("--patience", train.cfg.patience, "0 disables early stopping");
  c_train->add_option("--seed", train.cfg.seed);
  c_train->add_option("--model", train.model, "Output model file")->required();
  c_train->add_option("--history", train.history, "Per-epoch CSV log");

  TagOptions tag;
  auto* c_tag = app.add_subcommand("tag", "Extract terms with a trained tagger");
  c_tag->add_option("--model", tag.model)->required()->check(CLI::ExistingFile);
  c_tag->add_option("--corpus", tag.corpus)->required()->check(CLI::ExistingFile);
  c_tag->add_option("--out", tag.out)->required();

  BaselineOptions baseline;
  auto* c_base = app.add_subcommand("baseline", "Negation-aware dictionary extraction");
  c_base->add_option("--corpus", baseline.corpus)->required()->check(CLI::ExistingFile);
  c_base->add_option("--lexicon", baseline.lexicon)->check(CLI::ExistingFile);
  c_base->add_option("--negation-cues", baseline.cues)->check(CLI::ExistingFile);
  c_base->add_option("--negation-terminators", baseline.terminators)
      ->check(CLI::ExistingFile);
  c_base->add_flag("--no-negation", baseline.no_negation, "Plain dictionary lookup");
  c_base->add_option("--out", baseline.out)->required();

  ImportOptions import;
  auto* c_import = app.add_subcommand("import", "Convert external annotator output");
  c_import->add_option("--input", import.input)->required()->check(CLI::ExistingFile);
  c_import->add_option("--format", import.format)->check(CLI::IsMember({"jsonl", "mti_batch"}));
  c_import->add_option("--system-name", import.system_name);
  c_import->add_option("--out", import.out)->required();

  AnnotateOptions annotate;
  auto* c_annot = app.add_subcommand("annotate", "Query an HTTP annotation endpoint");
  c_annot->add_option("--url", annotate.url)->required();
  c_annot->add_option("--corpus", annotate.corpus)->required()->check(CLI::ExistingFile);
  c_annot->add_option("--out", annotate.out)->required();
  c_annot->add_option("--timeout", annotate.timeout, "Seconds")->check(CLI::PositiveNumber);
  c_annot->add_option("--retries", annotate.retries)->check(CLI::NonNegativeNumber);
  c_annot->add_option("--parallel", annotate.parallel, "Max in-flight requests")
      ->check(CLI::PositiveNumber);
  c_annot->add_option("--backoff-ms", annotate.backoff_ms)->check(CLI::NonNegativeNumber);

  EvalOptions eval;
  auto* c_eval = app.add_subcommand("eval", "Score predictions against gold annotations");
  AddEvalFlags(c_eval, eval, 1);

  EvalOptions compare;
  auto* c_compare = app.add_subcommand("compare", "Score several systems side by side");
  AddEvalFlags(c_compare, compare, 2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*c_ingest) {
      if (ingest.txt.empty() && ingest.jsonl.empty()) {
        err << "ingest: give --txt and/or --jsonl inputs\n";
        return kExitUsage;
      }
      RunIngest(ingest, out);
    } else if (*c_split) {
      RunSplit(split, out);
    } else if (*c_label) {
      RunLabel(label, out);
    } else if (*c_train) {
      RunTrain(train, out);
    } else if (*c_tag) {
      RunTag(tag, out);
    } else if (*c_base) {
      RunBaseline(baseline, out);
    } else if (*c_import) {
      RunImport(import, out);
    } else if (*c_annot) {
      RunAnnotate(annotate, out, err);
    } else if (*c_eval) {
      RunEval(eval, out);
    } else if (*c_compare) {
      RunEval(compare, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "radex: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "radex: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace radex
