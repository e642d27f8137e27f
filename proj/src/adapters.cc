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

#include "radex/adapters.h"

#include <atomic>
#include <exception>
#include <istream>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "io_util.h"
#include "json.hpp"
#include "radex/textprep.h"

namespace radex {

using json = nlohmann::json;

ExternalFormat ExternalFormat::FromName(const std::string& name) {
  ExternalFormat f;
  if (name == "jsonl") {
    f.kind = Kind::kJsonl;
  } else if (name == "mti_batch") {
    f.kind = Kind::kMtiBatch;
  } else {
    throw Error(ErrorKind::kUnknownFormat, "unknown import format '" + name + "'");
  }
  return f;
}

PredictionSet ReadMtiBatch(std::istream& in, std::string system_name) {
  PredictionSet preds;
  preds.system_name = std::move(system_name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view trimmed = internal::Trim(line);
    if (trimmed.empty() || trimmed.front() == '*') continue;
    std::size_t bar = trimmed.find('|');
    if (bar == std::string_view::npos) {
      throw Error(ErrorKind::kParseError, "expected ID|Term", line_no);
    }
    std::string_view id = internal::Trim(trimmed.substr(0, bar));
    std::string_view rest = trimmed.substr(bar + 1);
    std::string_view term = internal::Trim(rest.substr(0, rest.find('|')));
    if (id.empty() || term.empty()) {
      throw Error(ErrorKind::kParseError, "empty ID or term", line_no);
    }
    preds.predictions[std::string(id)].emplace_back(term);
  }
  return preds;
}

PredictionSet ImportPredictions(const std::filesystem::path& path,
                                const ExternalFormat& format,
                                std::string system_name) {
  if (system_name.empty()) system_name = path.stem().string();
  std::ifstream in = internal::OpenInput(path);
  switch (format.kind) {
    case ExternalFormat::Kind::kJsonl:
      return ReadPredictionsJsonl(in, std::move(system_name));
    case ExternalFormat::Kind::kMtiBatch:
      return ReadMtiBatch(in, std::move(system_name));
  }
  throw Error(ErrorKind::kUnknownFormat, "unhandled import format");
}

std::vector<std::string> ConvertRawMesh(const std::string& raw,
                                        const Lexicon& known_multiword) {
  char delimiter = raw.find(';') != std::string::npos ? ';' : ',';
  std::vector<std::string> fragments;
  std::size_t start = 0;
  while (start <= raw.size()) {
    std::size_t end = raw.find(delimiter, start);
    if (end == std::string::npos) end = raw.size();
    std::string_view piece = internal::Trim(std::string_view(raw).substr(start, end - start));
    if (!piece.empty()) fragments.emplace_back(piece);
    start = end + 1;
  }

  auto normalized = [](const std::string& text) {
    std::string out;
    for (const Token& t : Tokenize(text)) {
      if (!out.empty()) out.push_back(' ');
      out += t.norm;
    }
    return out;
  };

  std::vector<std::string> terms;
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (i + 1 < fragments.size()) {
      std::string inverted = fragments[i + 1] + " " + fragments[i];
      if (known_multiword.Contains(normalized(inverted))) {
        terms.push_back(std::move(inverted));
        ++i;
        continue;
      }
    }
    terms.push_back(fragments[i]);
  }
  return terms;
}

void AnnotatorEndpoint::Validate() const {
  if (url.empty()) throw Error(ErrorKind::kInvalidArgument, "endpoint url is empty");
  if (!(timeout_seconds > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "timeout must be > 0");
  }
  if (max_retries < 0) throw Error(ErrorKind::kInvalidArgument, "retries must be >= 0");
  if (max_in_flight < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max in-flight requests must be >= 1");
  }
}

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "endpoint url needs a scheme: " + url);
  }
  std::size_t slash = url.find('/', scheme_end + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

struct Outcome {
  std::vector<std::string> terms;
  bool ok = false;
  std::string warning;
};

std::vector<std::string> ParseTerms(const std::string& body, const std::string& id) {
  json response;
  try {
    response = json::parse(body);
  } catch (const json::exception&) {
    throw Error(ErrorKind::kMalformedResponse, "response for '" + id + "' is not JSON");
  }
  if (!response.is_object() || !response.contains("terms") ||
      !response["terms"].is_array()) {
    throw Error(ErrorKind::kMalformedResponse,
                "response for '" + id + "' lacks a terms array");
  }
  std::vector<std::string> terms;
  for (const json& t : response["terms"]) {
    if (!t.is_string()) {
      throw Error(ErrorKind::kMalformedResponse,
                  "response for '" + id + "' has a non-string term");
    }
    terms.push_back(t.get<std::string>());
  }
  return terms;
}

Outcome AnnotateOne(httplib::Client& client, const std::string& path,
                    const AnnotatorEndpoint& endpoint, const Report& report) {
  json request = {{"id", report.id},
                  {"text", report.findings + "\n" + report.impression}};
  const std::string body = request.dump();
  std::string last_problem;
  for (int attempt = 0; attempt <= endpoint.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(endpoint.backoff_base * (1LL << (attempt - 1)));
    }
    httplib::Result res = client.Post(path, body, "application/json");
    if (!res) {
      last_problem = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) return {ParseTerms(res->body, report.id), true, {}};
    last_problem = "HTTP " + std::to_string(res->status);
    if (res->status >= 400 && res->status < 500) break;
  }
  return {{}, false, "report '" + report.id + "' failed: " + last_problem};
}

}  // namespace

AnnotationResult AnnotateRemote(const AnnotatorEndpoint& endpoint,
                                const Corpus& corpus, std::string system_name) {
  endpoint.Validate();
  ParsedUrl url = SplitUrl(endpoint.url);
  const std::vector<Report>& reports = corpus.reports();

  std::vector<Outcome> outcomes(reports.size());
  std::vector<std::exception_ptr> errors(reports.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    httplib::Client client(url.origin);
    auto seconds = static_cast<time_t>(endpoint.timeout_seconds);
    auto micros = static_cast<time_t>((endpoint.timeout_seconds - seconds) * 1e6);
    client.set_connection_timeout(seconds, micros);
    client.set_read_timeout(seconds, micros);
    client.set_write_timeout(seconds, micros);
    if (endpoint.auth_token) client.set_bearer_token_auth(*endpoint.auth_token);
    for (std::size_t i = next++; i < reports.size(); i = next++) {
      try {
        outcomes[i] = AnnotateOne(client, url.path, endpoint, reports[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  std::size_t n_workers = std::min(endpoint.max_in_flight, std::max<std::size_t>(1, reports.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  AnnotationResult result;
  result.predictions.system_name = std::move(system_name);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    result.predictions.predictions[reports[i].id] = std::move(outcomes[i].terms);
    if (!outcomes[i].ok) {
      result.failed_ids.push_back(reports[i].id);
      result.warnings.push_back(std::move(outcomes[i].warning));
    }
  }
  if (!reports.empty() && result.failed_ids.size() == reports.size()) {
    throw EndpointUnreachable("all " + std::to_string(reports.size()) +
                                  " reports failed against " + endpoint.url,
                              std::move(result));
  }
  return result;
}

}  // namespace radex
