// Copyright 2026 The vizsynth Authors.
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

#include "vizsynth/service.hpp"

#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "vizsynth/csv.hpp"
#include "vizsynth/error.hpp"
#include "vizsynth/json_io.hpp"
#include "vizsynth/pipeline.hpp"

#ifndef VIZSYNTH_VERSION
#define VIZSYNTH_VERSION "0.0.0"
#endif

namespace vizsynth {

using nlohmann::json;

std::string service_version() { return VIZSYNTH_VERSION; }

namespace {

std::size_t env_positive(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  long long n = std::strtoll(v, &end, 10);
  if (*end != '\0' || n < 1) throw std::invalid_argument(std::string(name) + " must be a positive integer");
  return static_cast<std::size_t>(n);
}

struct ScopedSlot {
  explicit ScopedSlot(std::counting_semaphore<1024>& s) : sem(s) { sem.acquire(); }
  ~ScopedSlot() { sem.release(); }
  std::counting_semaphore<1024>& sem;
};

HttpResponse json_response(int status, const json& doc) {
  return {status, "application/json", doc.dump() + "\n"};
}

HttpResponse error_response(int status, std::string_view kind, const std::string& message,
                            const std::string& path = {},
                            std::optional<std::size_t> op_index = std::nullopt) {
  json err = {{"kind", kind}, {"message", message}};
  if (!path.empty()) err["path"] = path;
  if (op_index) err["op_index"] = *op_index;
  return json_response(status, {{"error", std::move(err)}});
}

HttpResponse error_response(const Error& e) {
  int status = 400;
  switch (e.code()) {
    case ErrorCode::TooManyLayers:
    case ErrorCode::InconsistentGroup:
      status = 422;
      break;
    case ErrorCode::SchemaError:
    case ErrorCode::TypeError:
    case ErrorCode::PivotCollision:
    case ErrorCode::DivisionByZero:
    case ErrorCode::AggregateError:
      status = e.op_index() ? 422 : 400;
      break;
    default:
      break;
  }
  return error_response(status, error_code_name(e.code()), e.what(), e.path(), e.op_index());
}

json parse_body(const std::string& body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedJson, "request body is not valid JSON");
  if (!doc.is_object()) throw Error(ErrorCode::MalformedJson, "request body must be an object");
  return doc;
}

Table request_table(const json& doc) {
  auto it = doc.find("table");
  if (it == doc.end()) throw Error(ErrorCode::MalformedJson, "table: missing").with_path("table");
  if (it->is_string()) {
    try {
      return load_csv(it->get<std::string>());
    } catch (Error& e) {
      e.with_path("table");
      throw;
    }
  }
  return table_from_json(*it, "table");
}

struct SynthesisRequest {
  Table table;
  std::vector<ExampleElement> elements;
  SearchConfig cfg;
  bool stream = false;
};

SynthesisRequest parse_synthesis_request(const std::string& body, const SearchConfig& defaults) {
  json doc = parse_body(body);
  SynthesisRequest req;
  req.table = request_table(doc);
  auto el = doc.find("elements");
  if (el == doc.end()) throw Error(ErrorCode::MalformedJson, "elements: missing").with_path("elements");
  req.elements = elements_from_json(*el, "elements");
  req.cfg = doc.contains("config") ? config_from_json(doc["config"], defaults, "config") : defaults;
  if (auto s = doc.find("stream"); s != doc.end()) {
    if (!s->is_boolean()) throw Error(ErrorCode::MalformedJson, "stream: expected a boolean").with_path("stream");
    req.stream = s->get<bool>();
  }
  // surface decompiler errors before any search starts
  decompile(req.elements);
  return req;
}

}  // namespace

ServiceConfig ServiceConfig::from_env() {
  ServiceConfig cfg;
  cfg.port = static_cast<int>(env_positive("SYNTH_PORT", static_cast<std::size_t>(cfg.port)));
  cfg.search.max_depth = env_positive("SYNTH_MAX_DEPTH", cfg.search.max_depth);
  cfg.search.max_candidates = env_positive("SYNTH_MAX_CANDIDATES", cfg.search.max_candidates);
  if (const char* v = std::getenv("SYNTH_BUDGETS_MS"); v && *v) {
    cfg.search.worker_budgets.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto t = std::string(trim(item));
      if (t == "inf") {
        cfg.search.worker_budgets.push_back(std::nullopt);
        continue;
      }
      char* end = nullptr;
      long long ms = std::strtoll(t.c_str(), &end, 10);
      if (t.empty() || *end != '\0' || ms < 1) {
        throw std::invalid_argument("SYNTH_BUDGETS_MS must be a comma list of positive integers or inf");
      }
      cfg.search.worker_budgets.push_back(std::chrono::milliseconds(ms));
    }
  }
  cfg.search.validate();
  return cfg;
}

struct SynthesisService::Server {
  httplib::Server http;
};

SynthesisService::SynthesisService(ServiceConfig cfg)
    : cfg_(std::move(cfg)),
      slots_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, std::min<std::size_t>(cfg_.max_concurrent, 1024)))),
      server_(std::make_unique<Server>()) {
  cfg_.search.validate();
  install_routes();
}

SynthesisService::~SynthesisService() { stop(); }

HttpResponse SynthesisService::health() const {
  return json_response(200, {{"status", "ok"}, {"version", service_version()}});
}

HttpResponse SynthesisService::transform(const std::string& body) const {
  try {
    json doc = parse_body(body);
    Table table = request_table(doc);
    auto it = doc.find("program");
    if (it == doc.end() || !it->is_string()) {
      throw Error(ErrorCode::MalformedJson, "program: expected a serialized program").with_path("program");
    }
    TransformProgram prog;
    try {
      prog = parse_program(it->get<std::string>());
    } catch (Error& e) {
      e.with_path("program");
      throw;
    }
    return json_response(200, table_to_json(eval(prog, table)));
  } catch (const Error& e) {
    return error_response(e);
  }
}

HttpResponse SynthesisService::synthesize(const std::string& body) {
  try {
    auto req = parse_synthesis_request(body, cfg_.search);
    ScopedSlot slot(slots_);
    auto out = vizsynth::synthesize(req.table, req.elements, req.cfg);
    return json_response(200, synthesis_response_to_json(out));
  } catch (const Error& e) {
    return error_response(e);
  }
}

HttpResponse SynthesisService::synthesize_stream(
    const std::string& body, const std::function<void(const std::string&)>& write_line) {
  SynthesisRequest req;
  try {
    req = parse_synthesis_request(body, cfg_.search);
  } catch (const Error& e) {
    return error_response(e);
  }
  ScopedSlot slot(slots_);
  std::set<std::string> sent;
  auto emit = [&](const std::vector<Candidate>& cands) {
    for (const auto& c : cands) {
      if (!sent.insert(c.id).second) continue;
      write_line(json{{"type", "candidate"}, {"candidate", candidate_to_json(c)}}.dump() + "\n");
    }
  };
  auto out = vizsynth::synthesize(req.table, req.elements, req.cfg, emit);
  emit(out.candidates);
  json done = synthesis_response_to_json(out);
  done["type"] = "done";
  write_line(done.dump() + "\n");
  return {200, "application/x-ndjson", {}};
}

void SynthesisService::install_routes() {
  auto& http = server_->http;
  http.set_payload_max_length(kMaxBodyBytes);
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  http.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  http.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
  http.Post("/api/transform", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, transform(req.body));
  });
  http.Post("/api/synthesize", [this, send](const httplib::Request& req, httplib::Response& res) {
    bool stream = req.has_param("stream") && req.get_param_value("stream") != "0";
    if (!stream) {
      json doc = json::parse(req.body, nullptr, false);
      stream = doc.is_object() && doc.value("stream", false) == true;
    }
    if (!stream) {
      send(res, synthesize(req.body));
      return;
    }
    // Validate up front so that errors keep their status code; the search
    // itself runs inside the chunked provider.
    try {
      parse_synthesis_request(req.body, cfg_.search);
    } catch (const Error& e) {
      send(res, error_response(e));
      return;
    }
    res.status = 200;
    std::string body = req.body;
    res.set_chunked_content_provider(
        "application/x-ndjson", [this, body](std::size_t, httplib::DataSink& sink) {
          synthesize_stream(body, [&](const std::string& line) { sink.write(line.data(), line.size()); });
          sink.done();
          return true;
        });
  });
  http.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error_response(500, "InternalError", what));
  });
}

bool SynthesisService::serve() { return server_->http.listen(cfg_.host, cfg_.port); }

int SynthesisService::bind_ephemeral() { return server_->http.bind_to_any_port(cfg_.host); }

bool SynthesisService::listen_after_bind() { return server_->http.listen_after_bind(); }

void SynthesisService::stop() {
  if (server_ && server_->http.is_running()) server_->http.stop();
}

}  // namespace vizsynth
