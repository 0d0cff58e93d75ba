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

// HTTP front end. Handlers are plain functions over request bodies so they
// can be exercised without a socket; serve() binds them to cpp-httplib.
//
//   POST /api/synthesize  {table, elements, config?, stream?}
//   POST /api/transform   {table, program}
//   GET  /api/health

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <semaphore>
#include <string>

#include "vizsynth/synthesizer.hpp"

namespace vizsynth {

inline constexpr std::size_t kMaxBodyBytes = 5 * 1024 * 1024;

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::size_t max_concurrent = 2;
  SearchConfig search;

  /// Reads SYNTH_PORT, SYNTH_MAX_DEPTH, SYNTH_BUDGETS_MS (comma list, "inf"
  /// for no deadline) and SYNTH_MAX_CANDIDATES. Throws std::invalid_argument
  /// on malformed values.
  static ServiceConfig from_env();
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

std::string service_version();

class SynthesisService {
 public:
  explicit SynthesisService(ServiceConfig cfg);
  ~SynthesisService();

  HttpResponse health() const;
  HttpResponse transform(const std::string& body) const;
  /// Non-streaming synthesis. Blocks while the concurrency limit is reached.
  HttpResponse synthesize(const std::string& body);

  /// Streaming synthesis. Validation failures come back as a regular error
  /// response and `write_line` is never called. Otherwise returns status 200
  /// after writing NDJSON events: one {"type":"candidate"} per candidate as
  /// soon as it is known, then a {"type":"done"} event carrying the final
  /// ranked list.
  HttpResponse synthesize_stream(const std::string& body,
                                 const std::function<void(const std::string&)>& write_line);

  /// Binds and blocks until stop(). Returns false when the port cannot be bound.
  bool serve();
  /// Binds to an ephemeral port on host and returns it, or -1. Call
  /// listen_after_bind() to start serving.
  int bind_ephemeral();
  bool listen_after_bind();
  void stop();

  const ServiceConfig& config() const { return cfg_; }

 private:
  struct Server;
  void install_routes();

  ServiceConfig cfg_;
  std::counting_semaphore<1024> slots_;
  std::unique_ptr<Server> server_;
};

}  // namespace vizsynth
