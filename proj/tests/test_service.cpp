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


#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "scenarios.hpp"
#include "vizsynth/json_io.hpp"
#include "vizsynth/service.hpp"

namespace vizsynth {
namespace {

using nlohmann::json;

ServiceConfig fast_config() {
  ServiceConfig cfg;
  cfg.search.max_depth = 2;
  cfg.search.worker_budgets = {std::nullopt};
  return cfg;
}

json city_table_json() { return table_to_json(testing::read_table("ny_sf.csv")); }

json floating_bar_request() {
  return {{"table", table_to_json(testing::read_table("temps.csv"))},
          {"elements", json::array({element_to_json(testing::floating_bar())})}};
}

TEST(Service, HealthReportsVersion) {
  SynthesisService s(fast_config());
  auto r = s.health();
  EXPECT_EQ(r.status, 200);
  json doc = json::parse(r.body);
  EXPECT_EQ(doc["status"], "ok");
  EXPECT_EQ(doc["version"], service_version());
  EXPECT_FALSE(service_version().empty());
}

TEST(Service, TransformComputesDifference) {
  SynthesisService s(fast_config());
  json req = {{"table", city_table_json()},
              {"program", "mutate(Diff = `New York` - `San Francisco`)"}};
  auto r = s.transform(req.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  Table out = table_from_json(json::parse(r.body));
  ASSERT_EQ(out.column_names().back(), "Diff");
  EXPECT_NEAR(std::get<double>(out.at(0, 3)), 63.4 - 62.7, 1e-9);
}

TEST(Service, TransformAcceptsCsvText) {
  SynthesisService s(fast_config());
  const std::string csv = testing::read_file(testing::data_path("temps.csv"));
  auto r = s.transform(json{{"table", csv}, {"program", "identity()"}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(table_from_json(json::parse(r.body)), testing::read_table("temps.csv"));
}

TEST(Service, TransformErrors) {
  SynthesisService s(fast_config());
  auto missing = s.transform(
      json{{"table", city_table_json()}, {"program", "select(Date, Boston)"}}.dump());
  EXPECT_EQ(missing.status, 422);
  json err = json::parse(missing.body)["error"];
  EXPECT_EQ(err["kind"], "SchemaError");
  EXPECT_EQ(err["op_index"], 0);

  auto bad_syntax = s.transform(json{{"table", city_table_json()}, {"program", "select("}}.dump());
  EXPECT_EQ(bad_syntax.status, 400);
  EXPECT_EQ(json::parse(bad_syntax.body)["error"]["path"], "program");

  EXPECT_EQ(s.transform("{not json").status, 400);
  EXPECT_EQ(s.transform("[1,2]").status, 400);
  auto no_table = s.transform(json{{"program", "identity()"}}.dump());
  EXPECT_EQ(no_table.status, 400);
  EXPECT_EQ(json::parse(no_table.body)["error"]["path"], "table");
}

TEST(Service, SynthesizeRanksPivotFirst) {
  SynthesisService s(fast_config());
  auto r = s.synthesize(floating_bar_request().dump());
  ASSERT_EQ(r.status, 200) << r.body;
  json doc = json::parse(r.body);
  ASSERT_FALSE(doc["candidates"].empty());
  EXPECT_EQ(doc["candidates"][0]["programs"][0], "pivot_wider(names_from = Type, values_from = Temp)");
  EXPECT_TRUE(doc.contains("stats"));
  EXPECT_FALSE(doc.contains("no_candidate_reason"));
}

TEST(Service, SynthesizeHonoursRequestConfig) {
  SynthesisService s(fast_config());
  json req = floating_bar_request();
  req["config"] = {{"max_candidates", 1}};
  json doc = json::parse(s.synthesize(req.dump()).body);
  EXPECT_EQ(doc["candidates"].size(), 1u);
  req["config"] = {{"max_depth", 0}};
  EXPECT_EQ(s.synthesize(req.dump()).status, 400);
}

TEST(Service, SynthesizeValidation) {
  SynthesisService s(fast_config());
  json req = floating_bar_request();
  req["elements"] = json::array();
  auto empty = s.synthesize(req.dump());
  EXPECT_EQ(empty.status, 400);
  EXPECT_EQ(json::parse(empty.body)["error"]["path"], "elements");

  req = floating_bar_request();
  req["elements"][0]["props"]["y"] = json::array();
  auto bad_prop = s.synthesize(req.dump());
  EXPECT_EQ(bad_prop.status, 400);
  EXPECT_EQ(json::parse(bad_prop.body)["error"]["path"], "elements[0].props.y");

  req = floating_bar_request();
  json elements = json::array();
  for (const char* color : {"a", "b", "c", "d", "e", "f"}) {
    elements.push_back({{"kind", "point"}, {"props", {{"x", 1}, {"y", 2}, {"color", color}}}});
    elements.push_back({{"kind", "bar"}, {"props", {{"x", color}, {"y", 2}}}});
    elements.push_back({{"kind", "line"},
                        {"props", {{"x1", 1}, {"y1", 2}, {"x2", 3}, {"y2", 4}, {"color", color}}}});
  }
  elements.push_back({{"kind", "area"}, {"props", {{"x", 1}, {"y", 2}}}});
  req["elements"] = elements;
  auto too_many = s.synthesize(req.dump());
  EXPECT_EQ(too_many.status, 422) << too_many.body;
  EXPECT_EQ(json::parse(too_many.body)["error"]["kind"], "TooManyLayers");
}

TEST(Service, UnsatisfiableExampleReturnsReason) {
  SynthesisService s(fast_config());
  json req = floating_bar_request();
  req["elements"][0]["props"]["x"] = "nowhere";
  auto r = s.synthesize(req.dump());
  ASSERT_EQ(r.status, 200);
  json doc = json::parse(r.body);
  EXPECT_TRUE(doc["candidates"].empty());
  EXPECT_TRUE(doc["no_candidate_reason"].is_string());
}

TEST(Service, StreamEndsWithFinalList) {
  SynthesisService s(fast_config());
  std::vector<json> events;
  auto r = s.synthesize_stream(floating_bar_request().dump(),
                               [&](const std::string& line) {
                                 ASSERT_EQ(line.back(), '\n');
                                 events.push_back(json::parse(line));
                               });
  EXPECT_EQ(r.status, 200);
  ASSERT_GE(events.size(), 2u);
  EXPECT_EQ(events.back()["type"], "done");
  std::set<std::string> streamed;
  for (std::size_t i = 0; i + 1 < events.size(); ++i) {
    EXPECT_EQ(events[i]["type"], "candidate");
    EXPECT_TRUE(streamed.insert(events[i]["candidate"]["id"].get<std::string>()).second);
  }
  for (const auto& c : events.back()["candidates"]) {
    EXPECT_TRUE(streamed.count(c["id"].get<std::string>()));
  }
  EXPECT_EQ(events.back()["candidates"], json::parse(s.synthesize(floating_bar_request().dump()).body)["candidates"]);
}

TEST(Service, StreamValidationErrorWritesNothing) {
  SynthesisService s(fast_config());
  int lines = 0;
  auto r = s.synthesize_stream("{}", [&](const std::string&) { ++lines; });
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(lines, 0);
}

TEST(Service, ConfigFromEnvironment) {
  setenv("SYNTH_PORT", "9123", 1);
  setenv("SYNTH_MAX_DEPTH", "2", 1);
  setenv("SYNTH_MAX_CANDIDATES", "7", 1);
  setenv("SYNTH_BUDGETS_MS", "5000, inf", 1);
  auto cfg = ServiceConfig::from_env();
  EXPECT_EQ(cfg.port, 9123);
  EXPECT_EQ(cfg.search.max_depth, 2u);
  EXPECT_EQ(cfg.search.max_candidates, 7u);
  ASSERT_EQ(cfg.search.worker_budgets.size(), 2u);
  EXPECT_EQ(cfg.search.worker_budgets[0], std::chrono::milliseconds(5000));
  EXPECT_FALSE(cfg.search.worker_budgets[1].has_value());
  setenv("SYNTH_BUDGETS_MS", "5000,soon", 1);
  EXPECT_THROW(ServiceConfig::from_env(), std::invalid_argument);
  setenv("SYNTH_BUDGETS_MS", "", 1);
  setenv("SYNTH_MAX_DEPTH", "-1", 1);
  EXPECT_THROW(ServiceConfig::from_env(), std::invalid_argument);
  for (const char* v : {"SYNTH_PORT", "SYNTH_MAX_DEPTH", "SYNTH_MAX_CANDIDATES", "SYNTH_BUDGETS_MS"}) {
    unsetenv(v);
  }
  EXPECT_EQ(ServiceConfig::from_env().port, 8080);
}

TEST(Service, LiveEndpoints) {
  ServiceConfig cfg = fast_config();
  cfg.host = "127.0.0.1";
  SynthesisService s(cfg);
  const int port = s.bind_ephemeral();
  if (port <= 0) GTEST_SKIP() << "cannot bind a local port";
  std::thread server([&] { s.listen_after_bind(); });

  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(60, 0);
  auto health = client.Get("/api/health");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  EXPECT_EQ(health->get_header_value("Access-Control-Allow-Origin"), "*");

  auto synth = client.Post("/api/synthesize", floating_bar_request().dump(), "application/json");
  ASSERT_TRUE(synth);
  EXPECT_EQ(synth->status, 200);
  EXPECT_EQ(json::parse(synth->body)["candidates"],
            json::parse(s.synthesize(floating_bar_request().dump()).body)["candidates"]);

  auto stream = client.Post("/api/synthesize?stream=1", floating_bar_request().dump(), "application/json");
  ASSERT_TRUE(stream);
  EXPECT_EQ(stream->status, 200);
  EXPECT_NE(stream->get_header_value("Content-Type").find("ndjson"), std::string::npos);
  std::string last;
  std::istringstream lines(stream->body);
  for (std::string line; std::getline(lines, line);) {
    if (!line.empty()) last = line;
  }
  EXPECT_EQ(json::parse(last)["type"], "done");

  auto bad = client.Post("/api/synthesize?stream=1", "{}", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);

  auto transform = client.Post(
      "/api/transform",
      json{{"table", city_table_json()}, {"program", "select(Date, Boston)"}}.dump(),
      "application/json");
  ASSERT_TRUE(transform);
  EXPECT_EQ(transform->status, 422);

  s.stop();
  server.join();
}

}  // namespace
}  // namespace vizsynth
