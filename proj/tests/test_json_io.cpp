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

#include <random>

#include "random_instances.hpp"
#include "vizsynth/error.hpp"
#include "vizsynth/json_io.hpp"

namespace vizsynth {
namespace {

using nlohmann::json;

std::pair<ErrorCode, std::string> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.code(), e.path()};
  }
  ADD_FAILURE() << "expected vizsynth::Error";
  return {ErrorCode::ParseError, ""};
}

TEST(TableJson, RoundTrip) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 100; ++i) {
    Table t = testing::random_table(rng, 6, 8);
    EXPECT_EQ(table_from_json(table_to_json(t)), t);
  }
}

TEST(TableJson, TypesInferredWhenOmitted) {
  json j = json::parse(R"({"columns":[{"name":"Date"},{"name":"NY"},{"name":"k","type":"nominal"}],
                           "rows":[["2011-10-01",63.4,1],["2011-10-05","64.2",2]]})");
  Table t = table_from_json(j);
  EXPECT_EQ(t.column(0).type, ColumnType::Temporal);
  EXPECT_EQ(t.column(1).type, ColumnType::Quantitative);
  EXPECT_EQ(t.column(2).type, ColumnType::Nominal);
  EXPECT_DOUBLE_EQ(std::get<double>(t.at(1, 1)), 64.2);
}

TEST(TableJson, Errors) {
  EXPECT_EQ(error_of([] { table_from_json(json::parse(R"({"rows":[]})")); }),
            std::make_pair(ErrorCode::MalformedJson, std::string("table.columns")));
  EXPECT_EQ(error_of([] { table_from_json(json::parse(R"({"columns":[{"name":"a"}],"rows":[]})")); }).first,
            ErrorCode::EmptyTable);
  EXPECT_EQ(error_of([] { table_from_json(json::parse(R"({"columns":[{"name":"a"}],"rows":[[1,2]]})")); }),
            std::make_pair(ErrorCode::MalformedJson, std::string("table.rows[0]")));
  EXPECT_EQ(
      error_of([] { table_from_json(json::parse(R"({"columns":[{"name":"a","type":"ordinal"}],"rows":[[1]]})")); })
          .first,
      ErrorCode::MalformedJson);
}

TEST(ElementJson, NumbersAndStrings) {
  auto e = element_from_json(json::parse(R"({"kind":"bar","props":{"x":"09-05","y":64.4,"y2":87.8}})"));
  EXPECT_EQ(e.kind, ElementKind::Bar);
  EXPECT_EQ(e.props.at("x"), "09-05");
  EXPECT_EQ(e.props.at("y"), "64.4");
  EXPECT_EQ(element_from_json(element_to_json(e)), e);
}

TEST(ElementJson, ErrorsCarryPaths) {
  EXPECT_EQ(error_of([] { elements_from_json(json::array()); }).first, ErrorCode::MalformedJson);
  EXPECT_EQ(error_of([] { elements_from_json(json::parse(R"([{"kind":"pie","props":{}}])")); }).second,
            "elements[0].kind");
  auto null_prop = error_of([] {
    elements_from_json(json::parse(R"([{"kind":"point","props":{"x":1,"y":null}}])"));
  });
  EXPECT_EQ(null_prop.second, "elements[0].props.y");
  auto missing = error_of([] { elements_from_json(json::parse(R"([{"kind":"point","props":{"x":1}}])")); });
  EXPECT_EQ(missing.first, ErrorCode::InvalidElement);
  EXPECT_EQ(missing.second.rfind("elements[0]", 0), 0u);
}

TEST(LayerSketchJson, Shape) {
  auto sketches = decompile(std::vector<ExampleElement>{
      {ElementKind::Bar, {{"x", "2011-10-01"}, {"y", "62.7"}, {"y2", "63.4"}, {"color", "0.7"}}}});
  json j = layer_sketch_to_json(sketches.front());
  EXPECT_EQ(j["mark"], "bar");
  EXPECT_EQ(j["channel_order"], json::parse(R"(["x","y","y2","color"])"));
  EXPECT_EQ(j["encodings"]["y2"], "C3");
  EXPECT_EQ(j["example_table"]["rows"], json::parse(R"([["2011-10-01",62.7,63.4,0.7]])"));
}

TEST(ProgramJson, RoundTripsEveryOperator) {
  TransformProgram p{{PivotLonger{{"New York", "San Francisco"}, "City", "Temperature"},
                      PivotWider{"Type", "Temp"},
                      Select{{"x", "y"}},
                      Filter{"Type", CompareOp::Ne, std::string("Low")},
                      Filter{"Date", CompareOp::Lt, *Date::parse("2012-01-01")},
                      Filter{"v", CompareOp::Ge, 2.5},
                      GroupSummarise{{"g"}, AggFunc::Count, "v", "count_v"},
                      CumSum{{}, "v"},
                      Mutate{"Diff", "a", ArithOp::Sub, std::string("b")},
                      Mutate{"Product", "a", ArithOp::Mul, 3.0},
                      Separate{"d", "-", "d_1", "d_2"},
                      Unite{"a", "b", "_", "a_b"}}};
  EXPECT_EQ(program_from_json(program_to_json(p)), p);
  EXPECT_EQ(program_to_json(TransformProgram{}), json::array());
}

TEST(ProgramJson, Errors) {
  EXPECT_EQ(error_of([] { program_from_json(json::parse(R"([{"op":"explode"}])")); }).second, "program[0].op");
  EXPECT_EQ(error_of([] { program_from_json(json::parse(R"([{"op":"select"}])")); }).second,
            "program[0].cols");
  EXPECT_EQ(error_of([] { program_from_json(json::parse(R"({"op":"select"})")); }).first,
            ErrorCode::MalformedJson);
}

TEST(ConfigJson, Overrides) {
  SearchConfig base;
  auto cfg = config_from_json(
      json::parse(R"({"max_depth":2,"max_candidates":5,"budgets_ms":[100,null],"rel_tol":0.01,"memoize":false})"),
      base);
  EXPECT_EQ(cfg.max_depth, 2u);
  EXPECT_EQ(cfg.max_candidates, 5u);
  ASSERT_EQ(cfg.worker_budgets.size(), 2u);
  EXPECT_EQ(cfg.worker_budgets[0], std::chrono::milliseconds(100));
  EXPECT_FALSE(cfg.worker_budgets[1]);
  EXPECT_DOUBLE_EQ(cfg.rel_tol, 0.01);
  EXPECT_FALSE(cfg.memoize);
  EXPECT_EQ(config_from_json(json(), base).max_depth, base.max_depth);
}

TEST(ConfigJson, Errors) {
  SearchConfig base;
  EXPECT_EQ(error_of([&] { config_from_json(json::parse(R"({"max_depth":0})"), base); }).second,
            "config.max_depth");
  EXPECT_EQ(error_of([&] { config_from_json(json::parse(R"({"speed":1})"), base); }).second, "config.speed");
  EXPECT_EQ(error_of([&] { config_from_json(json::parse(R"({"budgets_ms":[20,5]})"), base); }).first,
            ErrorCode::MalformedJson);
  EXPECT_EQ(error_of([&] { config_from_json(json::parse(R"({"budgets_ms":["x"]})"), base); }).second,
            "config.budgets_ms[0]");
}

TEST(ResponseJson, Shape) {
  SynthesisOutput out;
  out.stats.workers.resize(2);
  out.stats.workers[0].elapsed = std::chrono::milliseconds(12);
  out.no_candidate_reason = "nothing";
  json j = synthesis_response_to_json(out);
  EXPECT_EQ(j["candidates"], json::array());
  EXPECT_EQ(j["stats"]["elapsed_ms"], json::parse("[12,0]"));
  EXPECT_EQ(j["stats"]["truncated"], false);
  EXPECT_EQ(j["no_candidate_reason"], "nothing");
  for (const char* k : {"sketches_explored", "pruned_count"}) EXPECT_TRUE(j["stats"].contains(k));
}

}  // namespace
}  // namespace vizsynth
