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


// Acceptance run: one PASS/FAIL line per acceptance criterion. Exits nonzero
// when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle.hpp"
#include "random_instances.hpp"
#include "scenarios.hpp"
#include "vegalite_check.hpp"
#include "vizsynth/error.hpp"
#include "vizsynth/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vizsynth;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    if (!detail.empty()) detail += "; ";
    detail += why;
    pass = false;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

SearchConfig unbounded(std::size_t depth, std::size_t max_candidates) {
  SearchConfig cfg = SearchConfig::seedless();
  cfg.max_depth = depth;
  cfg.max_candidates = max_candidates;
  return cfg;
}

std::vector<std::string> ids(const std::vector<Candidate>& cands) {
  std::vector<std::string> out;
  for (const auto& c : cands) out.push_back(c.id + " " + programs_text(c));
  return out;
}

// Every encoding of the Date field that names a type must be temporal.
bool date_fields_temporal(const json& node) {
  if (node.is_object()) {
    if (node.contains("field") && node["field"] == "Date" && node.contains("type") &&
        node["type"] != "temporal") {
      return false;
    }
    for (const auto& [k, v] : node.items()) {
      if (k != "data" && !date_fields_temporal(v)) return false;
    }
  } else if (node.is_array()) {
    for (const auto& v : node) {
      if (!date_fields_temporal(v)) return false;
    }
  }
  return true;
}

// Criterion 1 ---------------------------------------------------------------

Outcome floating_bar_golden() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("vizsynth_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  const std::string cmd = std::string(VIZSYNTH_CLI) + " synth '" + testing::data_path("floating_bar_task.json") +
                          "' --out '" + dir.string() + "' --seedless > /dev/null 2>&1";
  const auto t0 = Clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = seconds_since(t0);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    o.fail("CLI exited with status " + std::to_string(status));
    return o;
  }
  const std::string programs = testing::read_file((dir / "programs.txt").string());
  const std::string first = programs.substr(0, programs.find('\n'));
  if (first != "pivot_wider(names_from = Type, values_from = Temp)") o.fail("top program is " + first);
  if (testing::read_file((dir / "candidate_1.vl.json").string()) !=
      testing::read_file(testing::data_path("floating_bar.vl.json"))) {
    o.fail("candidate_1.vl.json differs from the golden file");
  }
  fs::remove_all(dir);

  Table input = testing::read_table("temps.csv");
  std::vector<ExampleElement> els = {testing::floating_bar()};
  auto out = synthesize(input, els, SearchConfig::seedless());
  const Table expected =
      table_from_text({"Date", "Low", "High"}, {{"09-05", "64.4", "87.8"}, {"09-06", "53.6", "80.6"}});
  if (out.candidates.empty() || out.candidates[0].rendered[0] != expected) {
    o.fail("rendered table of the top candidate is not Date/Low/High");
  }
  if (secs >= 2.0) o.fail("took " + fmt_seconds(secs));
  if (o.pass) o.detail = "top program pivot_wider(Type, Temp), golden match, " + fmt_seconds(secs);
  return o;
}

// Criterion 2 ---------------------------------------------------------------

std::vector<Candidate> criterion2_candidates;

Outcome layered_scenario() {
  Outcome o;
  Table input = testing::read_table("ny_sf.csv");

  std::vector<ExampleElement> line = {testing::city_line()};
  auto t0 = Clock::now();
  auto single = synthesize(input, line, unbounded(3, 200));
  const double line_secs = seconds_since(t0);
  const auto ny = testing::new_york_points(input), both = testing::both_city_points(input);
  bool only_ny = false, both_cities = false;
  for (const auto& c : single.candidates) {
    const auto pts = testing::line_points(c, 0);
    only_ny = only_ny || pts == ny;
    if (pts == both && c.programs[0].ops.size() == 1 &&
        std::holds_alternative<PivotLonger>(c.programs[0].ops[0])) {
      both_cities = true;
    }
  }
  if (!only_ny) o.fail("no New York only candidate");
  if (!both_cities) o.fail("no both-cities pivot_longer candidate");
  if (line_secs >= 10.0) o.fail("line example took " + fmt_seconds(line_secs));

  std::vector<ExampleElement> layered = {testing::city_line(), testing::diff_bar()};
  t0 = Clock::now();
  auto out = synthesize(input, layered, unbounded(3, 200));
  const double layered_secs = seconds_since(t0);
  bool diff_layer = false;
  if (out.sketches.size() != 2) {
    o.fail("expected 2 layers, got " + std::to_string(out.sketches.size()));
  } else {
    for (const auto& c : out.candidates) {
      if (c.programs[1] == testing::diff_program() &&
          testing::layer_fields(c, 1, out.sketches[1].channel_order) ==
              std::vector<std::string>{"Date", "San Francisco", "New York", "Diff"}) {
        diff_layer = true;
        break;
      }
    }
  }
  if (!diff_layer) o.fail("no layered candidate with the Diff layer");
  if (layered_secs >= 10.0) o.fail("layered example took " + fmt_seconds(layered_secs));

  criterion2_candidates = single.candidates;
  criterion2_candidates.insert(criterion2_candidates.end(), out.candidates.begin(), out.candidates.end());
  if (o.pass) {
    o.detail = "line " + fmt_seconds(line_secs) + " (" + std::to_string(single.candidates.size()) +
               " candidates), layered " + fmt_seconds(layered_secs) + " (" +
               std::to_string(out.candidates.size()) + " candidates)";
  }
  return o;
}

// Criterion 3 ---------------------------------------------------------------

struct PruneTally {
  std::size_t checks = 0;
  std::size_t rejections = 0;
  std::size_t violations = 0;
  std::string first_violation;
};

bool satisfies(const Table& t, const Table& example) {
  return !testing::oracle_mappings(t, example, kDefaultRelTol).empty();
}

bool rejects(std::span<const OpKind> rest, const Table& t, const Table& example) {
  return !feasible(abstract_eval(rest, t), example, kDefaultRelTol);
}

void check_pruning(const testing::Instance& inst, PruneTally& tally) {
  const Table& input = inst.input;
  const Table& example = inst.example;
  const ConstantPool pool = ConstantPool::build(input, example);
  auto record = [&](bool rejected, bool satisfiable, const std::string& where) {
    ++tally.checks;
    if (!rejected) return;
    ++tally.rejections;
    if (satisfiable) {
      if (tally.violations++ == 0) tally.first_violation = where;
    }
  };

  record(rejects({}, input, example), satisfies(input, example), "empty sketch");
  for (std::size_t k1 = 0; k1 < kNumOpKinds; ++k1) {
    const OpKind kind1 = static_cast<OpKind>(k1);
    bool any1 = false;
    std::vector<bool> any2(kNumOpKinds, false);
    for (const auto& op : instantiations(kind1, input, pool)) {
      Table t;
      try {
        t = vizsynth::apply(op, input);
      } catch (const Error&) {
        continue;
      }
      const bool s1 = satisfies(t, example);
      any1 = any1 || s1;
      const std::string prefix = serialize(TransformProgram{{op}});
      record(rejects({}, t, example), s1, prefix);
      for (std::size_t k2 = 0; k2 < kNumOpKinds; ++k2) {
        const OpKind rest[1] = {static_cast<OpKind>(k2)};
        bool s2 = false;
        testing::enumerate_completions(rest, t, pool, [&](const std::vector<TransformOp>&, const Table& out) {
          s2 = s2 || satisfies(out, example);
        });
        if (s2) any2[k2] = true;
        record(rejects(rest, t, example), s2, prefix + " then " + to_string(Sketch{{rest[0]}}));
      }
    }
    const OpKind one[1] = {kind1};
    record(rejects(one, input, example), any1, to_string(Sketch{{kind1}}));
    for (std::size_t k2 = 0; k2 < kNumOpKinds; ++k2) {
      const OpKind two[2] = {kind1, static_cast<OpKind>(k2)};
      record(rejects(two, input, example), any2[k2], to_string(Sketch{{two[0], two[1]}}));
    }
  }
}

Outcome pruning_soundness() {
  Outcome o;
  std::mt19937_64 rng(20261016);
  PruneTally tally;
  const auto t0 = Clock::now();
  for (int i = 0; i < 200; ++i) {
    // "example <= 2x4" read both ways: alternate 2 columns x 4 rows and 4 x 2.
    const bool wide = i % 2 == 1;
    auto inst = testing::random_instance(rng, 6, 8, wide ? 4 : 2, wide ? 2 : 4);
    const std::size_t before = tally.violations;
    check_pruning(inst, tally);
    if (tally.violations != before && before == 0) {
      tally.first_violation = "instance " + std::to_string(i) + ": " + tally.first_violation;
    }
  }
  if (tally.violations) {
    o.fail(std::to_string(tally.violations) + " unsound rejections, first at " + tally.first_violation);
  }
  if (tally.rejections == 0) o.fail("feasible() never rejected anything");
  if (o.pass) {
    o.detail = "200 instances, " + std::to_string(tally.checks) + " prefixes, " +
               std::to_string(tally.rejections) + " rejections, 0 violations, " +
               fmt_seconds(seconds_since(t0));
  }
  return o;
}

// Criterion 4 ---------------------------------------------------------------

LayerSketch sketch_for(const Table& example) {
  static const Channel channels[] = {Channel::X, Channel::Y, Channel::Color, Channel::Size};
  LayerSketch sk;
  sk.layer.mark = Mark::Point;
  sk.example_table = example;
  for (std::size_t i = 0; i < example.num_columns(); ++i) sk.channel_order.push_back(channels[i]);
  return sk;
}

Outcome bounded_completeness() {
  Outcome o;
  std::mt19937_64 rng(4242);
  const auto t0 = Clock::now();
  std::size_t classes = 0, mismatched = 0;
  for (int i = 0; i < 50; ++i) {
    auto inst = testing::random_instance(rng, 4, 5, 3, 2);
    auto expected = testing::oracle_classes(inst.input, inst.example, 2, kDefaultRelTol);
    auto sols = synthesize_layer(inst.input, sketch_for(inst.example), unbounded(2, 1000000));
    std::set<std::string> found;
    for (const auto& s : sols) found.insert(testing::solution_class(eval(s.program, inst.input), s.mapping));
    classes += expected.size();
    if (found != expected) {
      std::size_t missing = 0, extra = 0;
      for (const auto& c : expected) missing += !found.count(c);
      for (const auto& c : found) extra += !expected.count(c);
      if (mismatched++ == 0) {
        o.fail("instance " + std::to_string(i) + ": " + std::to_string(missing) + " missing, " +
               std::to_string(extra) + " extra classes");
      }
    }
  }
  if (mismatched) o.fail(std::to_string(mismatched) + " of 50 instances differ");
  if (classes == 0) o.fail("no instance had a solution");
  if (o.pass) {
    o.detail = "50 instances, " + std::to_string(classes) + " classes equal the oracle, " +
               fmt_seconds(seconds_since(t0));
  }
  return o;
}

// Criterion 5 ---------------------------------------------------------------

Outcome language_properties() {
  Outcome o;
  std::mt19937_64 rng(555);
  int roundtrip_fail = 0;
  for (int i = 0; i < 100; ++i) {
    Table t = testing::random_keyed_table(rng);
    std::vector<std::string> values;
    for (const auto& c : t.columns()) {
      if (c.name.rfind("val", 0) == 0) values.push_back(c.name);
    }
    Table back = eval({{PivotLonger{values, "name", "value"}, PivotWider{"name", "value"}}}, t);
    roundtrip_fail += canonical_form(back) != canonical_form(t);
  }
  if (roundtrip_fail) o.fail(std::to_string(roundtrip_fail) + " pivot round trips differ");

  int nondeterministic = 0, nonadditive = 0;
  for (int i = 0; i < 200; ++i) {
    Table t = testing::random_table(rng, 5, 6);
    auto p1 = testing::random_program(rng, t, 3);
    auto p2 = testing::random_program(rng, eval(p1, t), 3);
    nondeterministic += canonical_form(eval(p1, t)) != canonical_form(eval(p1, t));
    TransformProgram joined = p1;
    joined.ops.insert(joined.ops.end(), p2.ops.begin(), p2.ops.end());
    nonadditive += complexity(joined) != complexity(p1) + complexity(p2);
  }
  if (nondeterministic) o.fail(std::to_string(nondeterministic) + " nondeterministic evaluations");
  if (nonadditive) o.fail(std::to_string(nonadditive) + " non-additive complexities");

  int identity_fail = 0, identity_checked = 0, superset_fail = 0;
  for (int i = 0; i < 300; ++i) {
    Table t = testing::random_table(rng, 5, 6);
    std::set<std::string> rows, cols;
    for (const auto& r : t.rows()) {
      std::string k;
      for (const auto& v : r) k += to_text(v) + '\x1f';
      rows.insert(k);
    }
    for (std::size_t c = 0; c < t.num_columns(); ++c) {
      std::multiset<std::string> vals;
      for (const auto& r : t.rows()) vals.insert(to_text(r[c]));
      std::string k;
      for (const auto& v : vals) k += v + '\x1f';
      cols.insert(k);
    }
    if (rows.size() == t.num_rows() && cols.size() == t.num_columns()) {
      ++identity_checked;
      ColumnMapping id(t.num_columns());
      for (std::size_t c = 0; c < id.size(); ++c) id[c] = c;
      auto maps = contains(t, t);
      identity_fail += std::find(maps.begin(), maps.end(), id) == maps.end();
    }
    auto inst = testing::random_instance(rng, 5, 6, 3, 3);
    std::vector<Row> more = inst.input.rows();
    for (std::size_t r = 0; r < 3; ++r) {
      Row row;
      for (std::size_t c = 0; c < inst.input.num_columns(); ++c) {
        row.push_back(inst.input.at(
            std::uniform_int_distribution<std::size_t>(0, inst.input.num_rows() - 1)(rng), c));
      }
      more.push_back(std::move(row));
    }
    auto after = contains(Table(inst.input.columns(), more), inst.example);
    for (const auto& m : contains(inst.input, inst.example)) {
      superset_fail += std::find(after.begin(), after.end(), m) == after.end();
    }
  }
  if (identity_fail) o.fail(std::to_string(identity_fail) + " tables do not contain themselves");
  if (superset_fail) o.fail(std::to_string(superset_fail) + " mappings lost on a superset");

  Table three = table_from_text({"a", "b", "c"}, {{"x", "1", "2"}, {"y", "3", "4"}});
  Table four = table_from_text({"C1", "C2", "C3", "C4"}, {{"x", "1", "2", "3"}});
  const OpKind cumsum[1] = {OpKind::CumSum};
  bool cumsum_ok = !feasible(abstract_eval(cumsum, three), four);
  for (const auto& op : instantiations(OpKind::CumSum, three, ConstantPool::build(three, four))) {
    cumsum_ok = cumsum_ok && contains(vizsynth::apply(op, three), four).empty();
  }
  if (!cumsum_ok) o.fail("CumSum on 3 columns reaches a 4-column example");

  if (o.pass) {
    o.detail = "100 pivot round trips, 200 programs deterministic and additive, " +
               std::to_string(identity_checked) + " identity and 300 superset checks, CumSum 3->4 pruned";
  }
  return o;
}

// Criterion 6 ---------------------------------------------------------------

Outcome transparency() {
  Outcome o;
  struct Task {
    std::string name;
    Table input;
    std::vector<ExampleElement> elements;
    std::size_t depth;
  };
  std::vector<Task> tasks = {
      {"floating_bar", testing::read_table("temps.csv"), {testing::floating_bar()}, 3},
      {"line", testing::read_table("ny_sf.csv"), {testing::city_line()}, 2},
      {"layered", testing::read_table("ny_sf.csv"), {testing::city_line(), testing::diff_bar()}, 2},
  };
  for (const auto& t : tasks) {
    SearchConfig base = unbounded(t.depth, 1000);
    auto reference = ids(synthesize(t.input, t.elements, base).candidates);
    SearchConfig no_memo = base;
    no_memo.memoize = false;
    if (ids(synthesize(t.input, t.elements, no_memo).candidates) != reference) {
      o.fail(t.name + ": memo off changes the result");
    }
    SearchConfig two = base;
    two.worker_budgets = {std::nullopt, std::nullopt};
    if (ids(synthesize(t.input, t.elements, two).candidates) != reference) {
      o.fail(t.name + ": 2 workers change the result");
    }
  }

  std::mt19937_64 rng(66);
  for (int i = 0; i < 30; ++i) {
    auto inst = testing::random_instance(rng, 5, 6, 3, 2);
    auto sk = sketch_for(inst.example);
    SearchConfig base = unbounded(2, 1000000);
    auto reference = synthesize_layer(inst.input, sk, base);
    SearchConfig no_memo = base;
    no_memo.memoize = false;
    SearchConfig two = base;
    two.worker_budgets = {std::nullopt, std::nullopt};
    if (synthesize_layer(inst.input, sk, no_memo) != reference ||
        synthesize_layer(inst.input, sk, two) != reference) {
      o.fail("random instance " + std::to_string(i) + " depends on memo or worker count");
      break;
    }
  }

  Table input = testing::read_table("ny_sf.csv");
  std::vector<ExampleElement> line = {testing::city_line()};
  SearchConfig budgeted;
  budgeted.max_depth = 3;
  budgeted.max_candidates = 1000000;
  budgeted.worker_budgets = {std::chrono::milliseconds(5000), std::chrono::milliseconds(20000)};
  std::vector<std::vector<Candidate>> partials;
  auto final_out = synthesize(input, line, budgeted, [&](const std::vector<Candidate>& c) { partials.push_back(c); });
  std::set<std::string> final_ids;
  for (const auto& c : final_out.candidates) final_ids.insert(c.id);
  std::size_t fast = 0;
  if (partials.empty()) {
    o.fail("no fast stream was produced");
  } else {
    for (const auto& c : partials.front()) {
      ++fast;
      if (!final_ids.count(c.id)) {
        o.fail("fast candidate " + programs_text(c) + " missing from the final set");
        break;
      }
    }
  }
  if (o.pass) {
    o.detail = "memo and worker count invariant on 3 scenarios and 30 random instances; fast stream " +
               std::to_string(fast) + " of " + std::to_string(final_ids.size()) + " final";
  }
  return o;
}

// Criterion 7 ---------------------------------------------------------------

Outcome vegalite_validity() {
  Outcome o;
  std::vector<Candidate> all = criterion2_candidates;
  Table temps = testing::read_table("temps.csv");
  std::vector<ExampleElement> bar = {testing::floating_bar()};
  auto floating_bar = synthesize(temps, bar, unbounded(3, 1000));
  all.insert(all.end(), floating_bar.candidates.begin(), floating_bar.candidates.end());
  if (criterion2_candidates.empty()) o.fail("criterion 2 produced no candidates");
  std::size_t invalid = 0;
  for (const auto& c : all) {
    auto problems = testing::vegalite_problems(c.vegalite);
    if (!problems.empty() && invalid++ == 0) o.fail(programs_text(c) + ": " + problems.front());
  }
  if (invalid) o.fail(std::to_string(invalid) + " invalid specs");
  std::size_t not_temporal = 0;
  for (const auto& c : criterion2_candidates) {
    if (!date_fields_temporal(c.vegalite) && not_temporal++ == 0) {
      o.fail(programs_text(c) + ": Date is not temporal");
    }
  }
  if (not_temporal) o.fail(std::to_string(not_temporal) + " candidates without a temporal Date scale");
  if (o.pass) {
    o.detail = std::to_string(all.size()) + " specs valid, Date temporal in all " +
               std::to_string(criterion2_candidates.size()) + " two-city candidates";
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 floating-bar golden", floating_bar_golden},
      {"2 layered two-city scenario", layered_scenario},
      {"3 pruning soundness", pruning_soundness},
      {"4 bounded completeness", bounded_completeness},
      {"5 language properties", language_properties},
      {"6 search transparency", transparency},
      {"7 Vega-Lite validity", vegalite_validity},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
