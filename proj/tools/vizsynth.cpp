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

// Command-line front end.
//
//   vizsynth synth TASK.json --out DIR [--max-depth N] [--max-candidates N]
//                                      [--budgets-ms 5000,20000] [--seedless]
//   vizsynth eval-program --input data.csv --program "pivot_wider(...)"
//   vizsynth decompile --elements '[{"kind":"bar","props":{...}}]'
//   vizsynth serve [--port N]
//
// Exit codes: 0 success, 1 I/O error, 2 invalid input, 3 no candidates.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vizsynth/csv.hpp"
#include "vizsynth/error.hpp"
#include "vizsynth/json_io.hpp"
#include "vizsynth/pipeline.hpp"
#include "vizsynth/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vizsynth;

namespace {

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNoCandidates = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + p.string());
}

void report(const Error& e) {
  std::cerr << "error: " << error_code_name(e.code());
  if (!e.path().empty()) std::cerr << " at " << e.path();
  if (e.op_index()) std::cerr << " (operator " << *e.op_index() << ")";
  std::cerr << ": " << e.what() << "\n";
}

std::vector<std::optional<std::chrono::milliseconds>> parse_budgets(const std::string& text) {
  std::vector<std::optional<std::chrono::milliseconds>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = std::string(trim(item));
    if (t == "inf") {
      out.push_back(std::nullopt);
      continue;
    }
    auto n = parse_number(t);
    if (!n || *n < 1 || *n != static_cast<long long>(*n)) {
      throw Error(ErrorCode::MalformedJson, "--budgets-ms expects positive integers or inf")
          .with_path("--budgets-ms");
    }
    out.push_back(std::chrono::milliseconds(static_cast<long long>(*n)));
  }
  return out;
}

struct SynthFlags {
  std::string task;
  std::string out_dir;
  std::optional<std::size_t> max_depth;
  std::optional<std::size_t> max_candidates;
  std::optional<std::string> budgets;
  bool seedless = false;
};

int run_synth(const SynthFlags& f) {
  const fs::path task_path(f.task);
  json task = json::parse(read_file(task_path), nullptr, false);
  if (task.is_discarded() || !task.is_object()) {
    throw Error(ErrorCode::MalformedJson, "task file is not a JSON object");
  }
  if (!task.contains("input") || !task["input"].is_string()) {
    throw Error(ErrorCode::MalformedJson, "input: expected a CSV path").with_path("input");
  }
  fs::path csv_path = task["input"].get<std::string>();
  if (csv_path.is_relative()) csv_path = task_path.parent_path() / csv_path;
  Table input = load_csv(read_file(csv_path));
  if (!task.contains("elements")) {
    throw Error(ErrorCode::MalformedJson, "elements: missing").with_path("elements");
  }
  auto elements = elements_from_json(task["elements"], "elements");

  SearchConfig cfg;
  if (task.contains("config")) cfg = config_from_json(task["config"], cfg, "config");
  if (f.max_depth) cfg.max_depth = *f.max_depth;
  if (f.max_candidates) cfg.max_candidates = *f.max_candidates;
  if (f.budgets) cfg.worker_budgets = parse_budgets(*f.budgets);
  if (f.seedless) cfg.worker_budgets = {std::nullopt};
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::MalformedJson, e.what()).with_path("config");
  }

  const auto start = std::chrono::steady_clock::now();
  auto out = synthesize(input, elements, cfg);
  const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  const fs::path dir(f.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::string programs;
  for (std::size_t k = 0; k < out.candidates.size(); ++k) {
    const auto& c = out.candidates[k];
    write_file(dir / ("candidate_" + std::to_string(k + 1) + ".vl.json"), dump_vegalite(c.vegalite));
    programs += programs_text(c) + "\n";
  }
  write_file(dir / "programs.txt", programs);
  json response = synthesis_response_to_json(out);
  write_file(dir / "candidates.json", response.dump() + "\n");
  json stats = response["stats"];
  stats["wall_ms"] = wall.count();
  stats["candidates"] = out.candidates.size();
  if (out.no_candidate_reason) stats["no_candidate_reason"] = *out.no_candidate_reason;
  write_file(dir / "stats.json", stats.dump(2) + "\n");

  if (out.candidates.empty()) {
    std::cerr << "no candidates: " << out.no_candidate_reason.value_or("search found nothing") << "\n";
    return kExitNoCandidates;
  }
  for (std::size_t k = 0; k < out.candidates.size(); ++k) {
    std::cout << k + 1 << "\t" << out.candidates[k].complexity << "\t"
              << programs_text(out.candidates[k]) << "\n";
  }
  return 0;
}

int run_eval(const std::string& input_path, const std::string& program) {
  Table input = load_csv(read_file(input_path));
  std::cout << serialize_csv(eval(parse_program(program), input));
  return 0;
}

int run_decompile(const std::string& arg) {
  std::string text = arg;
  if (fs::exists(arg)) text = read_file(arg);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::MalformedJson, "--elements is neither a file nor JSON");
  auto elements = elements_from_json(doc, "elements");
  json out = json::array();
  for (const auto& s : decompile(elements)) out.push_back(layer_sketch_to_json(s));
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_serve(std::optional<int> port) {
  auto cfg = ServiceConfig::from_env();
  if (port) cfg.port = *port;
  SynthesisService service(cfg);
  std::cerr << "listening on " << cfg.host << ":" << cfg.port << "\n";
  if (!service.serve()) {
    std::cerr << "error: cannot bind port " << cfg.port << "\n";
    return kExitIo;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize visualizations from example elements"};
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize candidates for a task file");
  synth_cmd->add_option("task", synth.task, "Task JSON {input, elements, config?}")->required();
  synth_cmd->add_option("--out", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--max-depth", synth.max_depth, "Maximum program length")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--max-candidates", synth.max_candidates, "Number of candidates kept")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--budgets-ms", synth.budgets, "Per-worker budgets, comma separated");
  synth_cmd->add_flag("--seedless", synth.seedless, "One worker without a deadline (deterministic)");

  std::string input_path, program;
  auto* eval_cmd = app.add_subcommand("eval-program", "Apply a program to a CSV table");
  eval_cmd->add_option("--input", input_path, "Input CSV")->required();
  eval_cmd->add_option("--program", program, "Serialized program")->required();

  std::string elements;
  auto* dec_cmd = app.add_subcommand("decompile", "Print the layer sketches for example elements");
  dec_cmd->add_option("--elements", elements, "Element list as a JSON file or inline JSON")->required();

  std::optional<int> port;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--port", port, "Port (default SYNTH_PORT or 8080)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*eval_cmd) return run_eval(input_path, program);
    if (*dec_cmd) return run_decompile(elements);
    if (*serve_cmd) return run_serve(port);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    report(e);
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return 0;
}
