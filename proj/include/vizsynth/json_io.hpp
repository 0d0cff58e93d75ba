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

// JSON wire formats shared by the CLI and the HTTP service. Decoding errors
// are MalformedJson (or InvalidElement) with a path such as
// "elements[0].props.y".

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "vizsynth/compiler.hpp"
#include "vizsynth/decompiler.hpp"
#include "vizsynth/pipeline.hpp"
#include "vizsynth/synthesizer.hpp"
#include "vizsynth/table.hpp"
#include "vizsynth/transform.hpp"
#include "vizsynth/viz.hpp"

namespace vizsynth {

/// {"columns":[{"name":..., "type":"quantitative"|"nominal"|"temporal"}],
///  "rows":[[...], ...]}. "type" may be omitted on input and is then inferred.
nlohmann::json table_to_json(const Table& t);
Table table_from_json(const nlohmann::json& j, const std::string& path = "table");

/// {"kind":"bar","props":{"x":"09-05","y":64.4,"y2":87.8}}; numbers and
/// strings are both accepted as property values.
nlohmann::json element_to_json(const ExampleElement& e);
ExampleElement element_from_json(const nlohmann::json& j, const std::string& path = "element");
std::vector<ExampleElement> elements_from_json(const nlohmann::json& j,
                                               const std::string& path = "elements");

nlohmann::json layer_sketch_to_json(const LayerSketch& s);
nlohmann::json vis_spec_to_json(const VisSpec& s);

/// Program AST: an array of {"op": ..., ...} objects.
nlohmann::json program_to_json(const TransformProgram& p);
TransformProgram program_from_json(const nlohmann::json& j, const std::string& path = "program");

/// Applies overrides {"max_depth", "max_candidates", "budgets_ms", "rel_tol",
/// "memoize"} to `base`. A null budget entry means unbounded.
SearchConfig config_from_json(const nlohmann::json& j, SearchConfig base,
                              const std::string& path = "config");

nlohmann::json candidate_to_json(const Candidate& c);
nlohmann::json stats_to_json(const SearchStats& s);

/// {"candidates": [...], "stats": {...}} plus "no_candidate_reason" when the
/// list is empty. The service and the CLI emit exactly this document.
nlohmann::json synthesis_response_to_json(const SynthesisOutput& out);

}  // namespace vizsynth
