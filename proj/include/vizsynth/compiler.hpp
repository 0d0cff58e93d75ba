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

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vizsynth/decompiler.hpp"
#include "vizsynth/transform.hpp"
#include "vizsynth/viz.hpp"

namespace vizsynth {

inline constexpr const char* kVegaLiteSchema = "https://vega.github.io/schema/vega-lite/v5.json";
/// Row tag naming the source layer in faceted layered documents.
inline constexpr const char* kLayerField = "__layer";

/// A synthesized visualization: one program per layer, the instantiated spec,
/// the data each layer renders, and the compiled Vega-Lite document.
struct Candidate {
  std::vector<TransformProgram> programs;
  VisSpec spec;
  std::vector<Table> rendered;
  nlohmann::json vegalite;
  std::size_t complexity = 0;
  /// Sorted marks and sorted channel set, e.g. "bar+line|color,x,y,y2".
  std::string group_key;
  /// Canonical content: spec plus rendered tables with sorted rows/columns.
  std::string canonical;
  /// Hex hash of `canonical`.
  std::string id;
};

/// Binds each sketch channel to the column `mapping` selects in `data`.
LayerSpec instantiate_layer(const LayerSketch& sketch, const ColumnMapping& mapping,
                            const Table& data);

/// Replaces placeholder columns with the mapped output columns of `prog`.
/// Returns the layer and the full transformed table.
std::pair<LayerSpec, Table> instantiate(const LayerSketch& sketch, const TransformProgram& prog,
                                        const ColumnMapping& mapping, const Table& input);

/// Sets each channel's scale hint to the type of its bound column.
LayerSpec infer_scales(LayerSpec layer, const Table& data);

/// Vega-Lite v5 with inline data. One layer compiles to a top-level
/// mark/encoding/data spec; several layers to {"layer": [...]}. Layers with
/// facet channels compile to {"facet", "spec": {"layer"}} over shared data.
nlohmann::json to_vegalite(const VisSpec& spec, std::span<const Table> rendered);

/// Bit-exact text form: sorted keys, two-space indent, trailing newline.
std::string dump_vegalite(const nlohmann::json& doc);

/// Sorted marks and sorted channel names, e.g. "bar+line|color,x,y,y2".
std::string spec_group_key(const VisSpec& spec);

/// Canonical class key from a spec and the canonical_form of each layer's table.
std::string spec_canonical(const VisSpec& spec, std::span<const std::string> table_forms);

/// Fills complexity, group key, canonical form, id and the Vega-Lite document.
Candidate assemble_candidate(std::vector<TransformProgram> programs, VisSpec spec,
                             std::vector<Table> rendered);

/// One representative per canonical class: lowest complexity, then smallest
/// program text. Output is sorted the same way.
std::vector<Candidate> dedup(std::vector<Candidate> cands);

/// Sorts by (complexity, group key, canonical form) and keeps the first `max`.
std::vector<Candidate> rank_and_group(std::vector<Candidate> cands, std::size_t max);

/// Program text of every layer, joined with "; ".
std::string programs_text(const Candidate& c);

}  // namespace vizsynth
