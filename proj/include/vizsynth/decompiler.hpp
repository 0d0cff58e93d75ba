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
#include <vector>

#include "vizsynth/table.hpp"
#include "vizsynth/viz.hpp"

namespace vizsynth {

/// One layer recovered from example elements: a spec over placeholder
/// columns C1..Ck and the table those placeholders must be filled from.
struct LayerSketch {
  LayerSpec layer;
  Table example_table;
  /// channel_order[i] is the channel fed by placeholder C(i+1).
  std::vector<Channel> channel_order;
};

std::string placeholder_name(std::size_t index);

/// Groups elements by (kind, set of property names), in order of first
/// appearance. Throws TooManyLayers above kMaxLayers groups.
std::vector<std::vector<ExampleElement>> partition_examples(std::span<const ExampleElement> elements);

/// Builds the layer sketch of one homogeneous group. Line elements
/// contribute two rows (one per endpoint), every other element one row.
/// Throws InconsistentGroup for mixed groups and InvalidElement for
/// malformed elements.
LayerSketch decompile_layer(std::span<const ExampleElement> group);

std::vector<LayerSketch> decompile(std::span<const ExampleElement> elements);

}  // namespace vizsynth
