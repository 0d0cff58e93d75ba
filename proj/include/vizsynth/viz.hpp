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

// Internal visualization grammar: marks, channel encodings and layers, plus
// the vocabulary of demonstrated example elements.

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vizsynth/table.hpp"

namespace vizsynth {

enum class Mark { Point, Line, Bar, Rect, Area };

/// Declaration order is the placeholder order used by decompilation.
enum class Channel { X, X2, Y, Y2, Color, Size, Shape, Column, Row };

inline constexpr std::array<Channel, 9> kAllChannels = {
    Channel::X,     Channel::X2,    Channel::Y,      Channel::Y2,  Channel::Color,
    Channel::Size,  Channel::Shape, Channel::Column, Channel::Row};

inline constexpr std::size_t kMaxLayers = 3;

std::string_view mark_name(Mark m);
std::optional<Mark> parse_mark(std::string_view name);
std::string_view channel_name(Channel c);
std::optional<Channel> parse_channel(std::string_view name);

bool channel_allowed(Mark m, Channel c);
inline bool is_facet(Channel c) { return c == Channel::Column || c == Channel::Row; }

/// How a bound column is scaled. Quantitative color uses a sequential
/// gradient, nominal color a categorical palette.
enum class ScaleHint { Quantitative, Nominal, Temporal };

struct LayerSpec {
  Mark mark = Mark::Point;
  std::map<Channel, std::string> encodings;
  std::map<Channel, ScaleHint> scales;

  bool operator==(const LayerSpec&) const = default;
};

struct VisSpec {
  std::vector<LayerSpec> layers;

  bool operator==(const VisSpec&) const = default;
};

/// All channel-legality and layer-consistency violations; empty means valid.
std::vector<std::string> validate_spec(const VisSpec& spec);

enum class ElementKind { Point, Line, Bar, Rect, Area };

std::string_view element_kind_name(ElementKind k);
std::optional<ElementKind> parse_element_kind(std::string_view name);

/// One demonstrated geometric object. Property values are kept as text, the
/// way they arrive from the editor; typing happens per example-table column.
struct ExampleElement {
  ElementKind kind = ElementKind::Point;
  std::map<std::string, std::string> props;

  bool operator==(const ExampleElement&) const = default;
};

struct PropertyRule {
  std::string_view name;
  Channel channel;
  bool required;
};

/// Property vocabulary of an element kind, in channel order.
std::vector<PropertyRule> property_rules(ElementKind kind);

/// Throws InvalidElement when a required property is missing or blank, or an
/// unknown property is present.
void validate_element(const ExampleElement& e);

}  // namespace vizsynth
