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

#include "vizsynth/decompiler.hpp"

#include <algorithm>
#include <set>

#include "vizsynth/error.hpp"

namespace vizsynth {

namespace {

std::set<std::string> prop_names(const ExampleElement& e) {
  std::set<std::string> out;
  for (const auto& [k, v] : e.props) out.insert(k);
  return out;
}

Mark mark_for(ElementKind k) {
  switch (k) {
    case ElementKind::Point: return Mark::Point;
    case ElementKind::Line: return Mark::Line;
    case ElementKind::Bar: return Mark::Bar;
    case ElementKind::Rect: return Mark::Rect;
    case ElementKind::Area: return Mark::Area;
  }
  return Mark::Point;
}

}  // namespace

std::string placeholder_name(std::size_t index) { return "C" + std::to_string(index + 1); }

std::vector<std::vector<ExampleElement>> partition_examples(
    std::span<const ExampleElement> elements) {
  std::vector<std::pair<ElementKind, std::set<std::string>>> keys;
  std::vector<std::vector<ExampleElement>> groups;
  for (const auto& e : elements) {
    auto key = std::make_pair(e.kind, prop_names(e));
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(std::move(key));
      groups.push_back({e});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(e);
    }
  }
  if (groups.size() > kMaxLayers) {
    throw Error(ErrorCode::TooManyLayers, "examples form " + std::to_string(groups.size()) +
                                              " layers, at most " + std::to_string(kMaxLayers) +
                                              " are supported");
  }
  return groups;
}

LayerSketch decompile_layer(std::span<const ExampleElement> group) {
  if (group.empty()) throw Error(ErrorCode::InconsistentGroup, "empty element group");
  const ElementKind kind = group.front().kind;
  const auto names = prop_names(group.front());
  for (std::size_t i = 0; i < group.size(); ++i) {
    validate_element(group[i]);
    if (group[i].kind != kind || prop_names(group[i]) != names) {
      throw Error(ErrorCode::InconsistentGroup,
                  "element " + std::to_string(i) + " does not share the group's kind and properties");
    }
  }

  // Present channels in placeholder order, and for each channel the property
  // (or, for lines, the pair of endpoint properties) that feeds it.
  const auto rules = property_rules(kind);
  LayerSketch sketch;
  sketch.layer.mark = mark_for(kind);
  std::vector<std::vector<std::string>> sources;
  for (auto channel : kAllChannels) {
    std::vector<std::string> props;
    for (const auto& r : rules) {
      if (r.channel == channel && names.count(std::string(r.name))) props.emplace_back(r.name);
    }
    if (props.empty()) continue;
    sketch.layer.encodings[channel] = placeholder_name(sketch.channel_order.size());
    sketch.channel_order.push_back(channel);
    sources.push_back(std::move(props));
  }

  std::vector<std::vector<std::string>> rows;
  const bool two_ended = kind == ElementKind::Line;
  for (const auto& e : group) {
    for (std::size_t end = 0; end < (two_ended ? 2u : 1u); ++end) {
      std::vector<std::string> row;
      for (const auto& props : sources) {
        row.push_back(e.props.at(props.size() == 2 ? props[end] : props[0]));
      }
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::string> columns;
  for (std::size_t i = 0; i < sketch.channel_order.size(); ++i) {
    columns.push_back(placeholder_name(i));
  }
  sketch.example_table = table_from_text(std::move(columns), rows);
  return sketch;
}

std::vector<LayerSketch> decompile(std::span<const ExampleElement> elements) {
  if (elements.empty()) throw Error(ErrorCode::InvalidElement, "no example elements");
  std::vector<LayerSketch> out;
  for (const auto& group : partition_examples(elements)) out.push_back(decompile_layer(group));
  return out;
}

}  // namespace vizsynth
