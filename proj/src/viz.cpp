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

#include "vizsynth/viz.hpp"

#include <algorithm>

#include "vizsynth/error.hpp"

namespace vizsynth {

std::string_view mark_name(Mark m) {
  switch (m) {
    case Mark::Point: return "point";
    case Mark::Line: return "line";
    case Mark::Bar: return "bar";
    case Mark::Rect: return "rect";
    case Mark::Area: return "area";
  }
  return "point";
}

std::optional<Mark> parse_mark(std::string_view name) {
  for (auto m : {Mark::Point, Mark::Line, Mark::Bar, Mark::Rect, Mark::Area}) {
    if (mark_name(m) == name) return m;
  }
  return std::nullopt;
}

std::string_view channel_name(Channel c) {
  switch (c) {
    case Channel::X: return "x";
    case Channel::X2: return "x2";
    case Channel::Y: return "y";
    case Channel::Y2: return "y2";
    case Channel::Color: return "color";
    case Channel::Size: return "size";
    case Channel::Shape: return "shape";
    case Channel::Column: return "column";
    case Channel::Row: return "row";
  }
  return "x";
}

std::optional<Channel> parse_channel(std::string_view name) {
  for (auto c : kAllChannels) {
    if (channel_name(c) == name) return c;
  }
  return std::nullopt;
}

bool channel_allowed(Mark m, Channel c) {
  switch (c) {
    case Channel::X:
    case Channel::Y:
    case Channel::Color:
    case Channel::Column:
    case Channel::Row: return true;
    case Channel::X2: return m == Mark::Rect;
    case Channel::Y2: return m == Mark::Bar || m == Mark::Rect || m == Mark::Area;
    case Channel::Size: return m == Mark::Line || m == Mark::Point;
    case Channel::Shape: return m == Mark::Point;
  }
  return false;
}

namespace {

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

}  // namespace

std::vector<std::string> validate_spec(const VisSpec& spec) {
  std::vector<std::string> violations;
  if (spec.layers.empty()) {
    violations.emplace_back("spec has no layers");
    return violations;
  }
  if (spec.layers.size() > kMaxLayers) {
    violations.push_back("spec has " + std::to_string(spec.layers.size()) + " layers, at most " +
                         std::to_string(kMaxLayers) + " are supported");
  }
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    const auto& layer = spec.layers[i];
    std::string where = spec.layers.size() > 1 ? " (layer " + std::to_string(i + 1) + ")" : "";
    for (auto required : {Channel::X, Channel::Y}) {
      if (!layer.encodings.count(required)) {
        violations.push_back(capitalized(mark_name(layer.mark)) + " layer lacks " +
                             capitalized(channel_name(required)) + where);
      }
    }
    for (const auto& [channel, field] : layer.encodings) {
      if (!channel_allowed(layer.mark, channel)) {
        violations.push_back(capitalized(channel_name(channel)) + " illegal for " +
                             capitalized(mark_name(layer.mark)) + where);
      }
      if (field.empty()) {
        violations.push_back(capitalized(channel_name(channel)) + " has an empty field" + where);
      }
    }
  }
  const auto& first = spec.layers.front();
  for (std::size_t i = 1; i < spec.layers.size(); ++i) {
    for (auto facet : {Channel::Column, Channel::Row}) {
      auto a = first.encodings.find(facet);
      auto b = spec.layers[i].encodings.find(facet);
      bool has_a = a != first.encodings.end();
      bool has_b = b != spec.layers[i].encodings.end();
      if (has_a != has_b || (has_a && a->second != b->second)) {
        violations.push_back("facet channel " + std::string(channel_name(facet)) +
                             " disagrees between layer 1 and layer " + std::to_string(i + 1));
      }
    }
  }
  return violations;
}

std::string_view element_kind_name(ElementKind k) {
  switch (k) {
    case ElementKind::Point: return "point";
    case ElementKind::Line: return "line";
    case ElementKind::Bar: return "bar";
    case ElementKind::Rect: return "rect";
    case ElementKind::Area: return "area";
  }
  return "point";
}

std::optional<ElementKind> parse_element_kind(std::string_view name) {
  for (auto k : {ElementKind::Point, ElementKind::Line, ElementKind::Bar, ElementKind::Rect,
                 ElementKind::Area}) {
    if (element_kind_name(k) == name) return k;
  }
  return std::nullopt;
}

std::vector<PropertyRule> property_rules(ElementKind kind) {
  using C = Channel;
  switch (kind) {
    case ElementKind::Point:
      return {{"x", C::X, true},         {"y", C::Y, true},         {"color", C::Color, false},
              {"size", C::Size, false},   {"shape", C::Shape, false}, {"column", C::Column, false},
              {"row", C::Row, false}};
    case ElementKind::Line:
      // Both endpoints feed the same x and y channels.
      return {{"x1", C::X, true},         {"x2", C::X, true},          {"y1", C::Y, true},
              {"y2", C::Y, true},         {"color", C::Color, false},  {"size", C::Size, false},
              {"column", C::Column, false}, {"row", C::Row, false}};
    case ElementKind::Bar:
      return {{"x", C::X, true},          {"y", C::Y, true},         {"y2", C::Y2, false},
              {"color", C::Color, false}, {"column", C::Column, false}, {"row", C::Row, false}};
    case ElementKind::Rect:
      return {{"x", C::X, true},          {"x2", C::X2, true},          {"y", C::Y, true},
              {"y2", C::Y2, true},        {"color", C::Color, false},   {"column", C::Column, false},
              {"row", C::Row, false}};
    case ElementKind::Area:
      return {{"x", C::X, true},          {"y", C::Y, true},         {"y2", C::Y2, false},
              {"color", C::Color, false}, {"column", C::Column, false}, {"row", C::Row, false}};
  }
  return {};
}

void validate_element(const ExampleElement& e) {
  auto rules = property_rules(e.kind);
  std::string kind(element_kind_name(e.kind));
  for (const auto& [name, value] : e.props) {
    auto it = std::find_if(rules.begin(), rules.end(),
                           [&](const PropertyRule& r) { return r.name == name; });
    if (it == rules.end()) {
      throw Error(ErrorCode::InvalidElement, "unknown property '" + name + "' for " + kind)
          .with_path("props." + name);
    }
    if (trim(value).empty()) {
      throw Error(ErrorCode::InvalidElement, "property '" + name + "' of " + kind + " is empty")
          .with_path("props." + name);
    }
  }
  for (const auto& r : rules) {
    if (r.required && !e.props.count(std::string(r.name))) {
      throw Error(ErrorCode::InvalidElement,
                  kind + " requires property '" + std::string(r.name) + "'")
          .with_path("props." + std::string(r.name));
    }
  }
}

}  // namespace vizsynth
