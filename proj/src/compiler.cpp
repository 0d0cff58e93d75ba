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

#include "vizsynth/compiler.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "vizsynth/error.hpp"

namespace vizsynth {

using nlohmann::json;

LayerSpec instantiate_layer(const LayerSketch& sketch, const ColumnMapping& mapping,
                            const Table& data) {
  if (mapping.size() != sketch.channel_order.size()) {
    throw Error(ErrorCode::SchemaError, "mapping covers " + std::to_string(mapping.size()) +
                                            " columns, sketch has " +
                                            std::to_string(sketch.channel_order.size()));
  }
  LayerSpec layer;
  layer.mark = sketch.layer.mark;
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    if (mapping[i] >= data.num_columns()) {
      throw Error(ErrorCode::SchemaError, "mapping refers to missing column " +
                                              std::to_string(mapping[i]));
    }
    layer.encodings[sketch.channel_order[i]] = data.column(mapping[i]).name;
  }
  return layer;
}

std::pair<LayerSpec, Table> instantiate(const LayerSketch& sketch, const TransformProgram& prog,
                                        const ColumnMapping& mapping, const Table& input) {
  Table data = eval(prog, input);
  LayerSpec layer = instantiate_layer(sketch, mapping, data);
  return {std::move(layer), std::move(data)};
}

LayerSpec infer_scales(LayerSpec layer, const Table& data) {
  layer.scales.clear();
  for (const auto& [channel, field] : layer.encodings) {
    switch (data.column(data.column_index(field)).type) {
      case ColumnType::Quantitative: layer.scales[channel] = ScaleHint::Quantitative; break;
      case ColumnType::Nominal: layer.scales[channel] = ScaleHint::Nominal; break;
      case ColumnType::Temporal: layer.scales[channel] = ScaleHint::Temporal; break;
    }
  }
  return layer;
}

namespace {

std::string_view scale_type_name(ScaleHint h) {
  switch (h) {
    case ScaleHint::Quantitative: return "quantitative";
    case ScaleHint::Nominal: return "nominal";
    case ScaleHint::Temporal: return "temporal";
  }
  return "nominal";
}

json cell_json(const CellValue& v) {
  struct Visitor {
    json operator()(Missing) const { return nullptr; }
    json operator()(double d) const { return d; }
    json operator()(const std::string& s) const { return s; }
    json operator()(Date d) const { return d.to_string(); }
  };
  return std::visit(Visitor{}, v);
}

json data_values(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows()) {
    json obj = json::object();
    for (std::size_t c = 0; c < t.num_columns(); ++c) obj[t.column(c).name] = cell_json(r[c]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

json layer_json(const LayerSpec& layer, const Table& data) {
  json enc = json::object();
  for (const auto& [channel, field] : layer.encodings) {
    json e = {{"field", field}};
    // secondary position channels share the primary channel's scale
    if (channel != Channel::X2 && channel != Channel::Y2) {
      auto hint = layer.scales.find(channel);
      e["type"] = scale_type_name(hint != layer.scales.end() ? hint->second : ScaleHint::Nominal);
    }
    enc[std::string(channel_name(channel))] = std::move(e);
  }
  return {{"mark", std::string(mark_name(layer.mark))},
          {"encoding", std::move(enc)},
          {"data", {{"values", data_values(data)}}}};
}

std::string hex_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json spec_json(const VisSpec& spec) {
  json layers = json::array();
  for (const auto& l : spec.layers) {
    json enc = json::object();
    for (const auto& [channel, field] : l.encodings) {
      auto hint = l.scales.find(channel);
      enc[std::string(channel_name(channel))] = {
          {"field", field},
          {"scale", hint == l.scales.end() ? "" : std::string(scale_type_name(hint->second))}};
    }
    layers.push_back({{"mark", std::string(mark_name(l.mark))}, {"encoding", std::move(enc)}});
  }
  return layers;
}

std::string program_key(const Candidate& c) { return programs_text(c); }

}  // namespace

json to_vegalite(const VisSpec& spec, std::span<const Table> rendered) {
  if (rendered.size() != spec.layers.size()) {
    throw Error(ErrorCode::SchemaError, "one rendered table per layer is required");
  }
  if (spec.layers.size() == 1) {
    json doc = layer_json(spec.layers.front(), rendered.front());
    doc["$schema"] = kVegaLiteSchema;
    return doc;
  }
  json layers = json::array();
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    layers.push_back(layer_json(spec.layers[i], rendered[i]));
  }
  json facet = json::object();
  for (auto& layer : layers) {
    for (const char* ch : {"column", "row"}) {
      if (layer["encoding"].contains(ch)) {
        facet[ch] = layer["encoding"][ch];
        layer["encoding"].erase(ch);
      }
    }
  }
  if (facet.empty()) return {{"$schema", kVegaLiteSchema}, {"layer", std::move(layers)}};
  // Layers cannot carry facet channels: facet the layered spec over the
  // union of the layers' rows, tagged with their layer index.
  json values = json::array();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    for (auto& row : layers[i]["data"]["values"]) {
      row[kLayerField] = i;
      values.push_back(std::move(row));
    }
    layers[i].erase("data");
    layers[i]["transform"] = json::array(
        {{{"filter", "datum['" + std::string(kLayerField) + "'] == " + std::to_string(i)}}});
  }
  return {{"$schema", kVegaLiteSchema},
          {"data", {{"values", std::move(values)}}},
          {"facet", std::move(facet)},
          {"spec", {{"layer", std::move(layers)}}}};
}

std::string dump_vegalite(const json& doc) { return doc.dump(2) + "\n"; }

std::string programs_text(const Candidate& c) {
  std::string out;
  for (std::size_t i = 0; i < c.programs.size(); ++i) {
    if (i) out += "; ";
    out += serialize(c.programs[i]);
  }
  return out;
}

std::string spec_group_key(const VisSpec& spec) {
  std::set<std::string> marks, channels;
  for (const auto& l : spec.layers) {
    marks.insert(std::string(mark_name(l.mark)));
    for (const auto& [ch, field] : l.encodings) channels.insert(std::string(channel_name(ch)));
  }
  auto join = [](const std::set<std::string>& s, char sep) {
    std::string out;
    for (const auto& x : s) {
      if (!out.empty()) out += sep;
      out += x;
    }
    return out;
  };
  return join(marks, '+') + "|" + join(channels, ',');
}

std::string spec_canonical(const VisSpec& spec, std::span<const std::string> table_forms) {
  std::string out = spec_json(spec).dump();
  for (const auto& t : table_forms) {
    out += '\x1c';
    out += t;
  }
  return out;
}

Candidate assemble_candidate(std::vector<TransformProgram> programs, VisSpec spec,
                             std::vector<Table> rendered) {
  Candidate c;
  c.programs = std::move(programs);
  c.spec = std::move(spec);
  c.rendered = std::move(rendered);
  c.vegalite = to_vegalite(c.spec, c.rendered);
  for (const auto& p : c.programs) c.complexity += complexity(p);
  c.group_key = spec_group_key(c.spec);
  std::vector<std::string> forms;
  for (const auto& t : c.rendered) forms.push_back(canonical_form(t));
  c.canonical = spec_canonical(c.spec, forms);
  c.id = hex_hash(c.canonical);
  return c;
}

std::vector<Candidate> dedup(std::vector<Candidate> cands) {
  std::vector<std::string> keys;
  keys.reserve(cands.size());
  for (const auto& c : cands) keys.push_back(program_key(c));
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cands[a].complexity != cands[b].complexity) return cands[a].complexity < cands[b].complexity;
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return cands[a].canonical < cands[b].canonical;
  });
  std::set<std::string> seen;
  std::vector<Candidate> out;
  for (auto i : order) {
    if (seen.insert(cands[i].canonical).second) out.push_back(std::move(cands[i]));
  }
  return out;
}

std::vector<Candidate> rank_and_group(std::vector<Candidate> cands, std::size_t max) {
  std::stable_sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    if (a.group_key != b.group_key) return a.group_key < b.group_key;
    return a.canonical < b.canonical;
  });
  if (cands.size() > max) cands.resize(max);
  return cands;
}

}  // namespace vizsynth
