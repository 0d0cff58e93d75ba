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

#include "vizsynth/json_io.hpp"

#include "vizsynth/error.hpp"

namespace vizsynth {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& path, const std::string& msg) {
  throw Error(ErrorCode::MalformedJson, path + ": " + msg).with_path(path);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) malformed(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) malformed(path + "." + key, "missing");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) malformed(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) malformed(path + "." + key, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) {
      malformed(path + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

// Scalar JSON to the text form cells and properties are typed from.
std::optional<std::string> scalar_text(const json& v) {
  if (v.is_null()) return std::string();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return format_number(v.get<double>());
  return std::nullopt;
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

json literal_json(const CellValue& v) {
  if (const Date* d = std::get_if<Date>(&v)) return {{"date", d->to_string()}};
  return cell_json(v);
}

CellValue literal_from_json(const json& v, const std::string& path) {
  if (v.is_null()) return Missing{};
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_object() && v.contains("date") && v["date"].is_string()) {
    if (auto d = Date::parse(v["date"].get<std::string>())) return *d;
  }
  malformed(path, "expected a number, string, null or {\"date\": \"YYYY-MM-DD\"}");
}

template <typename Enum, typename NameFn, std::size_t N>
Enum enum_field(const json& obj, const char* key, const std::string& path,
                const std::array<Enum, N>& values, NameFn name) {
  auto s = string_field(obj, key, path);
  for (auto v : values) {
    if (name(v) == s) return v;
  }
  malformed(path + "." + key, "unknown value '" + s + "'");
}

}  // namespace

json table_to_json(const Table& t) {
  json cols = json::array();
  for (const auto& c : t.columns()) {
    cols.push_back({{"name", c.name}, {"type", std::string(column_type_name(c.type))}});
  }
  json rows = json::array();
  for (const auto& r : t.rows()) {
    json row = json::array();
    for (const auto& cell : r) row.push_back(cell_json(cell));
    rows.push_back(std::move(row));
  }
  return {{"columns", std::move(cols)}, {"rows", std::move(rows)}};
}

Table table_from_json(const json& j, const std::string& path) {
  const json& cols = field(j, "columns", path);
  const json& rows = field(j, "rows", path);
  if (!cols.is_array() || cols.empty()) malformed(path + ".columns", "expected a nonempty array");
  if (!rows.is_array()) malformed(path + ".rows", "expected an array");
  if (rows.empty()) throw Error(ErrorCode::EmptyTable, path + ": table has no rows").with_path(path + ".rows");

  std::vector<std::string> names;
  std::vector<std::optional<ColumnType>> declared;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::string cpath = path + ".columns[" + std::to_string(c) + "]";
    names.push_back(string_field(cols[c], "name", cpath));
    if (cols[c].contains("type")) {
      auto t = parse_column_type(string_field(cols[c], "type", cpath));
      if (!t) malformed(cpath + ".type", "expected quantitative, nominal or temporal");
      declared.push_back(t);
    } else {
      declared.push_back(std::nullopt);
    }
  }
  std::vector<std::vector<std::string>> text(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string rpath = path + ".rows[" + std::to_string(r) + "]";
    if (!rows[r].is_array() || rows[r].size() != names.size()) {
      malformed(rpath, "expected an array of " + std::to_string(names.size()) + " cells");
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
      auto s = scalar_text(rows[r][c]);
      if (!s) malformed(rpath + "[" + std::to_string(c) + "]", "expected a scalar");
      text[r].push_back(std::move(*s));
    }
  }
  std::vector<Column> columns;
  for (std::size_t c = 0; c < names.size(); ++c) {
    ColumnType type;
    if (declared[c]) {
      type = *declared[c];
    } else {
      std::vector<std::string> cells;
      for (const auto& row : text) cells.push_back(row[c]);
      type = infer_column_type(cells);
    }
    columns.push_back({names[c], type});
  }
  std::vector<Row> typed;
  for (std::size_t r = 0; r < text.size(); ++r) {
    Row row;
    for (std::size_t c = 0; c < names.size(); ++c) {
      try {
        row.push_back(parse_cell(text[r][c], columns[c].type));
      } catch (const Error& e) {
        malformed(path + ".rows[" + std::to_string(r) + "][" + std::to_string(c) + "]", e.what());
      }
    }
    typed.push_back(std::move(row));
  }
  try {
    return Table(std::move(columns), std::move(typed));
  } catch (const Error& e) {
    malformed(path, e.what());
  }
}

json element_to_json(const ExampleElement& e) {
  json props = json::object();
  for (const auto& [k, v] : e.props) props[k] = v;
  return {{"kind", std::string(element_kind_name(e.kind))}, {"props", std::move(props)}};
}

ExampleElement element_from_json(const json& j, const std::string& path) {
  ExampleElement e;
  auto kind = parse_element_kind(string_field(j, "kind", path));
  if (!kind) malformed(path + ".kind", "expected point, line, bar, rect or area");
  e.kind = *kind;
  const json& props = field(j, "props", path);
  if (!props.is_object()) malformed(path + ".props", "expected an object");
  for (const auto& [k, v] : props.items()) {
    auto s = scalar_text(v);
    if (!s || v.is_null()) malformed(path + ".props." + k, "expected a number or string");
    e.props[k] = *s;
  }
  try {
    validate_element(e);
  } catch (Error& err) {
    err.with_path(err.path().empty() ? path : path + "." + err.path());
    throw;
  }
  return e;
}

std::vector<ExampleElement> elements_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) malformed(path, "expected an array of elements");
  if (j.empty()) malformed(path, "at least one example element is required");
  std::vector<ExampleElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(element_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json vis_spec_to_json(const VisSpec& s) {
  json layers = json::array();
  for (const auto& l : s.layers) {
    json enc = json::object();
    for (const auto& [ch, field] : l.encodings) enc[std::string(channel_name(ch))] = field;
    layers.push_back({{"mark", std::string(mark_name(l.mark))}, {"encodings", std::move(enc)}});
  }
  return {{"layers", std::move(layers)}};
}

json layer_sketch_to_json(const LayerSketch& s) {
  json enc = json::object();
  for (const auto& [ch, field] : s.layer.encodings) enc[std::string(channel_name(ch))] = field;
  json order = json::array();
  for (auto ch : s.channel_order) order.push_back(std::string(channel_name(ch)));
  return {{"mark", std::string(mark_name(s.layer.mark))},
          {"encodings", std::move(enc)},
          {"channel_order", std::move(order)},
          {"example_table", table_to_json(s.example_table)}};
}

namespace {

struct OpToJson {
  json operator()(const PivotLonger& o) const {
    return {{"op", "pivot_longer"}, {"cols", o.cols}, {"names_to", o.names_to}, {"values_to", o.values_to}};
  }
  json operator()(const PivotWider& o) const {
    return {{"op", "pivot_wider"}, {"names_from", o.names_from}, {"values_from", o.values_from}};
  }
  json operator()(const Select& o) const { return {{"op", "select"}, {"cols", o.cols}}; }
  json operator()(const Filter& o) const {
    return {{"op", "filter"},
            {"col", o.col},
            {"cmp", std::string(compare_op_symbol(o.op))},
            {"lit", literal_json(o.lit)}};
  }
  json operator()(const GroupSummarise& o) const {
    return {{"op", "summarise"},
            {"group_cols", o.group_cols},
            {"agg", std::string(agg_func_name(o.agg))},
            {"target", o.target},
            {"out_name", o.out_name}};
  }
  json operator()(const CumSum& o) const {
    return {{"op", "cumsum"}, {"group_cols", o.group_cols}, {"target", o.target}};
  }
  json operator()(const Mutate& o) const {
    json rhs = std::holds_alternative<std::string>(o.rhs) ? json(std::get<std::string>(o.rhs))
                                                          : json(std::get<double>(o.rhs));
    return {{"op", "mutate"},
            {"out_name", o.out_name},
            {"lhs", o.lhs},
            {"arith", std::string(arith_op_symbol(o.op))},
            {"rhs", std::move(rhs)}};
  }
  json operator()(const Separate& o) const {
    return {{"op", "separate"}, {"col", o.col}, {"delim", o.delim}, {"out1", o.out1}, {"out2", o.out2}};
  }
  json operator()(const Unite& o) const {
    return {{"op", "unite"}, {"col1", o.col1}, {"col2", o.col2}, {"delim", o.delim}, {"out_name", o.out_name}};
  }
};

TransformOp op_from_json(const json& j, const std::string& path) {
  auto name = string_field(j, "op", path);
  if (name == "pivot_longer") {
    return PivotLonger{string_list(j, "cols", path), string_field(j, "names_to", path),
                       string_field(j, "values_to", path)};
  }
  if (name == "pivot_wider") {
    return PivotWider{string_field(j, "names_from", path), string_field(j, "values_from", path)};
  }
  if (name == "select") return Select{string_list(j, "cols", path)};
  if (name == "filter") {
    constexpr std::array<CompareOp, 6> ops = {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt,
                                              CompareOp::Le, CompareOp::Gt, CompareOp::Ge};
    return Filter{string_field(j, "col", path), enum_field(j, "cmp", path, ops, compare_op_symbol),
                  literal_from_json(field(j, "lit", path), path + ".lit")};
  }
  if (name == "summarise") {
    constexpr std::array<AggFunc, 5> aggs = {AggFunc::Sum, AggFunc::Mean, AggFunc::Count,
                                             AggFunc::Min, AggFunc::Max};
    return GroupSummarise{string_list(j, "group_cols", path),
                          enum_field(j, "agg", path, aggs, agg_func_name),
                          string_field(j, "target", path), string_field(j, "out_name", path)};
  }
  if (name == "cumsum") return CumSum{string_list(j, "group_cols", path), string_field(j, "target", path)};
  if (name == "mutate") {
    constexpr std::array<ArithOp, 4> ops = {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div};
    Mutate m{string_field(j, "out_name", path), string_field(j, "lhs", path),
             enum_field(j, "arith", path, ops, arith_op_symbol), std::string()};
    const json& rhs = field(j, "rhs", path);
    if (rhs.is_string()) {
      m.rhs = rhs.get<std::string>();
    } else if (rhs.is_number()) {
      m.rhs = rhs.get<double>();
    } else {
      malformed(path + ".rhs", "expected a column name or a number");
    }
    return m;
  }
  if (name == "separate") {
    return Separate{string_field(j, "col", path), string_field(j, "delim", path),
                    string_field(j, "out1", path), string_field(j, "out2", path)};
  }
  if (name == "unite") {
    return Unite{string_field(j, "col1", path), string_field(j, "col2", path),
                 string_field(j, "delim", path), string_field(j, "out_name", path)};
  }
  malformed(path + ".op", "unknown operator '" + name + "'");
}

}  // namespace

json program_to_json(const TransformProgram& p) {
  json out = json::array();
  for (const auto& op : p.ops) out.push_back(std::visit(OpToJson{}, op));
  return out;
}

TransformProgram program_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) malformed(path, "expected an array of operators");
  TransformProgram p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    p.ops.push_back(op_from_json(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return p;
}

SearchConfig config_from_json(const json& j, SearchConfig base, const std::string& path) {
  if (j.is_null()) return base;
  if (!j.is_object()) malformed(path, "expected an object");
  auto positive = [&](const char* key) -> std::size_t {
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      malformed(path + "." + key, "expected a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "max_depth") {
      base.max_depth = positive("max_depth");
    } else if (key == "max_candidates") {
      base.max_candidates = positive("max_candidates");
    } else if (key == "budgets_ms") {
      if (!value.is_array() || value.empty()) malformed(path + ".budgets_ms", "expected a nonempty array");
      base.worker_budgets.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (value[i].is_null()) {
          base.worker_budgets.push_back(std::nullopt);
        } else if (value[i].is_number_integer() && value[i].get<long long>() > 0) {
          base.worker_budgets.push_back(std::chrono::milliseconds(value[i].get<long long>()));
        } else {
          malformed(path + ".budgets_ms[" + std::to_string(i) + "]",
                    "expected a positive integer or null");
        }
      }
    } else if (key == "rel_tol") {
      if (!value.is_number() || value.get<double>() < 0) {
        malformed(path + ".rel_tol", "expected a non-negative number");
      }
      base.rel_tol = value.get<double>();
    } else if (key == "memoize") {
      if (!value.is_boolean()) malformed(path + ".memoize", "expected a boolean");
      base.memoize = value.get<bool>();
    } else {
      malformed(path + "." + key, "unknown setting");
    }
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    malformed(path, e.what());
  }
  return base;
}

json candidate_to_json(const Candidate& c) {
  json programs = json::array();
  for (const auto& p : c.programs) programs.push_back(serialize(p));
  return {{"id", c.id},
          {"vegalite", c.vegalite},
          {"programs", std::move(programs)},
          {"complexity", c.complexity},
          {"group_key", c.group_key}};
}

json stats_to_json(const SearchStats& s) {
  json elapsed = json::array();
  for (const auto& w : s.workers) elapsed.push_back(w.elapsed.count());
  return {{"elapsed_ms", std::move(elapsed)},
          {"sketches_explored", s.sketches_explored},
          {"pruned_count", s.pruned_count},
          {"truncated", s.truncated}};
}

json synthesis_response_to_json(const SynthesisOutput& out) {
  json cands = json::array();
  for (const auto& c : out.candidates) cands.push_back(candidate_to_json(c));
  json doc = {{"candidates", std::move(cands)}, {"stats", stats_to_json(out.stats)}};
  if (out.no_candidate_reason) doc["no_candidate_reason"] = *out.no_candidate_reason;
  return doc;
}

}  // namespace vizsynth
