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

#include "vizsynth/table.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "vizsynth/error.hpp"

namespace vizsynth {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::EmptyTable: return "EmptyTable";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::PivotCollision: return "PivotCollision";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::AggregateError: return "AggregateError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidElement: return "InvalidElement";
    case ErrorCode::TooManyLayers: return "TooManyLayers";
    case ErrorCode::InconsistentGroup: return "InconsistentGroup";
  }
  return "Unknown";
}

std::optional<Date> Date::parse(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len, int& out) {
    const char* first = text.data() + pos;
    const char* last = first + len;
    if (!std::all_of(first, last, [](char c) { return c >= '0' && c <= '9'; })) return false;
    return std::from_chars(first, last, out).ec == std::errc{};
  };
  int y = 0, m = 0, d = 0;
  if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{static_cast<std::int32_t>(sys_days{ymd}.time_since_epoch().count())};
}

std::string Date::to_string() const {
  using namespace std::chrono;
  year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view column_type_name(ColumnType t) {
  switch (t) {
    case ColumnType::Quantitative: return "quantitative";
    case ColumnType::Nominal: return "nominal";
    case ColumnType::Temporal: return "temporal";
  }
  return "nominal";
}

std::optional<ColumnType> parse_column_type(std::string_view name) {
  if (name == "quantitative") return ColumnType::Quantitative;
  if (name == "nominal") return ColumnType::Nominal;
  if (name == "temporal") return ColumnType::Temporal;
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::string format_number(double v) {
  if (v == 0) v = 0;  // normalizes -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string to_text(const CellValue& v) {
  struct Visitor {
    std::string operator()(Missing) const { return {}; }
    std::string operator()(double d) const { return format_number(d); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(Date d) const { return d.to_string(); }
  };
  return std::visit(Visitor{}, v);
}

ColumnType infer_column_type(std::span<const std::string> cells) {
  bool any = false;
  bool all_dates = true;
  bool all_numbers = true;
  for (const auto& c : cells) {
    if (trim(c).empty()) continue;
    any = true;
    if (all_dates && !Date::parse(c)) all_dates = false;
    if (all_numbers && !parse_number(c)) all_numbers = false;
    if (!all_dates && !all_numbers) break;
  }
  if (!any) return ColumnType::Nominal;
  if (all_dates) return ColumnType::Temporal;
  if (all_numbers) return ColumnType::Quantitative;
  return ColumnType::Nominal;
}

CellValue parse_cell(std::string_view text, ColumnType type) {
  if (trim(text).empty()) return Missing{};
  switch (type) {
    case ColumnType::Quantitative:
      if (auto n = parse_number(text)) return *n;
      break;
    case ColumnType::Temporal:
      if (auto d = Date::parse(text)) return *d;
      break;
    case ColumnType::Nominal:
      return std::string(text);
  }
  throw Error(ErrorCode::TypeError, "cell '" + std::string(text) + "' is not " +
                                        std::string(column_type_name(type)));
}

namespace {

bool numbers_close(double a, double b, double rel_tol) {
  if (a == b) return true;
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_tol * scale;
}

int variant_rank(const CellValue& v) {
  switch (v.index()) {
    case 0: return 0;  // Missing
    case 1: return 1;  // Number
    case 3: return 2;  // Date
    default: return 3;  // Text
  }
}

}  // namespace

bool cell_equal(const CellValue& a, const CellValue& b, double rel_tol) {
  if (a.index() == b.index()) {
    switch (a.index()) {
      case 0: return true;
      case 1: return numbers_close(std::get<double>(a), std::get<double>(b), rel_tol);
      case 2: return trim(std::get<std::string>(a)) == trim(std::get<std::string>(b));
      case 3: return std::get<Date>(a) == std::get<Date>(b);
    }
  }
  const CellValue& text = std::holds_alternative<std::string>(a) ? a : b;
  const CellValue& other = &text == &a ? b : a;
  if (!std::holds_alternative<std::string>(text)) return false;
  const auto& s = std::get<std::string>(text);
  if (const double* n = std::get_if<double>(&other)) {
    auto parsed = parse_number(s);
    return parsed && numbers_close(*parsed, *n, rel_tol);
  }
  if (const Date* d = std::get_if<Date>(&other)) {
    auto parsed = Date::parse(s);
    return parsed && *parsed == *d;
  }
  return false;
}

std::strong_ordering compare_cells(const CellValue& a, const CellValue& b) {
  int ra = variant_rank(a), rb = variant_rank(b);
  if (ra != rb) return ra <=> rb;
  switch (a.index()) {
    case 1: {
      double x = std::get<double>(a), y = std::get<double>(b);
      if (x < y) return std::strong_ordering::less;
      if (y < x) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case 2: return std::get<std::string>(a).compare(std::get<std::string>(b)) <=> 0;
    case 3: return std::get<Date>(a) <=> std::get<Date>(b);
    default: return std::strong_ordering::equal;
  }
}

Table::Table(std::vector<Column> columns, std::vector<Row> rows)
    : columns_(std::move(columns)), rows_(std::move(rows)) {
  std::set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (!seen.insert(c.name).second) {
      throw Error(ErrorCode::SchemaError, "duplicate column name '" + c.name + "'");
    }
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != columns_.size()) {
      throw Error(ErrorCode::SchemaError, "row " + std::to_string(r) + " has " +
                                              std::to_string(rows_[r].size()) + " cells, expected " +
                                              std::to_string(columns_.size()));
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      const auto& cell = rows_[r][c];
      if (const double* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) {
        throw Error(ErrorCode::TypeError, "non-finite number in column '" + columns_[c].name + "'");
      }
      bool ok = true;
      switch (columns_[c].type) {
        case ColumnType::Quantitative:
          ok = is_missing(cell) || std::holds_alternative<double>(cell);
          break;
        case ColumnType::Temporal:
          ok = is_missing(cell) || std::holds_alternative<Date>(cell);
          break;
        case ColumnType::Nominal:
          break;
      }
      if (!ok) {
        throw Error(ErrorCode::TypeError, "cell '" + to_text(cell) + "' does not fit " +
                                              std::string(column_type_name(columns_[c].type)) +
                                              " column '" + columns_[c].name + "'");
      }
    }
  }
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::column_index(std::string_view name) const {
  if (auto i = find_column(name)) return *i;
  throw Error(ErrorCode::SchemaError, "no column named '" + std::string(name) + "'");
}

std::vector<std::string> Table::column_names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

std::string unique_name(std::span<const Column> existing, const std::string& base) {
  auto taken = [&](const std::string& n) {
    return std::any_of(existing.begin(), existing.end(),
                       [&](const Column& c) { return c.name == n; });
  };
  if (!taken(base)) return base;
  for (int k = 2;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!taken(candidate)) return candidate;
  }
}

Table table_from_text(std::vector<std::string> names,
                      const std::vector<std::vector<std::string>>& rows) {
  std::vector<Column> columns;
  columns.reserve(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    std::vector<std::string> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
      if (r.size() != names.size()) {
        throw Error(ErrorCode::SchemaError, "ragged row: expected " + std::to_string(names.size()) +
                                                " cells, got " + std::to_string(r.size()));
      }
      cells.push_back(r[c]);
    }
    columns.push_back({std::move(names[c]), infer_column_type(cells)});
  }
  std::vector<Row> typed;
  typed.reserve(rows.size());
  for (const auto& r : rows) {
    Row row;
    row.reserve(r.size());
    for (std::size_t c = 0; c < r.size(); ++c) row.push_back(parse_cell(r[c], columns[c].type));
    typed.push_back(std::move(row));
  }
  return Table(std::move(columns), std::move(typed));
}

std::string canonical_form(const Table& t) {
  std::vector<std::size_t> order(t.num_columns());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return t.column(a).name < t.column(b).name; });
  std::vector<Row> rows;
  rows.reserve(t.num_rows());
  for (const auto& r : t.rows()) {
    Row permuted;
    permuted.reserve(order.size());
    for (auto c : order) permuted.push_back(r[c]);
    rows.push_back(std::move(permuted));
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                  compare_cells) < 0;
  });
  std::string out;
  for (auto c : order) {
    out += t.column(c).name;
    out += ':';
    out += column_type_name(t.column(c).type);
    out += '\x1f';
  }
  out += '\x1e';
  for (const auto& r : rows) {
    for (const auto& cell : r) {
      out += static_cast<char>('0' + variant_rank(cell));
      out += to_text(cell);
      out += '\x1f';
    }
    out += '\x1e';
  }
  return out;
}

}  // namespace vizsynth
