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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vizsynth {

/// Calendar date with day precision, stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  /// Parses strict ISO-8601 "YYYY-MM-DD". Anything else yields nullopt.
  static std::optional<Date> parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Date&) const = default;
};

struct Missing {
  auto operator<=>(const Missing&) const = default;
};

/// One table cell. Numbers are always finite.
using CellValue = std::variant<Missing, double, std::string, Date>;

inline bool is_missing(const CellValue& v) { return std::holds_alternative<Missing>(v); }

enum class ColumnType { Quantitative, Nominal, Temporal };

std::string_view column_type_name(ColumnType t);
std::optional<ColumnType> parse_column_type(std::string_view name);

/// Default relative tolerance for containment comparisons.
inline constexpr double kDefaultRelTol = 1e-6;

std::string_view trim(std::string_view s);

/// Parses a finite decimal number, ignoring surrounding whitespace.
std::optional<double> parse_number(std::string_view text);

/// Shortest text that round-trips the number ("64.4", "1", "0.7000000000000028").
std::string format_number(double v);

/// Canonical text form of a cell: shortest round-trip numbers, ISO dates,
/// text verbatim, empty string for Missing.
std::string to_text(const CellValue& v);

/// Column type from textual cells: Temporal if every non-empty cell is an ISO
/// date, else Quantitative if every non-empty cell is a number, else Nominal.
/// A list with no non-empty cells is Nominal.
ColumnType infer_column_type(std::span<const std::string> cells);

/// Converts text to a cell of the given column type; blank text is Missing.
CellValue parse_cell(std::string_view text, ColumnType type);

/// Tolerant equality used by containment. Numbers compare within
/// rel_tol * max(1, |a|, |b|); text compares after trimming; a number and a
/// text (or a date and a text) are equal when the text parses to the same value.
bool cell_equal(const CellValue& a, const CellValue& b, double rel_tol = kDefaultRelTol);

/// Total order over cells: Missing < Number < Date < Text.
std::strong_ordering compare_cells(const CellValue& a, const CellValue& b);

struct Column {
  std::string name;
  ColumnType type = ColumnType::Nominal;

  bool operator==(const Column&) const = default;
};

using Row = std::vector<CellValue>;

/// Immutable relational table. Every constructor path checks that column names
/// are unique, that each row has one cell per column, and that cells agree with
/// their column type (Quantitative holds numbers, Temporal holds dates, either
/// may hold Missing; Nominal holds anything).
class Table {
 public:
  Table() = default;
  Table(std::vector<Column> columns, std::vector<Row> rows);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t num_columns() const { return columns_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

  const Column& column(std::size_t i) const { return columns_[i]; }
  const CellValue& at(std::size_t row, std::size_t col) const { return rows_[row][col]; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Like find_column but throws SchemaError when absent.
  std::size_t column_index(std::string_view name) const;

  std::vector<std::string> column_names() const;

  bool operator==(const Table&) const = default;

 private:
  std::vector<Column> columns_;
  std::vector<Row> rows_;
};

/// Returns `base` if unused, else the first free of base_2, base_3, ...
std::string unique_name(std::span<const Column> existing, const std::string& base);

/// Builds a table from textual cells, inferring each column's type.
Table table_from_text(std::vector<std::string> names,
                      const std::vector<std::vector<std::string>>& rows);

/// Canonical text of a table with columns sorted by name and rows sorted by
/// all cells. Two tables with equal canonical forms hold the same content.
std::string canonical_form(const Table& t);

}  // namespace vizsynth
