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

// The table transformation language: ten tidyverse-style operators (group and
// summarise are fused) over immutable tables.

#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vizsynth/table.hpp"

namespace vizsynth {

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class AggFunc { Sum, Mean, Count, Min, Max };
enum class ArithOp { Add, Sub, Mul, Div };

std::string_view compare_op_symbol(CompareOp op);
std::string_view agg_func_name(AggFunc f);
std::string_view arith_op_symbol(ArithOp op);

inline constexpr std::array<std::string_view, 5> kSeparateDelimiters = {"-", "_", "/", " ", ":"};

/// Wide to long: each input row yields one row per collected column holding
/// (names_to = column name, values_to = cell). Id columns keep their order
/// and come first.
struct PivotLonger {
  std::vector<std::string> cols;
  std::string names_to = "name";
  std::string values_to = "value";
  bool operator==(const PivotLonger&) const = default;
};

/// Long to wide: distinct names_from values become columns filled from
/// values_from, one row per distinct tuple of the remaining columns.
struct PivotWider {
  std::string names_from;
  std::string values_from;
  bool operator==(const PivotWider&) const = default;
};

struct Select {
  std::vector<std::string> cols;
  bool operator==(const Select&) const = default;
};

struct Filter {
  std::string col;
  CompareOp op = CompareOp::Eq;
  CellValue lit;
  bool operator==(const Filter&) const = default;
};

/// group_by(group_cols) + summarise(out_name = agg(target)).
struct GroupSummarise {
  std::vector<std::string> group_cols;
  AggFunc agg = AggFunc::Sum;
  std::string target;
  std::string out_name;
  bool operator==(const GroupSummarise&) const = default;
};

/// Replaces `target` with its running sum within each group, in row order.
struct CumSum {
  std::vector<std::string> group_cols;
  std::string target;
  bool operator==(const CumSum&) const = default;
};

/// Appends out_name = lhs op rhs, where rhs is a column or a number.
struct Mutate {
  std::string out_name;
  std::string lhs;
  ArithOp op = ArithOp::Sub;
  std::variant<std::string, double> rhs;
  bool operator==(const Mutate&) const = default;
};

/// Splits `col` at the first `delim` into out1/out2, in place of `col`.
struct Separate {
  std::string col;
  std::string delim;
  std::string out1;
  std::string out2;
  bool operator==(const Separate&) const = default;
};

/// Appends out_name = col1 + delim + col2 and drops col1 and col2.
struct Unite {
  std::string col1;
  std::string col2;
  std::string delim;
  std::string out_name;
  bool operator==(const Unite&) const = default;
};

using TransformOp = std::variant<PivotLonger, PivotWider, Select, Filter, GroupSummarise, CumSum,
                                 Mutate, Separate, Unite>;

/// Operator kinds in search order; the enumerator values match the
/// TransformOp variant indices.
enum class OpKind {
  PivotLonger,
  PivotWider,
  Select,
  Filter,
  GroupSummarise,
  CumSum,
  Mutate,
  Separate,
  Unite,
};
inline constexpr std::size_t kNumOpKinds = 9;

inline OpKind kind_of(const TransformOp& op) { return static_cast<OpKind>(op.index()); }
std::string_view op_kind_name(OpKind k);

/// Ops applied left to right; the empty program is the identity.
struct TransformProgram {
  std::vector<TransformOp> ops;
  bool operator==(const TransformProgram&) const = default;
};

/// Applies one operator. Throws SchemaError, TypeError, PivotCollision,
/// DivisionByZero or AggregateError.
Table apply(const TransformOp& op, const Table& input);

/// Applies every operator in order; failures carry the operator index.
Table eval(const TransformProgram& prog, const Table& input);

/// Number of operators, a fused group+summarise counting once.
std::size_t complexity(const TransformProgram& prog);

/// Maps example column i to mapping[i], a column index of the big table.
using ColumnMapping = std::vector<std::size_t>;

/// Every injective, type-compatible column mapping under which each example
/// row matches some row of `big`. Example rows may share a big row. Mappings
/// come out in lexicographic order of big-column indices.
std::vector<ColumnMapping> contains(const Table& big, const Table& example,
                                    double rel_tol = kDefaultRelTol);

/// True when cells of an example column of type `example` may be matched
/// against a big-table column of type `big`.
/// True when an injective, type-compatible mapping of all but at most
/// `max_unmapped` example columns exists under which every example row,
/// restricted to the mapped columns, matches some row of `big`.
bool contains_partial(const Table& big, const Table& example, std::size_t max_unmapped,
                      double rel_tol = kDefaultRelTol);

bool types_compatible(ColumnType example, ColumnType big);

// Canonical text syntax, e.g.
//   pivot_longer(cols = c(`New York`, `San Francisco`), names_to = "City", values_to = "Temp")
//   %>% mutate(Diff = `New York` - `San Francisco`)
std::string serialize(const TransformOp& op);
std::string serialize(const TransformProgram& prog);
/// Inverse of serialize; throws ParseError.
TransformProgram parse_program(std::string_view text);

/// Column reference as written in program text: bare when it is a plain
/// identifier, else backquoted.
std::string quote_identifier(std::string_view name);

}  // namespace vizsynth
