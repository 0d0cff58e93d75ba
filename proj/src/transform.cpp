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

#include "vizsynth/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>

#include "vizsynth/error.hpp"

namespace vizsynth {

std::string_view compare_op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "==";
}

std::string_view agg_func_name(AggFunc f) {
  switch (f) {
    case AggFunc::Sum: return "sum";
    case AggFunc::Mean: return "mean";
    case AggFunc::Count: return "count";
    case AggFunc::Min: return "min";
    case AggFunc::Max: return "max";
  }
  return "sum";
}

std::string_view arith_op_symbol(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
  }
  return "+";
}

std::string_view op_kind_name(OpKind k) {
  switch (k) {
    case OpKind::PivotLonger: return "pivot_longer";
    case OpKind::PivotWider: return "pivot_wider";
    case OpKind::Select: return "select";
    case OpKind::Filter: return "filter";
    case OpKind::GroupSummarise: return "summarise";
    case OpKind::CumSum: return "cumsum";
    case OpKind::Mutate: return "mutate";
    case OpKind::Separate: return "separate";
    case OpKind::Unite: return "unite";
  }
  return "?";
}

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(ErrorCode::SchemaError, msg); }
[[noreturn]] void type_error(const std::string& msg) { throw Error(ErrorCode::TypeError, msg); }

std::vector<std::size_t> resolve_distinct(const Table& t, const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) {
    auto i = t.column_index(n);
    if (std::find(idx.begin(), idx.end(), i) != idx.end()) {
      schema_error("column '" + n + "' listed twice");
    }
    idx.push_back(i);
  }
  return idx;
}

void require_quantitative(const Table& t, std::size_t col, std::string_view what) {
  if (t.column(col).type != ColumnType::Quantitative) {
    type_error(std::string(what) + " needs a quantitative column, '" + t.column(col).name +
               "' is " + std::string(column_type_name(t.column(col).type)));
  }
}

Row project(const Row& row, const std::vector<std::size_t>& cols) {
  Row out;
  out.reserve(cols.size());
  for (auto c : cols) out.push_back(row[c]);
  return out;
}

// Exact-key ordering for grouping; tolerance plays no part in grouping.
struct RowLess {
  bool operator()(const Row& a, const Row& b) const {
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end(),
                                                  compare_cells) < 0;
  }
};

Table apply_op(const PivotLonger& op, const Table& in) {
  if (op.cols.size() < 2) schema_error("pivot_longer needs at least two columns");
  auto collected = resolve_distinct(in, op.cols);
  ColumnType type = in.column(collected[0]).type;
  for (auto c : collected) {
    if (in.column(c).type != type) type_error("pivot_longer columns must share one type");
  }
  std::vector<std::size_t> ids;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < in.num_columns(); ++c) {
    if (std::find(collected.begin(), collected.end(), c) == collected.end()) {
      ids.push_back(c);
      columns.push_back(in.column(c));
    }
  }
  columns.push_back({unique_name(columns, op.names_to), ColumnType::Nominal});
  columns.push_back({unique_name(columns, op.values_to), type});
  std::vector<Row> rows;
  rows.reserve(in.num_rows() * collected.size());
  for (const auto& r : in.rows()) {
    for (auto c : collected) {
      Row out = project(r, ids);
      out.emplace_back(in.column(c).name);
      out.push_back(r[c]);
      rows.push_back(std::move(out));
    }
  }
  return Table(std::move(columns), std::move(rows));
}

Table apply_op(const PivotWider& op, const Table& in) {
  auto names_col = in.column_index(op.names_from);
  auto values_col = in.column_index(op.values_from);
  if (names_col == values_col) schema_error("pivot_wider names_from and values_from coincide");
  std::vector<std::size_t> keys;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < in.num_columns(); ++c) {
    if (c != names_col && c != values_col) {
      keys.push_back(c);
      columns.push_back(in.column(c));
    }
  }
  std::vector<std::string> new_names;
  std::map<std::string, std::size_t> name_slot;
  for (const auto& r : in.rows()) {
    std::string n = is_missing(r[names_col]) ? "NA" : to_text(r[names_col]);
    if (name_slot.emplace(n, new_names.size()).second) new_names.push_back(n);
  }
  const std::size_t base = columns.size();
  for (const auto& n : new_names) {
    columns.push_back({unique_name(columns, n), in.column(values_col).type});
  }
  std::map<Row, std::size_t, RowLess> group_of;
  std::vector<Row> rows;
  std::vector<std::vector<bool>> filled;
  for (const auto& r : in.rows()) {
    Row key = project(r, keys);
    auto [it, fresh] = group_of.emplace(key, rows.size());
    if (fresh) {
      key.resize(columns.size(), Missing{});
      rows.push_back(std::move(key));
      filled.emplace_back(new_names.size(), false);
    }
    std::string n = is_missing(r[names_col]) ? "NA" : to_text(r[names_col]);
    std::size_t slot = name_slot.at(n);
    if (filled[it->second][slot]) {
      throw Error(ErrorCode::PivotCollision,
                  "pivot_wider: two rows share the key for column '" + n + "'");
    }
    filled[it->second][slot] = true;
    rows[it->second][base + slot] = r[values_col];
  }
  return Table(std::move(columns), std::move(rows));
}

Table apply_op(const Select& op, const Table& in) {
  if (op.cols.empty()) schema_error("select needs at least one column");
  auto idx = resolve_distinct(in, op.cols);
  std::vector<Column> columns;
  for (auto c : idx) columns.push_back(in.column(c));
  std::vector<Row> rows;
  rows.reserve(in.num_rows());
  for (const auto& r : in.rows()) rows.push_back(project(r, idx));
  return Table(std::move(columns), std::move(rows));
}

bool predicate_holds(const CellValue& cell, CompareOp op, const CellValue& lit) {
  if (is_missing(cell) || is_missing(lit)) return false;
  auto ord = compare_cells(cell, lit);
  if (const double* a = std::get_if<double>(&cell)) {
    if (const double* b = std::get_if<double>(&lit)) {
      ord = *a < *b ? std::strong_ordering::less
                    : (*b < *a ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
  }
  switch (op) {
    case CompareOp::Eq: return ord == 0;
    case CompareOp::Ne: return ord != 0;
    case CompareOp::Lt: return ord < 0;
    case CompareOp::Le: return ord <= 0;
    case CompareOp::Gt: return ord > 0;
    case CompareOp::Ge: return ord >= 0;
  }
  return false;
}

Table apply_op(const Filter& op, const Table& in) {
  auto col = in.column_index(op.col);
  ColumnType type = in.column(col).type;
  bool lit_ok = false;
  switch (type) {
    case ColumnType::Quantitative: lit_ok = std::holds_alternative<double>(op.lit); break;
    case ColumnType::Temporal: lit_ok = std::holds_alternative<Date>(op.lit); break;
    case ColumnType::Nominal: lit_ok = std::holds_alternative<std::string>(op.lit); break;
  }
  if (!lit_ok) {
    type_error("filter literal '" + to_text(op.lit) + "' does not match " +
               std::string(column_type_name(type)) + " column '" + op.col + "'");
  }
  if (type == ColumnType::Nominal && op.op != CompareOp::Eq && op.op != CompareOp::Ne) {
    type_error("nominal column '" + op.col + "' only supports == and !=");
  }
  std::vector<Row> rows;
  for (const auto& r : in.rows()) {
    if (predicate_holds(r[col], op.op, op.lit)) rows.push_back(r);
  }
  return Table(in.columns(), std::move(rows));
}

Table apply_op(const GroupSummarise& op, const Table& in) {
  if (op.group_cols.empty()) schema_error("summarise needs at least one grouping column");
  auto groups = resolve_distinct(in, op.group_cols);
  auto target = in.column_index(op.target);
  if (std::find(groups.begin(), groups.end(), target) != groups.end()) {
    schema_error("summarise target '" + op.target + "' is also a grouping column");
  }
  if (op.agg != AggFunc::Count) require_quantitative(in, target, "summarise");

  std::vector<Column> columns;
  for (auto g : groups) columns.push_back(in.column(g));
  columns.push_back({unique_name(columns, op.out_name), ColumnType::Quantitative});

  struct Acc {
    double sum = 0, min = 0, max = 0;
    std::size_t n = 0;
  };
  std::map<Row, std::size_t, RowLess> group_of;
  std::vector<Row> keys;
  std::vector<Acc> accs;
  for (const auto& r : in.rows()) {
    auto [it, fresh] = group_of.emplace(project(r, groups), keys.size());
    if (fresh) {
      keys.push_back(it->first);
      accs.emplace_back();
    }
    const auto& cell = r[target];
    if (is_missing(cell)) continue;
    Acc& a = accs[it->second];
    if (const double* v = std::get_if<double>(&cell)) {
      a.sum += *v;
      a.min = a.n == 0 ? *v : std::min(a.min, *v);
      a.max = a.n == 0 ? *v : std::max(a.max, *v);
    }
    ++a.n;
  }
  std::vector<Row> rows;
  rows.reserve(keys.size());
  for (std::size_t g = 0; g < keys.size(); ++g) {
    const Acc& a = accs[g];
    if (op.agg != AggFunc::Count && a.n == 0) {
      throw Error(ErrorCode::AggregateError,
                  "summarise: a group has only missing values in '" + op.target + "'");
    }
    double v = 0;
    switch (op.agg) {
      case AggFunc::Sum: v = a.sum; break;
      case AggFunc::Mean: v = a.sum / static_cast<double>(a.n); break;
      case AggFunc::Count: v = static_cast<double>(a.n); break;
      case AggFunc::Min: v = a.min; break;
      case AggFunc::Max: v = a.max; break;
    }
    Row row = keys[g];
    row.emplace_back(v);
    rows.push_back(std::move(row));
  }
  return Table(std::move(columns), std::move(rows));
}

Table apply_op(const CumSum& op, const Table& in) {
  auto groups = resolve_distinct(in, op.group_cols);
  auto target = in.column_index(op.target);
  if (std::find(groups.begin(), groups.end(), target) != groups.end()) {
    schema_error("cumsum target '" + op.target + "' is also a grouping column");
  }
  require_quantitative(in, target, "cumsum");
  std::map<Row, double, RowLess> running;
  std::vector<Row> rows = in.rows();
  for (auto& r : rows) {
    if (is_missing(r[target])) continue;
    double& total = running[project(r, groups)];
    total += std::get<double>(r[target]);
    r[target] = total;
  }
  return Table(in.columns(), std::move(rows));
}

Table apply_op(const Mutate& op, const Table& in) {
  auto lhs = in.column_index(op.lhs);
  require_quantitative(in, lhs, "mutate");
  std::optional<std::size_t> rhs_col;
  if (const auto* name = std::get_if<std::string>(&op.rhs)) {
    rhs_col = in.column_index(*name);
    require_quantitative(in, *rhs_col, "mutate");
  }
  std::vector<Column> columns = in.columns();
  columns.push_back({unique_name(columns, op.out_name), ColumnType::Quantitative});
  std::vector<Row> rows;
  rows.reserve(in.num_rows());
  for (const auto& r : in.rows()) {
    Row out = r;
    const CellValue& a = r[lhs];
    CellValue b = rhs_col ? r[*rhs_col] : CellValue{std::get<double>(op.rhs)};
    if (is_missing(a) || is_missing(b)) {
      out.emplace_back(Missing{});
    } else {
      double x = std::get<double>(a), y = std::get<double>(b);
      double v = 0;
      switch (op.op) {
        case ArithOp::Add: v = x + y; break;
        case ArithOp::Sub: v = x - y; break;
        case ArithOp::Mul: v = x * y; break;
        case ArithOp::Div:
          if (y == 0) throw Error(ErrorCode::DivisionByZero, "mutate: division by zero");
          v = x / y;
          break;
      }
      if (!std::isfinite(v)) type_error("mutate produced a non-finite number");
      out.emplace_back(v);
    }
    rows.push_back(std::move(out));
  }
  return Table(std::move(columns), std::move(rows));
}

Table apply_op(const Separate& op, const Table& in) {
  auto col = in.column_index(op.col);
  if (in.column(col).type == ColumnType::Quantitative) {
    type_error("separate needs a text or date column, '" + op.col + "' is quantitative");
  }
  if (op.delim.empty()) schema_error("separate needs a non-empty delimiter");
  std::vector<Column> rest;
  for (std::size_t c = 0; c < in.num_columns(); ++c) {
    if (c != col) rest.push_back(in.column(c));
  }
  std::string name1 = unique_name(rest, op.out1);
  rest.push_back({name1, ColumnType::Nominal});
  std::string name2 = unique_name(rest, op.out2);

  std::vector<std::string> left, right;
  for (const auto& r : in.rows()) {
    std::string text = to_text(r[col]);
    auto pos = text.find(op.delim);
    if (is_missing(r[col])) {
      left.emplace_back();
      right.emplace_back();
    } else if (pos == std::string::npos) {
      left.push_back(text);
      right.emplace_back();
    } else {
      left.push_back(text.substr(0, pos));
      right.push_back(text.substr(pos + op.delim.size()));
    }
  }
  ColumnType t1 = infer_column_type(left), t2 = infer_column_type(right);
  std::vector<Column> columns;
  for (std::size_t c = 0; c < in.num_columns(); ++c) {
    if (c == col) {
      columns.push_back({name1, t1});
      columns.push_back({name2, t2});
    } else {
      columns.push_back(in.column(c));
    }
  }
  std::vector<Row> rows;
  rows.reserve(in.num_rows());
  for (std::size_t r = 0; r < in.num_rows(); ++r) {
    Row out;
    out.reserve(columns.size());
    for (std::size_t c = 0; c < in.num_columns(); ++c) {
      if (c == col) {
        out.push_back(parse_cell(left[r], t1));
        out.push_back(parse_cell(right[r], t2));
      } else {
        out.push_back(in.at(r, c));
      }
    }
    rows.push_back(std::move(out));
  }
  return Table(std::move(columns), std::move(rows));
}

Table apply_op(const Unite& op, const Table& in) {
  auto c1 = in.column_index(op.col1);
  auto c2 = in.column_index(op.col2);
  if (c1 == c2) schema_error("unite needs two distinct columns");
  std::vector<std::size_t> keep;
  std::vector<Column> columns;
  for (std::size_t c = 0; c < in.num_columns(); ++c) {
    if (c != c1 && c != c2) {
      keep.push_back(c);
      columns.push_back(in.column(c));
    }
  }
  columns.push_back({unique_name(columns, op.out_name), ColumnType::Nominal});
  std::vector<Row> rows;
  rows.reserve(in.num_rows());
  for (const auto& r : in.rows()) {
    Row out = project(r, keep);
    if (is_missing(r[c1]) || is_missing(r[c2])) {
      out.emplace_back(Missing{});
    } else {
      out.emplace_back(to_text(r[c1]) + op.delim + to_text(r[c2]));
    }
    rows.push_back(std::move(out));
  }
  return Table(std::move(columns), std::move(rows));
}

}  // namespace

Table apply(const TransformOp& op, const Table& input) {
  return std::visit([&](const auto& o) { return apply_op(o, input); }, op);
}

Table eval(const TransformProgram& prog, const Table& input) {
  Table current = input;
  for (std::size_t i = 0; i < prog.ops.size(); ++i) {
    try {
      current = vizsynth::apply(prog.ops[i], current);
    } catch (Error& e) {
      e.with_op_index(i);
      throw;
    }
  }
  return current;
}

std::size_t complexity(const TransformProgram& prog) { return prog.ops.size(); }

bool types_compatible(ColumnType example, ColumnType big) {
  switch (example) {
    case ColumnType::Quantitative: return big == ColumnType::Quantitative;
    case ColumnType::Nominal:
    case ColumnType::Temporal: return big != ColumnType::Quantitative;
  }
  return false;
}

namespace {

// Backtracking over example columns. For example row r, the big rows still
// consistent with the partial mapping are kept as a bitset; mapping column i
// to big column j intersects it with the rows where column j matches.
class ContainmentSearch {
 public:
  ContainmentSearch(const Table& big, const Table& example, double rel_tol)
      : big_(big), ex_(example), tol_(rel_tol) {}

  std::vector<ColumnMapping> run() {
    const std::size_t k = ex_.num_columns();
    if (k == 0 || ex_.empty() || k > big_.num_columns()) return {};
    if (!prepare(0)) return {};
    used_.assign(big_.num_columns(), false);
    mapping_.assign(k, 0);
    recurse(0, full_alive());
    return std::move(out_);
  }

  bool run_partial(std::size_t max_unmapped) {
    const std::size_t k = ex_.num_columns();
    if (max_unmapped >= k || ex_.empty()) return true;
    if (!prepare(max_unmapped)) return false;
    used_.assign(big_.num_columns(), false);
    return partial(0, max_unmapped, full_alive());
  }

 private:
  using Bits = std::vector<std::uint64_t>;

  // Fills the match bitsets and per-column candidates. Fails when more than
  // `slack` example columns have no compatible big column.
  bool prepare(std::size_t slack) {
    const std::size_t k = ex_.num_columns();
    const std::size_t nb = big_.num_columns();
    rows_ = ex_.num_rows();
    words_ = (big_.num_rows() + 63) / 64;
    bits_.assign(k * nb * rows_ * words_, 0);
    candidates_.assign(k, {});
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < nb; ++j) {
        if (!types_compatible(ex_.column(i).type, big_.column(j).type)) continue;
        bool ok = true;
        for (std::size_t r = 0; r < rows_ && ok; ++r) {
          std::uint64_t* w = word_ptr(i, j, r);
          bool any = false;
          for (std::size_t o = 0; o < big_.num_rows(); ++o) {
            if (cell_equal(big_.at(o, j), ex_.at(r, i), tol_)) {
              w[o / 64] |= std::uint64_t{1} << (o % 64);
              any = true;
            }
          }
          ok = any;
        }
        if (ok) candidates_[i].push_back(j);
      }
      if (candidates_[i].empty() && slack-- == 0) return false;
    }
    return true;
  }

  std::uint64_t* word_ptr(std::size_t i, std::size_t j, std::size_t r) {
    return bits_.data() + ((i * big_.num_columns() + j) * rows_ + r) * words_;
  }

  Bits full_alive() const {
    Bits b(rows_ * words_, ~std::uint64_t{0});
    return b;
  }

  // alive ∧ match(i, j), or false when some example row has no row left.
  bool narrow(std::size_t i, std::size_t j, const Bits& alive, Bits& next) {
    next.resize(alive.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::uint64_t* m = word_ptr(i, j, r);
      std::uint64_t any = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        next[r * words_ + w] = alive[r * words_ + w] & m[w];
        any |= next[r * words_ + w];
      }
      if (!any) return false;
    }
    return true;
  }

  void recurse(std::size_t i, const Bits& alive) {
    if (i == ex_.num_columns()) {
      out_.push_back(mapping_);
      return;
    }
    Bits next;
    for (auto j : candidates_[i]) {
      if (used_[j] || !narrow(i, j, alive, next)) continue;
      used_[j] = true;
      mapping_[i] = j;
      recurse(i + 1, next);
      used_[j] = false;
    }
  }

  bool partial(std::size_t i, std::size_t skips, const Bits& alive) {
    if (i == ex_.num_columns()) return true;
    Bits next;
    for (auto j : candidates_[i]) {
      if (used_[j] || !narrow(i, j, alive, next)) continue;
      used_[j] = true;
      bool found = partial(i + 1, skips, next);
      used_[j] = false;
      if (found) return true;
    }
    return skips > 0 && partial(i + 1, skips - 1, alive);
  }

  const Table& big_;
  const Table& ex_;
  double tol_;
  std::size_t rows_ = 0;
  std::size_t words_ = 0;
  Bits bits_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<bool> used_;
  ColumnMapping mapping_;
  std::vector<ColumnMapping> out_;
};

}  // namespace

std::vector<ColumnMapping> contains(const Table& big, const Table& example, double rel_tol) {
  return ContainmentSearch(big, example, rel_tol).run();
}

bool contains_partial(const Table& big, const Table& example, std::size_t max_unmapped,
                      double rel_tol) {
  return ContainmentSearch(big, example, rel_tol).run_partial(max_unmapped);
}

}  // namespace vizsynth
