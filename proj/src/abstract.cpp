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

// Sketch enumeration, the column-interval / value-reachability abstraction,
// and hole instantiation.

#include <algorithm>
#include <map>

#include "vizsynth/synthesizer.hpp"

namespace vizsynth {

std::string to_string(const Sketch& s) {
  if (s.ops.empty()) return "[]";
  std::string out = "[";
  for (std::size_t i = 0; i < s.ops.size(); ++i) {
    if (i) out += ", ";
    out += op_kind_name(s.ops[i]);
  }
  return out + "]";
}

std::vector<Sketch> enumerate_sketches(std::size_t depth_limit) {
  std::vector<Sketch> out{Sketch{}};
  std::vector<Sketch> frontier{Sketch{}};
  for (std::size_t d = 1; d <= depth_limit; ++d) {
    std::vector<Sketch> next;
    next.reserve(frontier.size() * kNumOpKinds);
    for (const auto& s : frontier) {
      for (std::size_t k = 0; k < kNumOpKinds; ++k) {
        Sketch child = s;
        child.ops.push_back(static_cast<OpKind>(k));
        next.push_back(std::move(child));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

namespace {

std::size_t sat_add(std::size_t a, std::size_t b) {
  return a > kUnboundedColumns - b ? kUnboundedColumns : a + b;
}

std::size_t sat_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kUnboundedColumns / b ? kUnboundedColumns : a * b;
}

bool creates_names(OpKind k) {
  switch (k) {
    case OpKind::PivotLonger:
    case OpKind::PivotWider:
    case OpKind::GroupSummarise:
    case OpKind::Mutate:
    case OpKind::Separate:
    case OpKind::Unite: return true;
    default: return false;
  }
}

// Output columns an operator fills with values not copied row-aligned from
// its input.
std::size_t derived_columns(OpKind k) {
  switch (k) {
    case OpKind::Filter:
    case OpKind::Select: return 0;
    case OpKind::PivotLonger:
    case OpKind::Separate: return 2;
    case OpKind::PivotWider: return kUnboundedColumns;
    default: return 1;
  }
}

std::optional<std::string> movable_key(const CellValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return std::string(trim(*s));
  if (const auto* d = std::get_if<Date>(&v)) return d->to_string();
  return std::nullopt;
}

}  // namespace

AbstractTable abstract_eval(std::span<const OpKind> remaining, const Table& concrete) {
  AbstractTable abs;
  abs.col_lo = abs.col_hi = concrete.num_columns();
  std::size_t rows = concrete.num_rows();

  abs.row_source = &concrete;
  bool pivot_longer_left = false;
  bool names_invented = false;
  for (auto k : remaining) {
    abs.new_columns = k == OpKind::PivotWider ? kUnboundedColumns
                                              : sat_add(abs.new_columns, derived_columns(k));
    if (k == OpKind::Separate || k == OpKind::Unite) abs.string_ops_remaining = true;
    if (k == OpKind::Mutate || k == OpKind::GroupSummarise || k == OpKind::CumSum ||
        k == OpKind::Separate) {
      abs.numeric_ops_remaining = true;
    }
    if (k == OpKind::PivotLonger) {
      pivot_longer_left = true;
      if (names_invented) abs.string_ops_remaining = true;
    }
    if (creates_names(k)) names_invented = true;
  }

  for (std::size_t c = 0; c < concrete.num_columns(); ++c) {
    const auto type = concrete.column(c).type;
    for (std::size_t r = 0; r < concrete.num_rows(); ++r) {
      const auto& cell = concrete.at(r, c);
      if (type == ColumnType::Quantitative) {
        if (const double* d = std::get_if<double>(&cell)) abs.numeric_values.push_back(*d);
      } else if (auto key = movable_key(cell)) {
        abs.movable_values.insert(std::move(*key));
      } else if (const double* d = std::get_if<double>(&cell)) {
        abs.movable_values.insert(format_number(*d));
      }
    }
    if (pivot_longer_left) abs.movable_values.insert(std::string(trim(concrete.column(c).name)));
  }
  std::sort(abs.numeric_values.begin(), abs.numeric_values.end());
  abs.numeric_values.erase(std::unique(abs.numeric_values.begin(), abs.numeric_values.end()),
                           abs.numeric_values.end());

  std::size_t& lo = abs.col_lo;
  std::size_t& hi = abs.col_hi;
  for (auto k : remaining) {
    if (hi == 0) break;
    switch (k) {
      case OpKind::Select:
        lo = 1;
        break;
      case OpKind::Filter:
      case OpKind::CumSum:
        break;
      case OpKind::PivotLonger:
        if (hi < 2) {
          hi = 0;
          break;
        }
        lo = std::min<std::size_t>(2, lo);
        rows = sat_mul(rows, hi);
        break;
      case OpKind::PivotWider:
        if (hi < 2) {
          hi = 0;
          break;
        }
        lo = std::max<std::size_t>(1, lo - 1);
        hi = hi == kUnboundedColumns ? hi : sat_add(hi - 2, rows);
        break;
      case OpKind::GroupSummarise:
        if (hi < 2) {
          hi = 0;
          break;
        }
        lo = 2;
        break;
      case OpKind::Mutate:
      case OpKind::Separate:
        lo = sat_add(lo, 1);
        hi = sat_add(hi, 1);
        break;
      case OpKind::Unite:
        if (hi < 2) {
          hi = 0;
          break;
        }
        lo = std::max<std::size_t>(1, lo - 1);
        if (hi != kUnboundedColumns) hi -= 1;
        break;
    }
  }
  if (hi == 0) lo = 0;
  return abs;
}

bool feasible(const AbstractTable& abs, const Table& example, double rel_tol) {
  if (abs.col_hi == 0 || example.num_columns() > abs.col_hi) return false;
  for (const auto& row : example.rows()) {
    for (const auto& cell : row) {
      if (std::holds_alternative<double>(cell)) {
        if (abs.numeric_ops_remaining) continue;
        bool found = std::any_of(abs.numeric_values.begin(), abs.numeric_values.end(),
                                 [&](double v) { return cell_equal(CellValue{v}, cell, rel_tol); });
        if (!found) return false;
      } else if (auto key = movable_key(cell)) {
        if (abs.string_ops_remaining) continue;
        if (!abs.movable_values.count(*key)) return false;
      }
    }
  }
  if (abs.row_source && abs.new_columns != kUnboundedColumns) {
    return contains_partial(*abs.row_source, example, abs.new_columns, rel_tol);
  }
  return true;
}

namespace {

template <typename T>
void push_unique_capped(std::vector<T>& out, const T& v, std::size_t cap) {
  if (out.size() >= cap) return;
  if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
}

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

ConstantPool ConstantPool::build(const Table& input, const Table& example, std::size_t cap) {
  ConstantPool pool;
  for (const auto& row : input.rows()) {
    for (const auto& cell : row) {
      if (const double* d = std::get_if<double>(&cell)) push_unique_capped(pool.numbers, *d, cap);
      if (const auto* s = std::get_if<std::string>(&cell)) push_unique_capped(pool.texts, *s, cap);
      if (const Date* d = std::get_if<Date>(&cell)) push_unique_capped(pool.dates, *d, cap);
    }
  }
  for (const auto& c : input.columns()) push_unique_capped(pool.texts, c.name, cap);
  for (const auto& row : example.rows()) {
    for (const auto& cell : row) {
      if (const double* d = std::get_if<double>(&cell)) {
        pool.numbers.push_back(*d);
        pool.mutate_literals.push_back(*d);
      }
      if (const auto* s = std::get_if<std::string>(&cell)) pool.texts.push_back(*s);
      if (const Date* d = std::get_if<Date>(&cell)) pool.dates.push_back(*d);
    }
  }
  sort_unique(pool.numbers);
  sort_unique(pool.texts);
  sort_unique(pool.dates);
  sort_unique(pool.mutate_literals);
  return pool;
}

namespace {

constexpr std::size_t kMaxSubsetColumns = 10;

// Subsets of `cols` with at least `min_size` members, keeping schema order
// inside each subset. Wide schemas fall back to singletons, pairs and the
// drop-one / full sets.
std::vector<std::vector<std::string>> subsets(const std::vector<std::string>& cols,
                                              std::size_t min_size, bool include_full) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = cols.size();
  if (n <= kMaxSubsetColumns) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      if (!include_full && mask == (std::size_t{1} << n) - 1) continue;
      std::vector<std::string> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) s.push_back(cols[i]);
      }
      if (s.size() >= min_size) out.push_back(std::move(s));
    }
    return out;
  }
  std::set<std::vector<std::string>> seen;
  auto add = [&](std::vector<std::string> s) {
    if (s.size() >= min_size && (include_full || s.size() < n) && seen.insert(s).second) {
      out.push_back(std::move(s));
    }
  };
  for (std::size_t i = 0; i < n; ++i) add({cols[i]});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) add({cols[i], cols[j]});
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> s;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) s.push_back(cols[j]);
    }
    add(std::move(s));
  }
  add(cols);
  return out;
}

std::string mutate_name(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "Sum";
    case ArithOp::Sub: return "Diff";
    case ArithOp::Mul: return "Product";
    case ArithOp::Div: return "Ratio";
  }
  return "Value";
}

}  // namespace

std::vector<TransformOp> instantiations(OpKind kind, const Table& table, const ConstantPool& pool) {
  std::vector<TransformOp> out;
  const auto names = table.column_names();
  const std::size_t n = names.size();
  auto type_of = [&](std::size_t c) { return table.column(c).type; };
  auto others = [&](std::size_t skip) {
    std::vector<std::string> v;
    for (std::size_t c = 0; c < n; ++c) {
      if (c != skip) v.push_back(names[c]);
    }
    return v;
  };

  switch (kind) {
    case OpKind::PivotLonger: {
      std::map<ColumnType, std::vector<std::string>> by_type;
      std::vector<ColumnType> type_order;
      for (std::size_t c = 0; c < n; ++c) {
        if (!by_type.count(type_of(c))) type_order.push_back(type_of(c));
        by_type[type_of(c)].push_back(names[c]);
      }
      for (auto t : type_order) {
        for (auto& s : subsets(by_type[t], 2, true)) out.push_back(PivotLonger{std::move(s)});
      }
      break;
    }
    case OpKind::PivotWider:
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (a != b) out.push_back(PivotWider{names[a], names[b]});
        }
      }
      break;
    case OpKind::Select:
      for (auto& s : subsets(names, 1, true)) out.push_back(Select{std::move(s)});
      break;
    case OpKind::Filter:
      for (std::size_t c = 0; c < n; ++c) {
        switch (type_of(c)) {
          case ColumnType::Nominal:
            for (auto op : {CompareOp::Eq, CompareOp::Ne}) {
              for (const auto& lit : pool.texts) out.push_back(Filter{names[c], op, lit});
            }
            break;
          case ColumnType::Quantitative:
          case ColumnType::Temporal:
            for (auto op : {CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le,
                            CompareOp::Gt, CompareOp::Ge}) {
              if (type_of(c) == ColumnType::Quantitative) {
                for (double lit : pool.numbers) out.push_back(Filter{names[c], op, lit});
              } else {
                for (Date lit : pool.dates) out.push_back(Filter{names[c], op, lit});
              }
            }
            break;
        }
      }
      break;
    case OpKind::GroupSummarise:
      for (std::size_t t = 0; t < n; ++t) {
        auto groups = subsets(others(t), 1, true);
        for (auto agg : {AggFunc::Sum, AggFunc::Mean, AggFunc::Count, AggFunc::Min, AggFunc::Max}) {
          if (agg != AggFunc::Count && type_of(t) != ColumnType::Quantitative) continue;
          std::string out_name = std::string(agg_func_name(agg)) + "_" + names[t];
          for (const auto& g : groups) out.push_back(GroupSummarise{g, agg, names[t], out_name});
        }
      }
      break;
    case OpKind::CumSum:
      for (std::size_t t = 0; t < n; ++t) {
        if (type_of(t) != ColumnType::Quantitative) continue;
        out.push_back(CumSum{{}, names[t]});
        for (auto& g : subsets(others(t), 1, true)) out.push_back(CumSum{std::move(g), names[t]});
      }
      break;
    case OpKind::Mutate:
      for (auto op : {ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div}) {
        const bool commutative = op == ArithOp::Add || op == ArithOp::Mul;
        for (std::size_t a = 0; a < n; ++a) {
          if (type_of(a) != ColumnType::Quantitative) continue;
          for (std::size_t b = commutative ? a + 1 : 0; b < n; ++b) {
            if (b == a || type_of(b) != ColumnType::Quantitative) continue;
            out.push_back(Mutate{mutate_name(op), names[a], op, names[b]});
          }
          for (double lit : pool.mutate_literals) {
            if (op == ArithOp::Div && lit == 0) continue;
            out.push_back(Mutate{mutate_name(op), names[a], op, lit});
          }
        }
      }
      break;
    case OpKind::Separate:
      for (std::size_t c = 0; c < n; ++c) {
        if (type_of(c) == ColumnType::Quantitative) continue;
        for (auto delim : kSeparateDelimiters) {
          bool present = std::any_of(table.rows().begin(), table.rows().end(), [&](const Row& r) {
            return to_text(r[c]).find(delim) != std::string::npos;
          });
          if (present) {
            out.push_back(Separate{names[c], std::string(delim), names[c] + "_1", names[c] + "_2"});
          }
        }
      }
      break;
    case OpKind::Unite:
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (a == b) continue;
          for (auto delim : kSeparateDelimiters) {
            out.push_back(Unite{names[a], names[b], std::string(delim), names[a] + "_" + names[b]});
          }
        }
      }
      break;
  }
  return out;
}

}  // namespace vizsynth
