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

// Sketch-based enumerative search for transformation programs P with
// example ⊆ P(input).
//
// Sketches (operator sequences with unfilled arguments) are enumerated by
// increasing depth. Each sketch is expanded left to right: a hole is filled
// from the current schema and the constant pool, the prefix is evaluated
// concretely, and the rest of the sketch is abstractly interpreted over the
// resulting table. A prefix whose abstraction cannot contain the example is
// dropped together with every completion.

#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vizsynth/decompiler.hpp"
#include "vizsynth/table.hpp"
#include "vizsynth/transform.hpp"

namespace vizsynth {

struct Sketch {
  std::vector<OpKind> ops;

  std::size_t depth() const { return ops.size(); }
  bool operator==(const Sketch&) const = default;
};

std::string to_string(const Sketch& s);

/// All sketches of depth 0..depth_limit: by depth, then lexicographically in
/// OpKind order. depth_limit = 2 gives 1 + 9 + 81 sketches.
std::vector<Sketch> enumerate_sketches(std::size_t depth_limit);

inline constexpr std::size_t kUnboundedColumns = std::numeric_limits<std::size_t>::max();

/// Over-approximation of every table a partial program can still produce.
struct AbstractTable {
  std::size_t col_lo = 1;
  std::size_t col_hi = 1;  // kUnboundedColumns when unknown
  /// Trimmed text / ISO date strings that can appear in nominal or temporal
  /// cells without a string-creating operator.
  std::set<std::string> movable_values;
  /// Numeric cells available without a number-creating operator.
  std::vector<double> numeric_values;
  /// Separate or Unite remains, or an operator that invents column names
  /// runs before a PivotLonger: text and date values are unconstrained.
  bool string_ops_remaining = false;
  /// Mutate, GroupSummarise, CumSum or Separate remains: numbers are unconstrained.
  bool numeric_ops_remaining = false;
  /// Every output row, restricted to the columns carried over from the
  /// concrete table, is a projection of one of its rows; at most
  /// `new_columns` output columns are derived otherwise (kUnboundedColumns
  /// when PivotWider remains). Points at the table given to abstract_eval.
  const Table* row_source = nullptr;
  std::size_t new_columns = 0;
};

/// Abstracts `concrete` (the evaluated prefix) and pushes it through the
/// remaining, still unfilled operators.
AbstractTable abstract_eval(std::span<const OpKind> remaining, const Table& concrete);

/// False only when no completion can contain `example`: more example columns
/// than the widest reachable table, or a checkable example value that is not
/// reachable.
bool feasible(const AbstractTable& abs, const Table& example, double rel_tol = kDefaultRelTol);

/// Literals available to Filter and Mutate holes.
struct ConstantPool {
  static constexpr std::size_t kInputCap = 64;

  std::vector<double> numbers;
  std::vector<std::string> texts;
  std::vector<Date> dates;
  /// Numeric example values; the only literals Mutate may use.
  std::vector<double> mutate_literals;

  /// Input-derived values (cells, plus column names as text) are capped per
  /// type in first-appearance order; every example cell is always added.
  /// Each list is sorted and duplicate-free.
  static ConstantPool build(const Table& input, const Table& example,
                            std::size_t cap = kInputCap);
};

/// Every argument instantiation of `kind` on a table, in search order
/// (columns left to right, literals in sorted order).
std::vector<TransformOp> instantiations(OpKind kind, const Table& table, const ConstantPool& pool);

struct SearchConfig {
  std::size_t max_depth = 3;
  std::size_t max_candidates = 20;
  /// One entry per worker; nullopt means no deadline.
  std::vector<std::optional<std::chrono::milliseconds>> worker_budgets = {
      std::chrono::milliseconds(5000), std::chrono::milliseconds(20000)};
  double rel_tol = kDefaultRelTol;
  bool memoize = true;

  /// Throws std::invalid_argument when max_depth < 1 or budgets are empty
  /// or not ascending.
  void validate() const;
  /// Single worker, no deadline.
  static SearchConfig seedless();
};

struct LayerSolution {
  TransformProgram program;
  ColumnMapping mapping;

  bool operator==(const LayerSolution&) const = default;
};

/// Complexity first, then program text, then mapping.
bool solution_less(const LayerSolution& a, const LayerSolution& b);

struct WorkerStats {
  std::chrono::milliseconds elapsed{0};
  std::size_t sketches_explored = 0;
  std::size_t pruned = 0;
  std::size_t evaluated = 0;
  bool truncated = false;
};

struct SearchStats {
  std::vector<WorkerStats> workers;
  std::size_t sketches_explored = 0;
  std::size_t pruned_count = 0;
  bool truncated = false;
};

/// One synthesis problem: find programs taking `input` to a superset of
/// `example`.
struct SearchTask {
  const Table* input = nullptr;
  const Table* example = nullptr;
};

struct SearchResult {
  /// Per task, sorted by solution_less.
  std::vector<std::vector<LayerSolution>> solutions;
  SearchStats stats;
};

/// Called on the collector thread each time a worker finishes, with every
/// solution gathered so far.
using WorkerDoneFn = std::function<void(std::size_t worker, const SearchResult& so_far)>;

/// Runs one worker per budget entry. Worker i takes the sketches whose index
/// is i modulo the worker count, for every task, until its budget runs out.
/// Workers share nothing mutable; solutions reach the calling thread through
/// a queue.
SearchResult run_search(std::span<const SearchTask> tasks, const SearchConfig& cfg,
                        const WorkerDoneFn& on_worker_done = {});

std::vector<LayerSolution> synthesize_layer(const Table& input, const LayerSketch& sketch,
                                            const SearchConfig& cfg, SearchStats* stats = nullptr);

/// Concrete programs of one sketch that survive pruning, in search order.
/// Used for inspection and tests; no containment check is applied.
std::vector<TransformProgram> expand(const Sketch& sketch, const ConstantPool& pool,
                                     const Table& input, const Table& example,
                                     double rel_tol = kDefaultRelTol);

}  // namespace vizsynth
