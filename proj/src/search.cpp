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

#include <algorithm>
#include <charconv>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <variant>

#include "vizsynth/error.hpp"
#include "vizsynth/synthesizer.hpp"

namespace vizsynth {

void SearchConfig::validate() const {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be at least 1");
  if (worker_budgets.empty()) throw std::invalid_argument("at least one worker budget is required");
  for (std::size_t i = 1; i < worker_budgets.size(); ++i) {
    const auto& prev = worker_budgets[i - 1];
    const auto& cur = worker_budgets[i];
    // nullopt is the unbounded budget and sorts last
    if (!prev && cur) throw std::invalid_argument("worker budgets must be ascending");
    if (prev && cur && *cur < *prev) throw std::invalid_argument("worker budgets must be ascending");
  }
  if (rel_tol < 0) throw std::invalid_argument("rel_tol must be non-negative");
}

SearchConfig SearchConfig::seedless() {
  SearchConfig cfg;
  cfg.worker_budgets = {std::nullopt};
  return cfg;
}

bool solution_less(const LayerSolution& a, const LayerSolution& b) {
  auto ca = complexity(a.program), cb = complexity(b.program);
  if (ca != cb) return ca < cb;
  auto sa = serialize(a.program), sb = serialize(b.program);
  if (sa != sb) return sa < sb;
  return a.mapping < b.mapping;
}

namespace {

using Clock = std::chrono::steady_clock;

// Caches evaluated prefixes (keyed by their program text) and feasibility
// verdicts (prefix text plus the operator kinds still to fill). A failed
// evaluation is cached as nullptr.
class PrefixMemo {
 public:
  PrefixMemo(bool enabled, std::size_t max_cached_length)
      : enabled_(enabled), max_cached_length_(max_cached_length) {}

  /// Prefixes longer than max_cached_length are computed but not stored;
  /// no longer sketch can reuse them.
  template <typename Compute>
  std::shared_ptr<const Table> table(const std::string& key, std::size_t length,
                                     Compute&& compute) {
    if (!enabled_ || length > max_cached_length_) return compute();
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    auto t = compute();
    tables_.emplace(key, t);
    return t;
  }

  template <typename Compute>
  bool verdict(const std::string& key, Compute&& compute) {
    if (!enabled_) return compute();
    if (auto it = verdicts_.find(key); it != verdicts_.end()) return it->second;
    bool v = compute();
    verdicts_.emplace(key, v);
    return v;
  }

 private:
  bool enabled_;
  std::size_t max_cached_length_;
  std::unordered_map<std::string, std::shared_ptr<const Table>> tables_;
  std::unordered_map<std::string, bool> verdicts_;
};

// Columns of the input that reach the output of `op` row-aligned, and how
// many output columns hold anything else. Empty for PivotWider, whose new
// columns are unbounded.
using Carried = std::pair<std::vector<std::string>, std::size_t>;

std::optional<Carried> carried_columns(const TransformOp& op, const Table& in) {
  auto all_but = [&](std::initializer_list<std::string_view> drop) {
    std::vector<std::string> keep;
    for (const auto& c : in.columns()) {
      if (std::find(drop.begin(), drop.end(), c.name) == drop.end()) keep.push_back(c.name);
    }
    return keep;
  };
  if (const auto* o = std::get_if<PivotLonger>(&op)) {
    std::vector<std::string> keep;
    for (const auto& c : in.columns()) {
      if (std::find(o->cols.begin(), o->cols.end(), c.name) == o->cols.end()) keep.push_back(c.name);
    }
    return Carried{keep, 2};
  }
  if (std::holds_alternative<PivotWider>(op)) return std::nullopt;
  if (const auto* o = std::get_if<Select>(&op)) return Carried{o->cols, 0};
  if (std::holds_alternative<Filter>(op)) return Carried{all_but({}), 0};
  if (const auto* o = std::get_if<GroupSummarise>(&op)) return Carried{o->group_cols, 1};
  if (const auto* o = std::get_if<CumSum>(&op)) return Carried{all_but({o->target}), 1};
  if (std::holds_alternative<Mutate>(op)) return Carried{all_but({}), 1};
  if (const auto* o = std::get_if<Separate>(&op)) return Carried{all_but({o->col}), 2};
  const auto& u = std::get<Unite>(op);
  return Carried{all_but({u.col1, u.col2}), 1};
}

std::size_t derived_after(std::span<const OpKind> rest) {
  std::size_t n = 0;
  for (auto k : rest) {
    switch (k) {
      case OpKind::Filter:
      case OpKind::Select: break;
      case OpKind::PivotLonger:
      case OpKind::Separate: n += 2; break;
      case OpKind::PivotWider: return kUnboundedColumns;
      default: n += 1; break;
    }
  }
  return n;
}

std::string kinds_key(std::span<const OpKind> kinds) {
  std::string k;
  for (auto op : kinds) k += static_cast<char>('a' + static_cast<int>(op));
  return k;
}

// Depth-first hole filling for one sketch. Children that fail to evaluate,
// come out empty, equal their parent, or are abstractly infeasible are
// pruned. Dropping empty and unchanged tables only removes programs whose
// output another, shorter program in the same space already produces.
class SketchExpander {
 public:
  using Leaf = std::function<void(const std::vector<TransformOp>&, const Table&)>;

  SketchExpander(const Table& input, const Table& example, const ConstantPool& pool,
                 double rel_tol, PrefixMemo& memo, std::optional<Clock::time_point> deadline,
                 WorkerStats& stats)
      : input_(input),
        example_(example),
        pool_(pool),
        rel_tol_(rel_tol),
        memo_(memo),
        deadline_(deadline),
        stats_(stats) {}

  /// Returns false when the deadline cut the expansion short.
  bool run(const Sketch& sketch, const Leaf& leaf) {
    sketch_ = &sketch;
    leaf_ = &leaf;
    ops_.clear();
    if (!check(std::string(), 0, input_)) {
      ++stats_.pruned;
      return true;
    }
    return dfs(0, input_, std::string());
  }

 private:
  bool expired() const { return deadline_ && Clock::now() >= *deadline_; }

  bool check(const std::string& key, std::size_t filled, const Table& t) {
    std::span<const OpKind> rest(sketch_->ops.data() + filled, sketch_->ops.size() - filled);
    return memo_.verdict(key + '\x1d' + kinds_key(rest), [&] {
      return feasible(abstract_eval(rest, t), example_, rel_tol_);
    });
  }

  // Child keys extend the parent key with the operator kind and the
  // instantiation index; instantiations() is deterministic per table, so the
  // key identifies the program prefix without serializing it.
  bool dfs(std::size_t level, const Table& table, const std::string& key) {
    if (level == sketch_->ops.size()) {
      (*leaf_)(ops_, table);
      return true;
    }
    const bool last = level + 1 == sketch_->ops.size();
    const OpKind kind = sketch_->ops[level];
    auto ops = instantiations(kind, table, pool_);
    const std::size_t later = derived_after(
        std::span<const OpKind>(sketch_->ops.data() + level + 1, sketch_->ops.size() - level - 1));
    // Before evaluating an operator: the example, minus the columns the rest
    // of the program may derive, must already sit in the carried columns.
    std::map<std::vector<std::string>, bool> carried_ok;
    auto plausible = [&](const TransformOp& op) {
      if (later == kUnboundedColumns) return true;
      auto carried = carried_columns(op, table);
      if (!carried) return true;
      const std::size_t slack = carried->second + later;
      if (slack >= example_.num_columns()) return true;
      auto [it, fresh] = carried_ok.emplace(carried->first, false);
      if (fresh) {
        try {
          Table projected = vizsynth::apply(Select{carried->first}, table);
          it->second = contains_partial(projected, example_, slack, rel_tol_);
        } catch (const Error&) {
          it->second = carried->first.empty();
        }
      }
      return it->second;
    };
    std::string child_key;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (expired()) return false;
      if (!plausible(ops[i])) {
        ++stats_.pruned;
        continue;
      }
      child_key = key;
      child_key += static_cast<char>('a' + static_cast<int>(kind));
      char digits[24];
      child_key.append(digits, std::to_chars(digits, digits + sizeof digits, i).ptr);
      child_key += '.';
      const auto& op = ops[i];
      auto child = memo_.table(child_key, level + 1, [&]() -> std::shared_ptr<const Table> {
        ++stats_.evaluated;
        try {
          return std::make_shared<const Table>(vizsynth::apply(op, table));
        } catch (const Error&) {
          return nullptr;
        }
      });
      // A complete program needs no abstract check: containment decides it.
      if (!child || child->empty() || *child == table ||
          (!last && !check(child_key, level + 1, *child))) {
        ++stats_.pruned;
        continue;
      }
      ops_.push_back(op);
      bool finished = dfs(level + 1, *child, child_key);
      ops_.pop_back();
      if (!finished) return false;
    }
    return true;
  }

  const Table& input_;
  const Table& example_;
  const ConstantPool& pool_;
  double rel_tol_;
  PrefixMemo& memo_;
  std::optional<Clock::time_point> deadline_;
  WorkerStats& stats_;
  const Sketch* sketch_ = nullptr;
  const Leaf* leaf_ = nullptr;
  std::vector<TransformOp> ops_;
};

struct FoundMsg {
  std::size_t task;
  LayerSolution solution;
};
struct DoneMsg {
  std::size_t worker;
  WorkerStats stats;
};
using Message = std::variant<FoundMsg, DoneMsg>;

class MessageQueue {
 public:
  void push(Message m) {
    {
      std::lock_guard lock(mu_);
      q_.push_back(std::move(m));
    }
    cv_.notify_one();
  }
  Message pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return !q_.empty(); });
    Message m = std::move(q_.front());
    q_.pop_front();
    return m;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Message> q_;
};

void run_worker(std::size_t index, std::size_t count, std::span<const SearchTask> tasks,
                const std::vector<ConstantPool>& pools, const std::vector<Sketch>& sketches,
                const SearchConfig& cfg, MessageQueue& queue) {
  const auto start = Clock::now();
  std::optional<Clock::time_point> deadline;
  if (cfg.worker_budgets[index]) deadline = start + *cfg.worker_budgets[index];

  WorkerStats stats;
  std::vector<PrefixMemo> memos(tasks.size(), PrefixMemo(cfg.memoize, cfg.max_depth - 1));
  bool cut = false;
  for (std::size_t t = 0; t < tasks.size() && !cut; ++t) {
    const Table& example = *tasks[t].example;
    SketchExpander expander(*tasks[t].input, example, pools[t], cfg.rel_tol, memos[t], deadline,
                            stats);
    for (std::size_t s = index; s < sketches.size() && !cut; s += count) {
      ++stats.sketches_explored;
      cut = !expander.run(sketches[s], [&](const std::vector<TransformOp>& ops, const Table& out) {
        for (auto& m : contains(out, example, cfg.rel_tol)) {
          queue.push(FoundMsg{t, LayerSolution{TransformProgram{ops}, std::move(m)}});
        }
      });
    }
  }
  stats.truncated = cut;
  stats.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
  queue.push(DoneMsg{index, stats});
}

void sort_solutions(std::vector<LayerSolution>& v) {
  // serialize once per element rather than once per comparison
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) keys.emplace_back(serialize(v[i].program), i);
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ca = complexity(v[a].program), cb = complexity(v[b].program);
    if (ca != cb) return ca < cb;
    if (keys[a].first != keys[b].first) return keys[a].first < keys[b].first;
    return v[a].mapping < v[b].mapping;
  });
  std::vector<LayerSolution> sorted;
  sorted.reserve(v.size());
  for (auto i : order) sorted.push_back(std::move(v[i]));
  v = std::move(sorted);
}

}  // namespace

SearchResult run_search(std::span<const SearchTask> tasks, const SearchConfig& cfg,
                        const WorkerDoneFn& on_worker_done) {
  cfg.validate();
  const auto sketches = enumerate_sketches(cfg.max_depth);
  std::vector<ConstantPool> pools;
  pools.reserve(tasks.size());
  for (const auto& t : tasks) pools.push_back(ConstantPool::build(*t.input, *t.example));

  const std::size_t workers = cfg.worker_budgets.size();
  MessageQueue queue;
  SearchResult result;
  result.solutions.resize(tasks.size());
  result.stats.workers.resize(workers);

  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back(run_worker, w, workers, tasks, std::cref(pools), std::cref(sketches),
                         std::cref(cfg), std::ref(queue));
  }

  std::size_t done = 0;
  while (done < workers) {
    Message m = queue.pop();
    if (auto* found = std::get_if<FoundMsg>(&m)) {
      result.solutions[found->task].push_back(std::move(found->solution));
      continue;
    }
    auto& d = std::get<DoneMsg>(m);
    ++done;
    result.stats.workers[d.worker] = d.stats;
    result.stats.sketches_explored += d.stats.sketches_explored;
    result.stats.pruned_count += d.stats.pruned;
    result.stats.truncated = result.stats.truncated || d.stats.truncated;
    if (on_worker_done) {
      SearchResult snapshot = result;
      for (auto& s : snapshot.solutions) sort_solutions(s);
      on_worker_done(d.worker, snapshot);
    }
  }
  for (auto& s : result.solutions) sort_solutions(s);
  return result;
}

std::vector<LayerSolution> synthesize_layer(const Table& input, const LayerSketch& sketch,
                                            const SearchConfig& cfg, SearchStats* stats) {
  SearchTask task{&input, &sketch.example_table};
  auto result = run_search(std::span<const SearchTask>(&task, 1), cfg);
  if (stats) *stats = result.stats;
  return std::move(result.solutions.front());
}

std::vector<TransformProgram> expand(const Sketch& sketch, const ConstantPool& pool,
                                     const Table& input, const Table& example, double rel_tol) {
  PrefixMemo memo(true, sketch.depth());
  WorkerStats stats;
  SketchExpander expander(input, example, pool, rel_tol, memo, std::nullopt, stats);
  std::vector<TransformProgram> out;
  expander.run(sketch, [&](const std::vector<TransformOp>& ops, const Table&) {
    out.push_back(TransformProgram{ops});
  });
  return out;
}

}  // namespace vizsynth
