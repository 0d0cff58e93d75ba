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

#include "vizsynth/pipeline.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "vizsynth/error.hpp"

namespace vizsynth {

namespace {

struct LayerOption {
  TransformProgram program;
  LayerSpec layer;
  Table data;
  std::string form;
  std::string text;
};

// Solutions arrive sorted by (complexity, program text, mapping), so the
// first member of each canonical class is the one dedup would keep.
std::vector<LayerOption> layer_options(const Table& input, const LayerSketch& sketch,
                                       const std::vector<LayerSolution>& solutions,
                                       std::size_t max) {
  struct Ranked {
    std::size_t complexity;
    std::string group_key;
    std::string canonical;
    std::size_t option;
  };
  std::vector<LayerOption> options;
  std::vector<Ranked> ranked;
  std::set<std::string> seen;
  std::shared_ptr<const Table> data;
  std::string form;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    const auto& s = solutions[i];
    // Ranking puts every lower-complexity option first; once `max` of them
    // exist, nothing more complex can make the cut.
    if (i > 0 && options.size() >= max &&
        complexity(s.program) > complexity(solutions[i - 1].program)) {
      break;
    }
    if (i == 0 || !(s.program == solutions[i - 1].program)) {
      try {
        data = std::make_shared<const Table>(eval(s.program, input));
        form = canonical_form(*data);
      } catch (const Error&) {
        data.reset();
      }
    }
    if (!data) continue;
    LayerSpec layer;
    try {
      layer = infer_scales(instantiate_layer(sketch, s.mapping, *data), *data);
    } catch (const Error&) {
      continue;
    }
    VisSpec spec{{layer}};
    std::string canonical = spec_canonical(spec, std::span<const std::string>(&form, 1));
    if (!seen.insert(canonical).second) continue;
    ranked.push_back({complexity(s.program), spec_group_key(spec), std::move(canonical), options.size()});
    options.push_back({s.program, std::move(layer), *data, form, serialize(s.program)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    if (a.group_key != b.group_key) return a.group_key < b.group_key;
    return a.canonical < b.canonical;
  });
  if (ranked.size() > max) ranked.resize(max);
  std::vector<LayerOption> out;
  out.reserve(ranked.size());
  for (const auto& r : ranked) out.push_back(std::move(options[r.option]));
  return out;
}

}  // namespace

std::vector<Candidate> build_candidates(const Table& input, std::span<const LayerSketch> sketches,
                                        const std::vector<std::vector<LayerSolution>>& solutions,
                                        std::size_t max_candidates,
                                        std::string* no_candidate_reason) {
  auto reason = [&](std::string r) {
    if (no_candidate_reason) *no_candidate_reason = std::move(r);
    return std::vector<Candidate>{};
  };
  std::vector<std::vector<LayerOption>> options;
  for (std::size_t l = 0; l < sketches.size(); ++l) {
    options.push_back(layer_options(input, sketches[l], solutions[l], max_candidates));
    if (options.back().empty()) {
      return reason("no transformation of the input contains the examples of layer " +
                    std::to_string(l + 1));
    }
  }

  // Rank combinations on their keys alone; only the survivors are compiled.
  struct Combo {
    std::size_t complexity;
    std::string group_key;
    std::string canonical;
    std::string text;
    std::vector<std::size_t> pick;
  };
  std::vector<Combo> combos;
  std::vector<std::size_t> pick(options.size(), 0);
  while (true) {
    VisSpec spec;
    std::vector<std::string> forms;
    Combo combo{0, {}, {}, {}, pick};
    for (std::size_t l = 0; l < options.size(); ++l) {
      const auto& o = options[l][pick[l]];
      spec.layers.push_back(o.layer);
      forms.push_back(o.form);
      combo.complexity += complexity(o.program);
      if (l) combo.text += "; ";
      combo.text += o.text;
    }
    if (validate_spec(spec).empty()) {
      combo.group_key = spec_group_key(spec);
      combo.canonical = spec_canonical(spec, forms);
      combos.push_back(std::move(combo));
    }
    std::size_t l = 0;
    while (l < pick.size() && ++pick[l] == options[l].size()) pick[l++] = 0;
    if (l == pick.size()) break;
  }
  if (combos.empty()) return reason("no combination of layer candidates forms a valid specification");

  // Same representative and order as dedup followed by rank_and_group.
  std::sort(combos.begin(), combos.end(), [](const Combo& a, const Combo& b) {
    if (a.complexity != b.complexity) return a.complexity < b.complexity;
    if (a.text != b.text) return a.text < b.text;
    return a.canonical < b.canonical;
  });
  std::set<std::string> seen;
  std::vector<const Combo*> kept;
  for (const auto& c : combos) {
    if (seen.insert(c.canonical).second) kept.push_back(&c);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Combo* a, const Combo* b) {
    if (a->complexity != b->complexity) return a->complexity < b->complexity;
    if (a->group_key != b->group_key) return a->group_key < b->group_key;
    return a->canonical < b->canonical;
  });
  if (kept.size() > max_candidates) kept.resize(max_candidates);

  std::vector<Candidate> cands;
  cands.reserve(kept.size());
  for (const Combo* c : kept) {
    std::vector<TransformProgram> programs;
    VisSpec spec;
    std::vector<Table> rendered;
    for (std::size_t l = 0; l < options.size(); ++l) {
      const auto& o = options[l][c->pick[l]];
      programs.push_back(o.program);
      spec.layers.push_back(o.layer);
      rendered.push_back(o.data);
    }
    cands.push_back(assemble_candidate(std::move(programs), std::move(spec), std::move(rendered)));
  }
  return cands;
}

SynthesisOutput synthesize(const Table& input, std::span<const ExampleElement> elements,
                           const SearchConfig& cfg, const PartialCandidatesFn& on_partial) {
  cfg.validate();
  SynthesisOutput out;
  out.sketches = decompile(elements);

  std::vector<SearchTask> tasks;
  for (const auto& s : out.sketches) tasks.push_back({&input, &s.example_table});

  std::size_t finished = 0;
  const std::size_t workers = cfg.worker_budgets.size();
  WorkerDoneFn on_done;
  if (on_partial) {
    on_done = [&](std::size_t, const SearchResult& so_far) {
      if (++finished < workers) {
        on_partial(build_candidates(input, out.sketches, so_far.solutions, cfg.max_candidates));
      }
    };
  }
  auto result = run_search(tasks, cfg, on_done);
  out.stats = result.stats;

  std::string reason;
  out.candidates =
      build_candidates(input, out.sketches, result.solutions, cfg.max_candidates, &reason);
  if (out.candidates.empty()) out.no_candidate_reason = reason;
  return out;
}

}  // namespace vizsynth
