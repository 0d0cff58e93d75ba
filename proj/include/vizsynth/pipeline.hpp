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

// End-to-end synthesis: decompile the examples, search one program per
// layer, then compile, deduplicate and rank the combined candidates.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vizsynth/compiler.hpp"
#include "vizsynth/decompiler.hpp"
#include "vizsynth/synthesizer.hpp"

namespace vizsynth {

struct SynthesisOutput {
  std::vector<LayerSketch> sketches;
  /// Ranked per rank_and_group, at most cfg.max_candidates.
  std::vector<Candidate> candidates;
  SearchStats stats;
  /// Set when `candidates` is empty.
  std::optional<std::string> no_candidate_reason;
};

/// Called once per worker that finishes before the last one, with the
/// ranked candidates built from every solution found so far.
using PartialCandidatesFn = std::function<void(const std::vector<Candidate>&)>;

/// Turns per-layer search results into ranked candidates. Each layer keeps
/// its best `cfg.max_candidates` distinct options before layers are combined.
std::vector<Candidate> build_candidates(const Table& input, std::span<const LayerSketch> sketches,
                                        const std::vector<std::vector<LayerSolution>>& solutions,
                                        std::size_t max_candidates,
                                        std::string* no_candidate_reason = nullptr);

/// Throws the decompiler's errors (InvalidElement, TooManyLayers,
/// InconsistentGroup) before any search starts.
SynthesisOutput synthesize(const Table& input, std::span<const ExampleElement> elements,
                           const SearchConfig& cfg, const PartialCandidatesFn& on_partial = {});

}  // namespace vizsynth
