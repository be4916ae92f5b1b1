#pragma once

#include <cstddef>
#include <vector>

#include "plr/forest.hpp"
#include "plr/model.hpp"

namespace plr {

struct RankOptions {
  /// Also multiply in the lattice likelihood of every leaf label.
  bool include_tag_likelihoods = false;
};

struct RankedAnalysis {
  int rank = 0;  // 1-based
  LogProb score;
  Derivation derivation;
};

/// Score of one derivation: its transitions under `model`, plus leaf label
/// likelihoods when requested.
LogProb score(const Derivation& d, const ProbModel& model, const RankOptions& options = {});

/// The min(n, #derivations) best derivations, best first. Ordered by score,
/// then by ascending signature. Extraction is lazy per node (each node
/// yields its k-th best on demand), so n = 1 costs one pass over the forest.
/// Throws std::invalid_argument when model and forest come from different
/// tables.
std::vector<RankedAnalysis> rank_nbest(const ParseForest& forest, const ProbModel& model, std::size_t n,
                                       const RankOptions& options = {});

}  // namespace plr
