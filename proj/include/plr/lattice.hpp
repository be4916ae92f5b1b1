#pragma once

#include <compare>
#include <string>
#include <vector>

namespace plr {

/// Half-open token span [start, end).
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool contains(const Span& o) const { return start <= o.start && o.end <= end; }
  /// Overlap with neither span containing the other.
  bool crosses(const Span& o) const {
    return (start < o.start && o.start < end && end < o.end) || (o.start < start && start < o.end && o.end < end);
  }

  friend auto operator<=>(const Span&, const Span&) = default;
};

struct LabelHypothesis {
  std::string label;
  double likelihood = 1.0;
};

struct LatticeToken {
  std::string word;
  std::vector<LabelHypothesis> labels;  // non-increasing likelihood
};

/// Per-position label hypotheses for one sentence.
struct SentenceLattice {
  std::vector<LatticeToken> tokens;

  int size() const { return static_cast<int>(tokens.size()); }

  /// One token per label, likelihood 1, the label doubling as the word.
  static SentenceLattice from_labels(const std::vector<std::string>& labels);

  /// Throws std::invalid_argument if a token has no labels or a likelihood
  /// outside (0, 1].
  void validate() const;
};

}  // namespace plr
