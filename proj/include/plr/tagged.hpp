#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plr/lattice.hpp"

namespace plr {

struct TaggedToken {
  std::string word;
  std::vector<LabelHypothesis> hypotheses;  // non-increasing likelihood
};

/// Parses `word|LABEL:prob|LABEL:prob ...`; `\|` and `\\` escape inside
/// words. Hypotheses are stably sorted by likelihood. Throws
/// std::invalid_argument on a malformed field or a likelihood outside (0, 1].
std::vector<TaggedToken> parse_tagged_line(std::string_view line);

/// Parses pre-disambiguated `word_LABEL` tokens (label after the last `_`),
/// each with likelihood 1.
std::vector<TaggedToken> parse_plain_line(std::string_view line);

/// Keeps the top label; if its likelihood is below `certainty`, also keeps
/// every label within a factor `ratio` of it (inclusive).
TaggedToken threshold_labels(const TaggedToken& token, double certainty = 0.9, double ratio = 50.0);

SentenceLattice to_lattice(const std::vector<TaggedToken>& tokens);

}  // namespace plr
