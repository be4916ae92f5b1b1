#include "plr/lattice.hpp"

#include <stdexcept>

namespace plr {

SentenceLattice SentenceLattice::from_labels(const std::vector<std::string>& labels) {
  SentenceLattice s;
  for (const auto& l : labels) s.tokens.push_back({l, {{l, 1.0}}});
  return s;
}

void SentenceLattice::validate() const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    if (t.labels.empty()) throw std::invalid_argument("token " + std::to_string(i) + " has no labels");
    for (const auto& h : t.labels)
      if (!(h.likelihood > 0.0 && h.likelihood <= 1.0))
        throw std::invalid_argument("token " + std::to_string(i) + ": likelihood of " + h.label +
                                    " outside (0,1]");
  }
}

}  // namespace plr
