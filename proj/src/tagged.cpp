#include "plr/tagged.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <stdexcept>

namespace plr {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == '\n')) ++i;
    std::size_t j = i;
    while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == '\r' || line[j] == '\n')) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_likelihood(std::string_view text, std::string_view field) {
  std::string s(text);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno != 0)
    throw std::invalid_argument("bad likelihood in '" + std::string(field) + "'");
  if (!(v > 0.0 && v <= 1.0))
    throw std::invalid_argument("likelihood outside (0,1] in '" + std::string(field) + "'");
  return v;
}

void sort_hypotheses(std::vector<LabelHypothesis>& h) {
  std::stable_sort(h.begin(), h.end(), [](const auto& a, const auto& b) { return a.likelihood > b.likelihood; });
}

}  // namespace

std::vector<TaggedToken> parse_tagged_line(std::string_view line) {
  std::vector<TaggedToken> tokens;
  for (std::string_view field : split_ws(line)) {
    // Split on unescaped '|'.
    std::vector<std::string> parts(1);
    for (std::size_t i = 0; i < field.size(); ++i) {
      char c = field[i];
      if (c == '\\' && i + 1 < field.size() && (field[i + 1] == '|' || field[i + 1] == '\\')) {
        parts.back() += field[++i];
      } else if (c == '|') {
        parts.emplace_back();
      } else {
        parts.back() += c;
      }
    }
    if (parts.size() < 2 || parts.front().empty())
      throw std::invalid_argument("token '" + std::string(field) + "' needs word|LABEL:prob");
    TaggedToken tok;
    tok.word = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      const std::string& p = parts[i];
      auto colon = p.rfind(':');
      if (colon == std::string::npos || colon == 0)
        throw std::invalid_argument("hypothesis '" + p + "' in '" + std::string(field) + "' needs LABEL:prob");
      tok.hypotheses.push_back({p.substr(0, colon), parse_likelihood(std::string_view(p).substr(colon + 1), field)});
    }
    sort_hypotheses(tok.hypotheses);
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::vector<TaggedToken> parse_plain_line(std::string_view line) {
  std::vector<TaggedToken> tokens;
  for (std::string_view field : split_ws(line)) {
    auto us = field.rfind('_');
    if (us == std::string_view::npos || us == 0 || us + 1 == field.size())
      throw std::invalid_argument("token '" + std::string(field) + "' needs word_LABEL");
    tokens.push_back({std::string(field.substr(0, us)), {{std::string(field.substr(us + 1)), 1.0}}});
  }
  return tokens;
}

TaggedToken threshold_labels(const TaggedToken& token, double certainty, double ratio) {
  TaggedToken out{token.word, {}};
  if (token.hypotheses.empty()) return out;
  std::vector<LabelHypothesis> sorted = token.hypotheses;
  sort_hypotheses(sorted);
  const double top = sorted.front().likelihood;
  out.hypotheses.push_back(sorted.front());
  if (top >= certainty) return out;
  // Inclusive cutoff with a relative tolerance so that e.g. 0.6/50 keeps 0.012.
  const double cutoff = top / ratio;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].likelihood >= cutoff * (1.0 - 1e-12)) out.hypotheses.push_back(sorted[i]);
  return out;
}

SentenceLattice to_lattice(const std::vector<TaggedToken>& tokens) {
  SentenceLattice s;
  for (const auto& t : tokens) s.tokens.push_back({t.word, t.hypotheses});
  return s;
}

}  // namespace plr
