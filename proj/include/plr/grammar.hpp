#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "plr/features.hpp"

namespace plr {

/// Thrown for malformed or inconsistent grammars. Carries a 1-based source
/// position when one is known (0 otherwise).
class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& message, int line = 0, int column = 0);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SourceLocation {
  int line = 0;
  int column = 0;
};

/// Backbone symbol plus a flat residue of features.
struct Category {
  std::string name;
  FeatureMap features;
};

enum class Repeat { one, star, plus };

struct Daughter {
  Category category;
  Repeat repeat = Repeat::one;
  bool terminal = false;
};

enum class RuleSource { syntactic, textual };

struct Rule {
  std::string id;
  Category mother;
  std::vector<Daughter> daughters;
  RuleSource source = RuleSource::syntactic;
  /// Introduced by Kleene expansion; may have no daughters.
  bool auxiliary = false;
  SourceLocation location;
};

struct Grammar {
  std::vector<Rule> rules;
  std::set<std::string> terminals;
  std::string start;

  /// Checks the structural invariants (unique ids, defined symbols, a
  /// defined start symbol, disjoint textual/syntactic features). Throws
  /// GrammarError naming the offending rule or symbol.
  void validate() const;

  bool has_kleene() const;
};

/// Parses grammar-file text:
///
///     # comment
///     %start S
///     %terminals AT NN1 ,
///     S -> NP[num=?N] VP[num=?N] ;
///     @np_bare NP[num=pl] -> N1[num=pl] ;
///     X -> X X | 'a' ;
///     %textual
///     Tsent -> S Tadj* ;
///     %end
///
/// Quoted atoms are terminals; `*` and `+` mark repeated daughters; `@id`
/// names a rule (otherwise rules are numbered r1, r2, ...). The result is
/// validated.
Grammar parse_grammar_file(std::string_view text);

/// Feature names used by rules of the given source, excluding auxiliary
/// threading features.
std::set<std::string> feature_names(const Grammar& g, RuleSource source);

}  // namespace plr
