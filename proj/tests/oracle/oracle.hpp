#pragma once

// Brute-force reference implementations used only by the tests. They work
// from the grammar rules directly (names and feature maps), not from the
// backbone ids or the parser's data structures.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plr/backbone.hpp"
#include "plr/forest.hpp"
#include "plr/grammar.hpp"
#include "plr/lalr.hpp"
#include "plr/lattice.hpp"

namespace oracle {

using plr::BigCount;
using Sentence = std::vector<std::string>;
using Labels = std::vector<std::vector<std::string>>;  // label set per position

struct OTree {
  std::string symbol;
  std::string rule_id;  // empty for leaves
  int start = 0;
  int end = 0;
  std::vector<OTree> children;

  bool leaf() const { return rule_id.empty(); }
  friend bool operator==(const OTree&, const OTree&) = default;
  friend auto operator<=>(const OTree& a, const OTree& b) { return a.str() <=> b.str(); }
  std::string str() const;
};

Labels single(const Sentence& s);

/// Derivation count by top-down chart recursion with explicit unification
/// of every rule's features, on a Kleene-expanded grammar.
BigCount chart_count(const plr::Grammar& expanded, const Labels& labels);

/// All derivation trees (feature-checked), optionally keeping only those
/// with no non-auxiliary constituent crossing a skeleton bracket.
std::vector<OTree> chart_trees(const plr::Grammar& expanded, const Labels& labels,
                               const std::vector<plr::Span>* skeleton = nullptr);

/// Strings of length <= max_len generated by the rules, ignoring features.
std::set<Sentence> language(const plr::Grammar& expanded, int max_len);

/// Strings of length <= max_len accepted by running the table, following
/// every action of every conflict, with the stack depth bounded.
std::set<Sentence> table_language(const plr::LalrTable& table, const plr::CFBackbone& backbone, int max_len,
                                  int max_depth = 64);

/// Runs a tree through the table: shift every leaf, reduce every internal
/// node after its daughters, then accept. nullopt if the table refuses a step.
std::optional<std::vector<plr::Transition>> replay(const OTree& tree, const std::vector<std::string>& leaf_labels,
                                                    const plr::LalrTable& table, const plr::CFBackbone& backbone);

/// Same shape as a parser derivation tree, named through the backbone.
OTree from_derivation(const plr::DerivationTree& d, const plr::CFBackbone& backbone);

/// Leaf labels of a tree in order.
std::vector<std::string> leaf_labels(const OTree& t);

/// Every string over `alphabet` of length 1..max_len.
std::vector<Sentence> all_strings(const std::vector<std::string>& alphabet, int max_len);

}  // namespace oracle
