#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "plr/backbone.hpp"
#include "plr/lalr.hpp"

namespace plr {

using BigCount = boost::multiprecision::cpp_int;

/// One packed alternative: a production applied to child nodes, with the
/// reduce transition that built it.
struct ForestBundle {
  int production = 0;
  std::vector<int> children;
  Transition reduce;
};

/// Packed node. Nonterminal nodes are keyed by (symbol, left stack node,
/// end, lookahead label at end, residue); the left stack node is
/// (state, start, label at start). Keeping both boundary labels in the key
/// makes every transition inside a node independent of its context, so
/// derivation scores decompose exactly over the packing.
struct ForestNode {
  int symbol = 0;
  int start = 0;
  int end = 0;
  int left_state = 0;
  int left_label = 0;
  int right_label = -1;  // -1 for leaves, whose content does not depend on it
  int residue = 0;       // index into ParseForest::residues
  bool leaf = false;

  // Leaves only.
  Transition shift;
  double likelihood = 1.0;

  std::vector<ForestBundle> bundles;
};

/// Shared packed forest of all complete analyses of one sentence. Nodes are
/// stored children-first, so any forward pass over `nodes` is bottom-up.
/// Holds a non-owning pointer to the backbone it was built from.
struct ParseForest {
  const CFBackbone* backbone = nullptr;
  std::uint64_t table_hash = 0;
  int length = 0;
  std::vector<ForestNode> nodes;
  std::vector<int> roots;  // start-symbol nodes spanning the sentence
  std::vector<FeatureMap> residues;
  Transition accept;
};

/// Unpacked analysis. Leaves carry the terminal (lattice label) id.
struct DerivationTree {
  int symbol = 0;
  int start = 0;
  int end = 0;
  int production = -1;  // -1 for leaves
  double likelihood = 1.0;
  std::vector<DerivationTree> children;

  bool leaf() const { return production < 0; }
  friend bool operator==(const DerivationTree&, const DerivationTree&) = default;
};

struct Derivation {
  DerivationTree tree;
  /// LR transitions in execution order, ending with accept.
  std::vector<Transition> history;
  /// Preorder production ids; a leaf with terminal t contributes -(t+1).
  std::vector<int> signature;
};

/// Exact number of derivations (sum-product over bundles).
BigCount count_parses(const ParseForest& forest);

/// Per-node derivation counts, indexed like `forest.nodes`.
std::vector<BigCount> inside_counts(const ParseForest& forest);

/// Every derivation, up to `limit`, in signature order.
std::vector<Derivation> enumerate_derivations(const ParseForest& forest, std::size_t limit = SIZE_MAX);

/// A derivation drawn uniformly at random from all derivations.
Derivation sample_derivation(const ParseForest& forest, std::mt19937_64& rng);

/// Signature of a derivation tree (see Derivation::signature).
std::vector<int> tree_signature(const DerivationTree& tree);

/// One node per line with its bundles, child ids and transitions.
std::string dump_forest(const ParseForest& forest);

/// `(S (NP AT NN1) (VP VVZ))`; leaves print as their label.
std::string to_string(const DerivationTree& tree, const CFBackbone& backbone);

}  // namespace plr
