#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plr/backbone.hpp"
#include "plr/forest.hpp"
#include "plr/lattice.hpp"

namespace plr {

/// Bracketed tree. Leaves have no children; for a leaf `label` is its
/// part-of-speech label and `word` its surface form.
struct Tree {
  std::string label;
  std::string word;
  std::vector<Tree> children;

  bool leaf() const { return children.empty(); }
  int size() const;  // number of leaves
  friend bool operator==(const Tree&, const Tree&) = default;
};

/// Reads one parenthesised tree, e.g. `(S (NP the_AT dog_NN1) (VP barks_VVZ))`.
/// With `labelled`, the first atom after `(` is the node label; otherwise
/// every atom is a leaf (skeleton files). A leaf `word_TAG` has label TAG,
/// a bare leaf is its own label. Nodes labelled `-NONE-` are dropped along
/// with any constituents left empty, and functional suffixes (`NP-SBJ`,
/// `NP=2`) are stripped. Throws std::invalid_argument on malformed input.
Tree read_tree(std::string_view text, bool labelled = true);

/// Reads every non-blank, non-`#` line as one tree.
std::vector<Tree> read_treebank(std::string_view text, bool labelled = true);

std::string to_string(const Tree& tree);

/// Leaves in order.
std::vector<const Tree*> leaves(const Tree& tree);

/// The sentence under the tree: one token per leaf with its label, likelihood 1.
SentenceLattice tree_lattice(const Tree& tree);

/// Converts a derivation for display: Kleene auxiliaries are spliced out so
/// their daughters attach to the enclosing constituent. Leaves take their
/// words from `lattice` when given.
Tree display_tree(const DerivationTree& d, const CFBackbone& backbone, const SentenceLattice* lattice = nullptr);

}  // namespace plr
