#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plr/features.hpp"
#include "plr/grammar.hpp"

namespace plr {

/// Rewrites every `D*` / `D+` daughter through a fresh left-recursive
/// auxiliary symbol (`Aux -> | Aux D` and `Aux -> D | Aux D` respectively).
/// Variables the repeated daughter shares with the rest of its rule are
/// threaded through the auxiliary as `_Var` features, so all repetitions see
/// one binding. Grammars without marks are returned unchanged.
Grammar expand_kleene(const Grammar& grammar);

/// Name of the auxiliary introduced for daughter `index` (0-based) of rule
/// `rule_id`.
std::string kleene_aux_name(const std::string& daughter, Repeat repeat, const std::string& rule_id,
                            std::size_t index);

struct Production {
  int lhs = 0;
  std::vector<int> rhs;
  /// Id of the grammar rule this production came from.
  std::string rule_id;
};

/// Feature constraints checked when a production is reduced. Variables are
/// shared between the mother and daughters of one production only.
struct Residue {
  FeatureMap mother;
  std::vector<FeatureMap> daughters;

  bool trivial() const;
};

/// Context-free projection of a Kleene-free grammar.
///
/// Symbol ids: 0 is the reserved end-of-input marker `$`, then terminals in
/// name order, then nonterminals in order of first appearance as a mother.
class CFBackbone {
 public:
  static constexpr int end_marker = 0;

  std::vector<std::string> symbols;
  int num_terminals = 1;
  int start = -1;
  std::vector<Production> productions;
  std::vector<Residue> residues;  // parallel to productions
  std::vector<bool> auxiliary;    // per symbol; true for Kleene auxiliaries

  bool is_terminal(int symbol) const { return symbol < num_terminals; }
  int num_symbols() const { return static_cast<int>(symbols.size()); }
  const std::string& name(int symbol) const { return symbols.at(static_cast<std::size_t>(symbol)); }
  std::optional<int> find(std::string_view name) const;

  /// Stable textual form: symbols then productions, one per line.
  std::string canonical_text() const;
  /// 64-bit FNV-1a of canonical_text(); identifies tables and models.
  std::uint64_t hash() const;
};

/// Projects each rule onto its category names and records the residue.
/// Throws GrammarError if Kleene marks remain or if some nonterminal can
/// derive itself (X =>+ X), which would make derivation counts infinite.
CFBackbone compile_backbone(const Grammar& expanded);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);
std::optional<std::uint64_t> parse_hex64(std::string_view s);

}  // namespace plr
