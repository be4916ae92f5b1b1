#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plr/backbone.hpp"

namespace plr {

struct Action {
  enum class Kind : std::uint8_t { shift, reduce, accept };

  Kind kind = Kind::shift;
  /// Target state for shift, production index for reduce, unused for accept.
  int target = 0;

  static Action shift(int state) { return {Kind::shift, state}; }
  static Action reduce(int production) { return {Kind::reduce, production}; }
  static Action accept() { return {Kind::accept, 0}; }

  /// `s12`, `r5` or `acc`.
  std::string str() const;
  static std::optional<Action> parse(std::string_view text);

  friend auto operator<=>(const Action&, const Action&) = default;
};

/// One LR step: the action taken in `state` with `lookahead` as the next
/// input label (the shifted label itself for shifts).
struct Transition {
  int state = 0;
  int lookahead = 0;
  Action action;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// LALR(1) action/goto table. Conflicts are kept as multi-action entries.
class LalrTable {
 public:
  using ActionRow = std::map<int, std::vector<Action>>;  // lookahead -> actions

  int state_count() const { return static_cast<int>(actions_.size()); }

  /// Actions for (state, lookahead); empty when none apply.
  std::span<const Action> actions(int state, int lookahead) const;
  const ActionRow& row(int state) const { return actions_.at(static_cast<std::size_t>(state)); }
  std::optional<int> goto_state(int state, int nonterminal) const;
  const std::map<int, int>& gotos(int state) const { return gotos_.at(static_cast<std::size_t>(state)); }

  std::size_t action_count() const;
  /// Number of (state, lookahead) entries holding more than one action.
  std::size_t conflict_count() const;

  std::uint64_t backbone_hash() const { return hash_; }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }
  const std::string& terminal_name(int t) const { return terminals_.at(static_cast<std::size_t>(t)); }
  std::optional<int> terminal_id(std::string_view label) const;

  /// Versioned text form; `deserialize(serialize())` reproduces the table.
  std::string serialize() const;
  static LalrTable deserialize(std::string_view text);

  friend bool operator==(const LalrTable&, const LalrTable&) = default;

 private:
  friend LalrTable build_lalr(const CFBackbone&);

  std::vector<ActionRow> actions_;
  std::vector<std::map<int, int>> gotos_;
  std::vector<std::string> terminals_;  // index 0 is "$"
  std::uint64_t hash_ = 0;
};

/// Builds LR(0) item sets in breadth-first discovery order and attaches
/// LALR(1) lookaheads by spontaneous generation and propagation. Nullable
/// nonterminals are supported. Actions within an entry are ordered shift,
/// reduces by production index, accept.
LalrTable build_lalr(const CFBackbone& backbone);

/// Action set for a lookahead given by name; unknown labels give an empty set.
std::vector<Action> lookup_actions(const LalrTable& table, int state, std::string_view lookahead);

}  // namespace plr
