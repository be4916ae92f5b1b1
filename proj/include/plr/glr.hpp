#pragma once

#include <optional>
#include <vector>

#include "plr/backbone.hpp"
#include "plr/forest.hpp"
#include "plr/lalr.hpp"
#include "plr/lattice.hpp"

namespace plr {

struct ParseOptions {
  /// CPU-time budget in seconds; nullopt disables the check.
  std::optional<double> timeout = 30.0;
};

enum class ParseStatus { ok, no_analysis, timeout };

struct ParseOutcome {
  ParseStatus status = ParseStatus::no_analysis;
  std::optional<ParseForest> forest;  // set iff status == ok
  double cpu_seconds = 0.0;
  int tokens = 0;
};

/// Generalized LR parse of a label lattice over a graph-structured stack.
/// Stack nodes are (state, position, label at position), so each lattice
/// path is followed with its own lookaheads. Residues are unified at every
/// reduction and failing reductions are dropped. Labels the table does not
/// know license no shift.
///
/// Throws std::invalid_argument if the table was not built from `backbone`.
ParseOutcome parse_lattice(const SentenceLattice& lattice, const CFBackbone& backbone, const LalrTable& table,
                           const ParseOptions& options = {});

/// As parse_lattice, keeping only derivations none of whose (non-auxiliary)
/// constituents cross a skeleton bracket.
ParseOutcome constrained_parse(const SentenceLattice& lattice, const CFBackbone& backbone, const LalrTable& table,
                               const std::vector<Span>& skeleton, const ParseOptions& options = {});

const char* to_string(ParseStatus s);

}  // namespace plr
