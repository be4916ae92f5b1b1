#include "plr/backbone.hpp"

#include <cstdio>
#include <map>

namespace plr {

bool Residue::trivial() const {
  if (!mother.empty()) return false;
  for (const auto& d : daughters)
    if (!d.empty()) return false;
  return true;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::optional<std::uint64_t> parse_hex64(std::string_view s) {
  if (s.empty() || s.size() > 16) return std::nullopt;
  std::uint64_t v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else return std::nullopt;
    v = (v << 4) | static_cast<std::uint64_t>(d);
  }
  return v;
}

std::optional<int> CFBackbone::find(std::string_view n) const {
  for (int i = 0; i < num_symbols(); ++i)
    if (symbols[static_cast<std::size_t>(i)] == n) return i;
  return std::nullopt;
}

std::string CFBackbone::canonical_text() const {
  std::string s = "terminals";
  for (int i = 0; i < num_terminals; ++i) s += " " + name(i);
  s += "\nnonterminals";
  for (int i = num_terminals; i < num_symbols(); ++i) s += " " + name(i);
  s += "\nstart " + name(start) + "\n";
  for (const auto& p : productions) {
    s += name(p.lhs) + " ->";
    for (int r : p.rhs) s += " " + name(r);
    s += "\n";
  }
  return s;
}

std::uint64_t CFBackbone::hash() const { return fnv1a64(canonical_text()); }

CFBackbone compile_backbone(const Grammar& g) {
  if (g.has_kleene()) throw GrammarError("compile_backbone: grammar still contains Kleene marks");

  CFBackbone bb;
  std::map<std::string, int> ids;
  bb.symbols.push_back("$");
  for (const auto& t : g.terminals) {
    if (t == "$") throw GrammarError("'$' is reserved for the end-of-input marker");
    ids[t] = static_cast<int>(bb.symbols.size());
    bb.symbols.push_back(t);
  }
  bb.num_terminals = static_cast<int>(bb.symbols.size());
  for (const auto& r : g.rules) {
    if (ids.emplace(r.mother.name, static_cast<int>(bb.symbols.size())).second)
      bb.symbols.push_back(r.mother.name);
  }
  bb.auxiliary.assign(bb.symbols.size(), false);
  for (const auto& r : g.rules)
    if (r.auxiliary) bb.auxiliary[static_cast<std::size_t>(ids.at(r.mother.name))] = true;
  bb.start = ids.at(g.start);

  for (const auto& r : g.rules) {
    Production p;
    p.lhs = ids.at(r.mother.name);
    p.rule_id = r.id;
    Residue res;
    res.mother = r.mother.features;
    for (const auto& d : r.daughters) {
      p.rhs.push_back(ids.at(d.category.name));
      res.daughters.push_back(d.terminal ? FeatureMap{} : d.category.features);
    }
    bb.productions.push_back(std::move(p));
    bb.residues.push_back(std::move(res));
  }

  // Reject X =>+ X: edges X -> Y where Y appears in a production of X whose
  // other daughters are all nullable.
  const auto n = static_cast<std::size_t>(bb.num_symbols());
  std::vector<bool> nullable(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : bb.productions) {
      if (nullable[static_cast<std::size_t>(p.lhs)]) continue;
      bool all = true;
      for (int s : p.rhs) all = all && nullable[static_cast<std::size_t>(s)];
      if (all) nullable[static_cast<std::size_t>(p.lhs)] = changed = true;
    }
  }
  std::vector<std::vector<int>> unit(n);
  for (const auto& p : bb.productions) {
    for (std::size_t i = 0; i < p.rhs.size(); ++i) {
      if (bb.is_terminal(p.rhs[i])) continue;
      bool others = true;
      for (std::size_t j = 0; j < p.rhs.size(); ++j)
        if (j != i) others = others && nullable[static_cast<std::size_t>(p.rhs[j])];
      if (others) unit[static_cast<std::size_t>(p.lhs)].push_back(p.rhs[i]);
    }
  }
  std::vector<int> colour(n, 0);
  auto visit = [&](auto&& self, int v) -> void {
    colour[static_cast<std::size_t>(v)] = 1;
    for (int w : unit[static_cast<std::size_t>(v)]) {
      if (colour[static_cast<std::size_t>(w)] == 1)
        throw GrammarError("cyclic grammar: '" + bb.name(w) + "' can derive itself");
      if (colour[static_cast<std::size_t>(w)] == 0) self(self, w);
    }
    colour[static_cast<std::size_t>(v)] = 2;
  };
  for (int s = bb.num_terminals; s < bb.num_symbols(); ++s)
    if (colour[static_cast<std::size_t>(s)] == 0) visit(visit, s);
  return bb;
}

}  // namespace plr
