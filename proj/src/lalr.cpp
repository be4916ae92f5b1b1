#include "plr/lalr.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace plr {

std::string Action::str() const {
  switch (kind) {
    case Kind::shift: return "s" + std::to_string(target);
    case Kind::reduce: return "r" + std::to_string(target);
    case Kind::accept: return "acc";
  }
  return "?";
}

std::optional<Action> Action::parse(std::string_view text) {
  if (text == "acc") return accept();
  if (text.size() < 2 || (text[0] != 's' && text[0] != 'r')) return std::nullopt;
  int v = 0;
  for (char c : text.substr(1)) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return text[0] == 's' ? shift(v) : reduce(v);
}

std::span<const Action> LalrTable::actions(int state, int lookahead) const {
  if (state < 0 || state >= state_count()) return {};
  const auto& row = actions_[static_cast<std::size_t>(state)];
  auto it = row.find(lookahead);
  if (it == row.end()) return {};
  return it->second;
}

std::optional<int> LalrTable::goto_state(int state, int nonterminal) const {
  if (state < 0 || state >= state_count()) return std::nullopt;
  const auto& g = gotos_[static_cast<std::size_t>(state)];
  auto it = g.find(nonterminal);
  if (it == g.end()) return std::nullopt;
  return it->second;
}

std::size_t LalrTable::action_count() const {
  std::size_t n = 0;
  for (const auto& row : actions_)
    for (const auto& [la, acts] : row) n += acts.size();
  return n;
}

std::size_t LalrTable::conflict_count() const {
  std::size_t n = 0;
  for (const auto& row : actions_)
    for (const auto& [la, acts] : row) n += acts.size() > 1 ? 1 : 0;
  return n;
}

std::optional<int> LalrTable::terminal_id(std::string_view label) const {
  for (std::size_t i = 0; i < terminals_.size(); ++i)
    if (terminals_[i] == label) return static_cast<int>(i);
  return std::nullopt;
}

std::vector<Action> lookup_actions(const LalrTable& table, int state, std::string_view lookahead) {
  auto t = table.terminal_id(lookahead);
  if (!t) return {};
  auto acts = table.actions(state, *t);
  return {acts.begin(), acts.end()};
}

namespace {

using Bits = boost::dynamic_bitset<>;

struct Item {
  int production;
  int dot;
  friend auto operator<=>(const Item&, const Item&) = default;
};

struct Builder {
  const CFBackbone& bb;
  std::vector<Production> prods;  // backbone productions + augmented start
  int augmented = 0;
  int aug_symbol = 0;
  int hash_bit = 0;  // index of the propagation marker in lookahead sets
  std::vector<std::vector<int>> by_lhs;
  std::vector<bool> nullable;
  std::vector<Bits> first;

  std::vector<std::vector<Item>> kernels;
  std::vector<std::map<int, int>> transitions;  // state -> symbol -> state

  explicit Builder(const CFBackbone& b) : bb(b) {
    prods = bb.productions;
    augmented = static_cast<int>(prods.size());
    aug_symbol = bb.num_symbols();
    prods.push_back({aug_symbol, {bb.start}, "$start"});
    by_lhs.assign(static_cast<std::size_t>(aug_symbol + 1), {});
    for (int p = 0; p < static_cast<int>(prods.size()); ++p)
      by_lhs[static_cast<std::size_t>(prods[static_cast<std::size_t>(p)].lhs)].push_back(p);
    hash_bit = bb.num_terminals;
    compute_first();
  }

  const Production& prod(int p) const { return prods[static_cast<std::size_t>(p)]; }
  int rhs_len(int p) const { return static_cast<int>(prod(p).rhs.size()); }
  bool is_nt(int s) const { return s >= bb.num_terminals; }

  void compute_first() {
    auto n = static_cast<std::size_t>(aug_symbol + 1);
    nullable.assign(n, false);
    first.assign(n, Bits(static_cast<std::size_t>(bb.num_terminals + 1)));
    for (int t = 0; t < bb.num_terminals; ++t) first[static_cast<std::size_t>(t)].set(static_cast<std::size_t>(t));
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& p : prods) {
        auto lhs = static_cast<std::size_t>(p.lhs);
        Bits acc = first[lhs];
        bool all_nullable = true;
        for (int s : p.rhs) {
          acc |= first[static_cast<std::size_t>(s)];
          if (!nullable[static_cast<std::size_t>(s)]) {
            all_nullable = false;
            break;
          }
        }
        if (acc != first[lhs]) {
          first[lhs] = acc;
          changed = true;
        }
        if (all_nullable && !nullable[lhs]) nullable[lhs] = changed = true;
      }
    }
  }

  /// FIRST of rhs[from..] of production p; `nullable_tail` reports whether
  /// that suffix derives the empty string.
  Bits first_of_suffix(int p, int from, bool& nullable_tail) const {
    Bits acc(static_cast<std::size_t>(bb.num_terminals + 1));
    const auto& rhs = prod(p).rhs;
    for (std::size_t i = static_cast<std::size_t>(from); i < rhs.size(); ++i) {
      acc |= first[static_cast<std::size_t>(rhs[i])];
      if (!nullable[static_cast<std::size_t>(rhs[i])]) {
        nullable_tail = false;
        return acc;
      }
    }
    nullable_tail = true;
    return acc;
  }

  std::vector<Item> closure0(const std::vector<Item>& kernel) const {
    std::vector<Item> items = kernel;
    std::vector<bool> added(static_cast<std::size_t>(aug_symbol + 1), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
      Item it = items[i];
      if (it.dot >= rhs_len(it.production)) continue;
      int s = prod(it.production).rhs[static_cast<std::size_t>(it.dot)];
      if (!is_nt(s) || added[static_cast<std::size_t>(s)]) continue;
      added[static_cast<std::size_t>(s)] = true;
      for (int q : by_lhs[static_cast<std::size_t>(s)]) items.push_back({q, 0});
    }
    return items;
  }

  void build_lr0() {
    std::map<std::vector<Item>, int> index;
    kernels.push_back({{augmented, 0}});
    index[kernels.front()] = 0;
    for (std::size_t st = 0; st < kernels.size(); ++st) {
      std::map<int, std::vector<Item>> advanced;
      for (const Item& it : closure0(kernels[st])) {
        if (it.dot >= rhs_len(it.production)) continue;
        int s = prod(it.production).rhs[static_cast<std::size_t>(it.dot)];
        advanced[s].push_back({it.production, it.dot + 1});
      }
      std::map<int, int> trans;
      for (auto& [sym, items] : advanced) {  // ascending symbol id
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        auto [it, inserted] = index.emplace(items, static_cast<int>(kernels.size()));
        if (inserted) kernels.push_back(items);
        trans[sym] = it->second;
      }
      transitions.push_back(std::move(trans));
    }
  }

  /// LR(1) closure of a kernel with lookahead sets.
  std::map<Item, Bits> closure1(const std::vector<std::pair<Item, Bits>>& seed) const {
    std::map<Item, Bits> la;
    std::deque<Item> work;
    for (const auto& [it, bits] : seed) {
      auto [pos, inserted] = la.emplace(it, bits);
      if (!inserted) pos->second |= bits;
      work.push_back(it);
    }
    while (!work.empty()) {
      Item it = work.front();
      work.pop_front();
      if (it.dot >= rhs_len(it.production)) continue;
      int s = prod(it.production).rhs[static_cast<std::size_t>(it.dot)];
      if (!is_nt(s)) continue;
      bool tail_nullable = false;
      Bits f = first_of_suffix(it.production, it.dot + 1, tail_nullable);
      if (tail_nullable) f |= la.at(it);
      for (int q : by_lhs[static_cast<std::size_t>(s)]) {
        Item child{q, 0};
        auto pos = la.find(child);
        if (pos == la.end()) {
          la.emplace(child, f);
          work.push_back(child);
        } else {
          Bits merged = pos->second | f;
          if (merged != pos->second) {
            pos->second = merged;
            work.push_back(child);
          }
        }
      }
    }
    return la;
  }

  struct Result {
    std::vector<LalrTable::ActionRow> actions;
    std::vector<std::map<int, int>> gotos;
  };

  Result build() {
    build_lr0();
    const std::size_t nstates = kernels.size();
    const std::size_t width = static_cast<std::size_t>(bb.num_terminals + 1);

    // Kernel lookaheads and propagation links.
    std::vector<std::vector<Bits>> kla(nstates);
    for (std::size_t s = 0; s < nstates; ++s) kla[s].assign(kernels[s].size(), Bits(width));
    kla[0][0].set(CFBackbone::end_marker);

    struct Link {
      std::size_t state, item;
    };
    std::vector<std::vector<std::vector<Link>>> links(nstates);
    auto kernel_index = [&](std::size_t state, Item it) {
      const auto& k = kernels[state];
      return static_cast<std::size_t>(std::lower_bound(k.begin(), k.end(), it) - k.begin());
    };
    for (std::size_t s = 0; s < nstates; ++s) {
      links[s].resize(kernels[s].size());
      for (std::size_t k = 0; k < kernels[s].size(); ++k) {
        Bits marker(width);
        marker.set(static_cast<std::size_t>(hash_bit));
        for (const auto& [it, bits] : closure1({{kernels[s][k], marker}})) {
          if (it.dot >= rhs_len(it.production)) continue;
          int sym = prod(it.production).rhs[static_cast<std::size_t>(it.dot)];
          auto target = static_cast<std::size_t>(transitions[s].at(sym));
          std::size_t ti = kernel_index(target, {it.production, it.dot + 1});
          Bits spontaneous = bits;
          spontaneous.reset(static_cast<std::size_t>(hash_bit));
          kla[target][ti] |= spontaneous;
          if (bits.test(static_cast<std::size_t>(hash_bit))) links[s][k].push_back({target, ti});
        }
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < nstates; ++s)
        for (std::size_t k = 0; k < kernels[s].size(); ++k)
          for (const Link& l : links[s][k]) {
            Bits merged = kla[l.state][l.item] | kla[s][k];
            if (merged != kla[l.state][l.item]) {
              kla[l.state][l.item] = merged;
              changed = true;
            }
          }
    }

    Result table;
    table.actions.resize(nstates);
    table.gotos.resize(nstates);
    for (std::size_t s = 0; s < nstates; ++s) {
      auto& row = table.actions[s];
      for (const auto& [sym, target] : transitions[s]) {
        if (is_nt(sym))
          table.gotos[s][sym] = target;
        else
          row[sym].push_back(Action::shift(target));
      }
      std::vector<std::pair<Item, Bits>> seed;
      for (std::size_t k = 0; k < kernels[s].size(); ++k) seed.emplace_back(kernels[s][k], kla[s][k]);
      for (const auto& [it, bits] : closure1(seed)) {
        if (it.dot < rhs_len(it.production)) continue;
        for (std::size_t t = bits.find_first(); t != Bits::npos; t = bits.find_next(t)) {
          if (static_cast<int>(t) == hash_bit) continue;
          if (it.production == augmented)
            row[static_cast<int>(t)].push_back(Action::accept());
          else
            row[static_cast<int>(t)].push_back(Action::reduce(it.production));
        }
      }
      for (auto& [la, acts] : row) {
        std::sort(acts.begin(), acts.end());
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
      }
    }
    return table;
  }
};

}  // namespace

LalrTable build_lalr(const CFBackbone& backbone) {
  auto built = Builder(backbone).build();
  LalrTable table;
  table.actions_ = std::move(built.actions);
  table.gotos_ = std::move(built.gotos);
  table.terminals_.assign(backbone.symbols.begin(), backbone.symbols.begin() + backbone.num_terminals);
  table.hash_ = backbone.hash();
  return table;
}

std::string LalrTable::serialize() const {
  std::ostringstream out;
  out << "plr-lalr-table 1\n";
  out << "hash " << hex64(hash_) << "\n";
  out << "terminals " << terminals_.size();
  for (const auto& t : terminals_) out << ' ' << t;
  out << "\nstates " << actions_.size() << "\n";
  for (std::size_t s = 0; s < actions_.size(); ++s) {
    for (const auto& [la, acts] : actions_[s])
      for (const auto& a : acts) out << "action " << s << ' ' << la << ' ' << a.str() << "\n";
    for (const auto& [nt, target] : gotos_[s]) out << "goto " << s << ' ' << nt << ' ' << target << "\n";
  }
  return out.str();
}

LalrTable LalrTable::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  auto bad = [](const std::string& what) { return std::runtime_error("malformed table file: " + what); };
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "plr-lalr-table" || version != 1) throw bad("header");
  LalrTable t;
  std::string hash;
  if (!(in >> word >> hash) || word != "hash") throw bad("hash line");
  auto h = parse_hex64(hash);
  if (!h) throw bad("hash value");
  t.hash_ = *h;
  std::size_t n = 0;
  if (!(in >> word >> n) || word != "terminals") throw bad("terminals line");
  t.terminals_.resize(n);
  for (auto& name : t.terminals_)
    if (!(in >> name)) throw bad("terminal names");
  if (!(in >> word >> n) || word != "states") throw bad("states line");
  t.actions_.resize(n);
  t.gotos_.resize(n);
  while (in >> word) {
    std::size_t s = 0;
    int key = 0;
    std::string value;
    if (!(in >> s >> key >> value) || s >= n) throw bad("entry");
    if (word == "action") {
      auto a = Action::parse(value);
      if (!a) throw bad("action '" + value + "'");
      t.actions_[s][key].push_back(*a);
    } else if (word == "goto") {
      t.gotos_[s][key] = std::stoi(value);
    } else {
      throw bad("unknown entry '" + word + "'");
    }
  }
  return t;
}

}  // namespace plr
