#include "plr/forest.hpp"

#include <algorithm>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <sstream>

namespace plr {

std::vector<BigCount> inside_counts(const ParseForest& forest) {
  std::vector<BigCount> inside(forest.nodes.size());
  for (std::size_t i = 0; i < forest.nodes.size(); ++i) {
    const auto& n = forest.nodes[i];
    if (n.leaf) {
      inside[i] = 1;
      continue;
    }
    BigCount sum = 0;
    for (const auto& b : n.bundles) {
      BigCount prod = 1;
      for (int c : b.children) prod *= inside[static_cast<std::size_t>(c)];
      sum += prod;
    }
    inside[i] = sum;
  }
  return inside;
}

BigCount count_parses(const ParseForest& forest) {
  auto inside = inside_counts(forest);
  BigCount total = 0;
  for (int r : forest.roots) total += inside[static_cast<std::size_t>(r)];
  return total;
}

namespace {

struct Partial {
  DerivationTree tree;
  std::vector<Transition> history;  // without accept
  std::vector<int> signature;
};

Partial leaf_partial(const ForestNode& n) {
  Partial p;
  p.tree.symbol = n.symbol;
  p.tree.start = n.start;
  p.tree.end = n.end;
  p.tree.likelihood = n.likelihood;
  p.history.push_back(n.shift);
  p.signature.push_back(-(n.symbol + 1));
  return p;
}

Partial combine(const ForestNode& n, const ForestBundle& b, const std::vector<const Partial*>& kids) {
  Partial p;
  p.tree.symbol = n.symbol;
  p.tree.start = n.start;
  p.tree.end = n.end;
  p.tree.production = b.production;
  p.signature.push_back(b.production);
  for (const Partial* k : kids) {
    p.tree.children.push_back(k->tree);
    p.history.insert(p.history.end(), k->history.begin(), k->history.end());
    p.signature.insert(p.signature.end(), k->signature.begin(), k->signature.end());
  }
  p.history.push_back(b.reduce);
  return p;
}

Derivation finish(const ParseForest& forest, Partial p) {
  p.history.push_back(forest.accept);
  return {std::move(p.tree), std::move(p.history), std::move(p.signature)};
}

class Enumerator {
 public:
  Enumerator(const ParseForest& f, std::size_t limit) : forest_(f), limit_(limit), memo_(f.nodes.size()) {}

  const std::vector<Partial>& all(int id) {
    auto& slot = memo_[static_cast<std::size_t>(id)];
    if (slot.done) return slot.items;
    const ForestNode& n = forest_.nodes[static_cast<std::size_t>(id)];
    if (n.leaf) {
      slot.items.push_back(leaf_partial(n));
    } else {
      for (const auto& b : n.bundles) {
        std::vector<const std::vector<Partial>*> lists;
        for (int c : b.children) lists.push_back(&all(c));
        std::vector<std::size_t> idx(lists.size(), 0);
        bool empty = std::any_of(lists.begin(), lists.end(), [](auto* l) { return l->empty(); });
        while (!empty && slot.items.size() < limit_) {
          std::vector<const Partial*> kids;
          for (std::size_t i = 0; i < lists.size(); ++i) kids.push_back(&(*lists[i])[idx[i]]);
          slot.items.push_back(combine(n, b, kids));
          std::size_t k = lists.size();
          while (k > 0) {
            --k;
            if (++idx[k] < lists[k]->size()) break;
            idx[k] = 0;
            if (k == 0) empty = true;
          }
          if (lists.empty()) break;
        }
      }
    }
    slot.done = true;
    return slot.items;
  }

 private:
  struct Slot {
    bool done = false;
    std::vector<Partial> items;
  };
  const ParseForest& forest_;
  std::size_t limit_;
  std::vector<Slot> memo_;
};

}  // namespace

std::vector<Derivation> enumerate_derivations(const ParseForest& forest, std::size_t limit) {
  Enumerator e(forest, limit);
  std::vector<Derivation> out;
  for (int r : forest.roots)
    for (const auto& p : e.all(r)) {
      if (out.size() >= limit) break;
      out.push_back(finish(forest, p));
    }
  std::sort(out.begin(), out.end(), [](const Derivation& a, const Derivation& b) { return a.signature < b.signature; });
  return out;
}

namespace {

/// Uniform index in [0, bound).
BigCount draw_below(const BigCount& bound, std::mt19937_64& rng) {
  boost::random::mt19937 local(static_cast<std::uint32_t>(rng()));
  boost::random::uniform_int_distribution<BigCount> dist(0, bound - 1);
  return dist(local);
}

Partial sample_node(const ParseForest& forest, const std::vector<BigCount>& inside, int id, std::mt19937_64& rng) {
  const ForestNode& n = forest.nodes[static_cast<std::size_t>(id)];
  if (n.leaf) return leaf_partial(n);
  BigCount pick = draw_below(inside[static_cast<std::size_t>(id)], rng);
  for (const auto& b : n.bundles) {
    BigCount w = 1;
    for (int c : b.children) w *= inside[static_cast<std::size_t>(c)];
    if (pick < w) {
      std::vector<Partial> kids;
      for (int c : b.children) kids.push_back(sample_node(forest, inside, c, rng));
      std::vector<const Partial*> ptrs;
      for (const auto& k : kids) ptrs.push_back(&k);
      return combine(n, b, ptrs);
    }
    pick -= w;
  }
  throw std::logic_error("sample_derivation: inconsistent counts");
}

}  // namespace

Derivation sample_derivation(const ParseForest& forest, std::mt19937_64& rng) {
  auto inside = inside_counts(forest);
  BigCount total = 0;
  for (int r : forest.roots) total += inside[static_cast<std::size_t>(r)];
  if (total == 0) throw std::invalid_argument("sample_derivation: empty forest");
  BigCount pick = draw_below(total, rng);
  for (int r : forest.roots) {
    const auto& w = inside[static_cast<std::size_t>(r)];
    if (pick < w) return finish(forest, sample_node(forest, inside, r, rng));
    pick -= w;
  }
  throw std::logic_error("sample_derivation: inconsistent counts");
}

std::vector<int> tree_signature(const DerivationTree& tree) {
  std::vector<int> sig;
  auto walk = [&](auto&& self, const DerivationTree& t) -> void {
    sig.push_back(t.leaf() ? -(t.symbol + 1) : t.production);
    for (const auto& c : t.children) self(self, c);
  };
  walk(walk, tree);
  return sig;
}

std::string dump_forest(const ParseForest& forest) {
  const CFBackbone& bb = *forest.backbone;
  auto label = [&](int t) { return t < 0 ? std::string("-") : bb.name(t); };
  auto trans = [&](const Transition& t) {
    return "(" + std::to_string(t.state) + "," + label(t.lookahead) + "," + t.action.str() + ")";
  };
  std::ostringstream out;
  out << "forest length=" << forest.length << " nodes=" << forest.nodes.size() << " roots=";
  for (std::size_t i = 0; i < forest.roots.size(); ++i) out << (i ? "," : "") << 'n' << forest.roots[i];
  out << " accept=" << trans(forest.accept) << "\n";
  for (std::size_t i = 0; i < forest.nodes.size(); ++i) {
    const auto& n = forest.nodes[i];
    out << 'n' << i << ' ' << bb.name(n.symbol) << '[' << n.start << ',' << n.end << "] left=(" << n.left_state
        << ',' << n.start << ',' << label(n.left_label) << ')';
    if (n.leaf) {
      out << " shift=" << trans(n.shift) << " p=" << n.likelihood << "\n";
      continue;
    }
    out << " la=" << label(n.right_label) << " res={" << to_string(forest.residues[static_cast<std::size_t>(n.residue)])
        << "}\n";
    for (const auto& b : n.bundles) {
      out << "  r" << b.production << " ->";
      for (int c : b.children) out << " n" << c;
      out << ' ' << trans(b.reduce) << "\n";
    }
  }
  return out.str();
}

std::string to_string(const DerivationTree& tree, const CFBackbone& backbone) {
  if (tree.leaf()) return backbone.name(tree.symbol);
  std::string s = "(" + backbone.name(tree.symbol);
  for (const auto& c : tree.children) s += " " + to_string(c, backbone);
  return s + ")";
}

}  // namespace plr
