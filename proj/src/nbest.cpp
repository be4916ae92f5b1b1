#include "plr/nbest.hpp"

#include <queue>
#include <set>
#include <stdexcept>

#include "plr/backbone.hpp"

namespace plr {

LogProb score(const Derivation& d, const ProbModel& model, const RankOptions& options) {
  LogProb s = score_derivation(d.history, model);
  if (options.include_tag_likelihoods) {
    auto walk = [&](auto&& self, const DerivationTree& t) -> void {
      if (t.leaf()) s += LogProb::from_prob(t.likelihood);
      for (const auto& c : t.children) self(self, c);
    };
    walk(walk, d.tree);
  }
  return s;
}

namespace {

struct Entry {
  LogProb score;
  std::vector<int> signature;
  int bundle = -1;  // -1 for leaves; root index at the top level
  std::vector<int> ranks;
};

/// Better first: higher score, then smaller signature.
bool better(const Entry& a, const Entry& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.signature < b.signature;
}

struct WorseFirst {
  bool operator()(const Entry& a, const Entry& b) const { return better(b, a); }
};

class KBest {
 public:
  KBest(const ParseForest& f, const ProbModel& m, const RankOptions& o)
      : forest_(f), model_(m), options_(o), lists_(f.nodes.size()) {}

  /// k-th best derivation of node `id` (0-based), or nullptr if it has fewer.
  const Entry* get(int id, std::size_t k) {
    auto& st = lists_[static_cast<std::size_t>(id)];
    const ForestNode& n = forest_.nodes[static_cast<std::size_t>(id)];
    if (!st.started) {
      st.started = true;
      if (n.leaf) {
        Entry e;
        e.score = model_.logprob(n.shift);
        if (options_.include_tag_likelihoods) e.score += LogProb::from_prob(n.likelihood);
        e.signature = {-(n.symbol + 1)};
        st.best.push_back(std::move(e));
      } else {
        for (std::size_t b = 0; b < n.bundles.size(); ++b)
          push(st, n, static_cast<int>(b), std::vector<int>(n.bundles[b].children.size(), 0));
      }
    }
    while (st.best.size() <= k && !st.heap.empty()) {
      Entry top = st.heap.top();
      st.heap.pop();
      for (std::size_t i = 0; i < top.ranks.size(); ++i) {
        std::vector<int> next = top.ranks;
        ++next[i];
        push(st, n, top.bundle, std::move(next));
      }
      st.best.push_back(std::move(top));
    }
    return k < st.best.size() ? &st.best[k] : nullptr;
  }

  DerivationTree tree(int id, const Entry& e, std::vector<Transition>& history) {
    const ForestNode& n = forest_.nodes[static_cast<std::size_t>(id)];
    DerivationTree t;
    t.symbol = n.symbol;
    t.start = n.start;
    t.end = n.end;
    if (n.leaf) {
      t.likelihood = n.likelihood;
      history.push_back(n.shift);
      return t;
    }
    const auto& b = n.bundles[static_cast<std::size_t>(e.bundle)];
    t.production = b.production;
    for (std::size_t i = 0; i < b.children.size(); ++i) {
      const Entry* child = get(b.children[i], static_cast<std::size_t>(e.ranks[i]));
      t.children.push_back(tree(b.children[i], *child, history));
    }
    history.push_back(b.reduce);
    return t;
  }

 private:
  struct State {
    bool started = false;
    std::vector<Entry> best;
    std::priority_queue<Entry, std::vector<Entry>, WorseFirst> heap;
    std::set<std::pair<int, std::vector<int>>> queued;
  };

  void push(State& st, const ForestNode& n, int bundle, std::vector<int> ranks) {
    if (!st.queued.emplace(bundle, ranks).second) return;
    const auto& b = n.bundles[static_cast<std::size_t>(bundle)];
    Entry e;
    e.bundle = bundle;
    e.score = model_.logprob(b.reduce);
    e.signature.push_back(b.production);
    for (std::size_t i = 0; i < b.children.size(); ++i) {
      const Entry* c = get(b.children[i], static_cast<std::size_t>(ranks[i]));
      if (!c) return;
      e.score += c->score;
      e.signature.insert(e.signature.end(), c->signature.begin(), c->signature.end());
    }
    e.ranks = std::move(ranks);
    st.heap.push(std::move(e));
  }

  const ParseForest& forest_;
  const ProbModel& model_;
  RankOptions options_;
  std::vector<State> lists_;
};

}  // namespace

std::vector<RankedAnalysis> rank_nbest(const ParseForest& forest, const ProbModel& model, std::size_t n,
                                       const RankOptions& options) {
  if (forest.table_hash != model.table_hash())
    throw std::invalid_argument("model trained against table " + hex64(model.table_hash()) +
                                ", forest built with " + hex64(forest.table_hash));
  KBest kb(forest, model, options);
  const LogProb accept = model.logprob(forest.accept);

  // Merge the roots' lists: candidate (root index, rank within that root).
  std::priority_queue<Entry, std::vector<Entry>, WorseFirst> heap;
  auto offer = [&](std::size_t r, int k) {
    const Entry* e = kb.get(forest.roots[r], static_cast<std::size_t>(k));
    if (!e) return;
    Entry c;
    c.score = e->score + accept;
    c.signature = e->signature;
    c.bundle = static_cast<int>(r);
    c.ranks = {k};
    heap.push(std::move(c));
  };
  for (std::size_t r = 0; r < forest.roots.size(); ++r) offer(r, 0);

  std::vector<RankedAnalysis> out;
  while (out.size() < n && !heap.empty()) {
    Entry top = heap.top();
    heap.pop();
    const int root = forest.roots[static_cast<std::size_t>(top.bundle)];
    RankedAnalysis a;
    a.rank = static_cast<int>(out.size()) + 1;
    a.score = top.score;
    a.derivation.tree = kb.tree(root, *kb.get(root, static_cast<std::size_t>(top.ranks[0])), a.derivation.history);
    a.derivation.history.push_back(forest.accept);
    a.derivation.signature = top.signature;
    out.push_back(std::move(a));
    offer(static_cast<std::size_t>(top.bundle), top.ranks[0] + 1);
  }
  return out;
}

}  // namespace plr
