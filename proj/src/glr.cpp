#include "plr/glr.hpp"

#include <array>
#include <ctime>
#include <map>
#include <set>
#include <stdexcept>

namespace plr {

const char* to_string(ParseStatus s) {
  switch (s) {
    case ParseStatus::ok: return "ok";
    case ParseStatus::no_analysis: return "no-analysis";
    case ParseStatus::timeout: return "timeout";
  }
  return "?";
}

namespace {

double thread_cpu_seconds() {
  timespec ts{};
  clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + static_cast<double>(ts.tv_nsec) * 1e-9;
}

struct TimedOut {};

struct Edge {
  int to;
  int forest;
};

struct StackNode {
  int state;
  int pos;
  int label;
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> edge_set;
};

class GlrParser {
 public:
  GlrParser(const CFBackbone& bb, const LalrTable& table, const std::vector<Span>* skeleton,
            const ParseOptions& options)
      : bb_(bb), table_(table), skeleton_(skeleton), options_(options) {
    residues_.push_back({});
    residue_index_[{}] = 0;
  }

  ParseOutcome run(const SentenceLattice& lattice) {
    start_ = thread_cpu_seconds();
    ParseOutcome out;
    out.tokens = lattice.size();
    try {
      out.status = parse(lattice);
    } catch (const TimedOut&) {
      out.status = ParseStatus::timeout;
    }
    out.cpu_seconds = thread_cpu_seconds() - start_;
    if (out.status == ParseStatus::ok) out.forest = build_forest(lattice.size());
    return out;
  }

 private:
  void tick() {
    if (!options_.timeout || (++ticks_ & 255) != 0) return;
    if (thread_cpu_seconds() - start_ > *options_.timeout) throw TimedOut{};
  }

  int stack_node(int state, int pos, int label) {
    auto [it, inserted] = stack_index_.emplace(std::array<int, 3>{state, pos, label}, static_cast<int>(stack_.size()));
    if (inserted) {
      stack_.push_back({state, pos, label, {}, {}});
      by_position_[{pos, label}].push_back(it->second);
    }
    return it->second;
  }

  bool add_edge(int from, int to, int forest) {
    auto& n = stack_[static_cast<std::size_t>(from)];
    if (!n.edge_set.emplace(to, forest).second) return false;
    n.edges.push_back({to, forest});
    return true;
  }

  int intern_residue(const FeatureMap& m) {
    auto [it, inserted] = residue_index_.emplace(m, static_cast<int>(residues_.size()));
    if (inserted) residues_.push_back(m);
    return it->second;
  }

  int forest_node(const std::array<int, 7>& key, bool leaf) {
    auto [it, inserted] = forest_index_.emplace(key, static_cast<int>(nodes_.size()));
    if (inserted) {
      ForestNode n;
      n.symbol = key[0];
      n.left_state = key[1];
      n.start = key[2];
      n.left_label = key[3];
      n.end = key[4];
      n.right_label = key[5];
      n.residue = key[6];
      n.leaf = leaf;
      nodes_.push_back(std::move(n));
      bundle_sets_.emplace_back();
    }
    return it->second;
  }

  std::optional<int> reduce_residue(int production, const std::vector<int>& children) {
    const Residue& r = bb_.residues[static_cast<std::size_t>(production)];
    if (r.trivial()) return 0;
    Unifier u;
    for (std::size_t i = 0; i < children.size(); ++i) {
      const FeatureMap& want = r.daughters[i];
      if (want.empty()) continue;
      const FeatureMap& have = residues_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(children[i])].residue)];
      if (!u.unify(rename_apart(want, "#r"), rename_apart(have, "#" + std::to_string(i) + ":"))) return std::nullopt;
    }
    return intern_residue(canonicalize(u.resolve(rename_apart(r.mother, "#r"))));
  }

  bool crosses_skeleton(int symbol, int start, int end) const {
    if (!skeleton_ || end - start < 2 || bb_.auxiliary[static_cast<std::size_t>(symbol)]) return false;
    Span s{start, end};
    for (const Span& b : *skeleton_)
      if (s.crosses(b)) return true;
    return false;
  }

  /// All stack paths of `length` edges from `from`; children in left-to-right order.
  void paths(int from, int length, std::vector<int>& kids, std::vector<std::pair<int, std::vector<int>>>& out) {
    if (length == 0) {
      out.emplace_back(from, std::vector<int>(kids.rbegin(), kids.rend()));
      return;
    }
    const auto edges = stack_[static_cast<std::size_t>(from)].edges;  // copy: may grow during the pass
    for (const Edge& e : edges) {
      kids.push_back(e.forest);
      paths(e.to, length - 1, kids, out);
      kids.pop_back();
    }
  }

  /// Applies every reduction at (pos, label) until nothing new appears.
  void reduce_all(int pos, int label) {
    for (bool changed = true; changed;) {
      changed = false;
      auto key = std::make_pair(pos, label);
      for (std::size_t i = 0; i < by_position_[key].size(); ++i) {
        int v = by_position_[key][i];
        int state = stack_[static_cast<std::size_t>(v)].state;
        for (const Action& a : table_.actions(state, label)) {
          if (a.kind != Action::Kind::reduce) continue;
          const Production& p = bb_.productions[static_cast<std::size_t>(a.target)];
          std::vector<int> kids;
          std::vector<std::pair<int, std::vector<int>>> found;
          paths(v, static_cast<int>(p.rhs.size()), kids, found);
          for (auto& [u, children] : found) {
            tick();
            const StackNode& left = stack_[static_cast<std::size_t>(u)];
            if (crosses_skeleton(p.lhs, left.pos, pos)) continue;
            auto res = reduce_residue(a.target, children);
            if (!res) continue;
            auto target = table_.goto_state(left.state, p.lhs);
            if (!target) continue;
            int left_state = left.state, left_pos = left.pos, left_label = left.label;
            int w = stack_node(*target, pos, label);
            int f = forest_node({p.lhs, left_state, left_pos, left_label, pos, label, *res}, false);
            if (bundle_sets_[static_cast<std::size_t>(f)].emplace(a.target, children).second) {
              nodes_[static_cast<std::size_t>(f)].bundles.push_back({a.target, children, {state, label, a}});
              changed = true;
            }
            if (add_edge(w, u, f)) changed = true;
          }
        }
      }
    }
  }

  ParseStatus parse(const SentenceLattice& lattice) {
    const int n = lattice.size();
    // Known labels per position, best likelihood for duplicates; position n holds '$'.
    std::vector<std::map<int, double>> labels(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (const auto& h : lattice.tokens[static_cast<std::size_t>(i)].labels) {
        auto t = table_.terminal_id(h.label);
        if (!t || *t == CFBackbone::end_marker) continue;
        auto& slot = labels[static_cast<std::size_t>(i)][*t];
        slot = std::max(slot, h.likelihood);
      }
      if (labels[static_cast<std::size_t>(i)].empty()) return ParseStatus::no_analysis;
    }
    labels[static_cast<std::size_t>(n)][CFBackbone::end_marker] = 1.0;

    for (const auto& [l, p] : labels[0]) stack_node(0, 0, l);
    for (int k = 0; k <= n; ++k) {
      for (const auto& [l, lik] : labels[static_cast<std::size_t>(k)]) reduce_all(k, l);
      if (k == n) break;
      for (const auto& [l, lik] : labels[static_cast<std::size_t>(k)]) {
        auto key = std::make_pair(k, l);
        for (std::size_t i = 0; i < by_position_[key].size(); ++i) {
          int v = by_position_[key][i];
          int state = stack_[static_cast<std::size_t>(v)].state;
          for (const Action& a : table_.actions(state, l)) {
            if (a.kind != Action::Kind::shift) continue;
            tick();
            int leaf = forest_node({l, state, k, l, k + 1, -1, 0}, true);
            auto& ln = nodes_[static_cast<std::size_t>(leaf)];
            ln.shift = {state, l, a};
            ln.likelihood = lik;
            for (const auto& [next, p] : labels[static_cast<std::size_t>(k + 1)])
              add_edge(stack_node(a.target, k + 1, next), v, leaf);
          }
        }
      }
    }

    std::set<int> roots;
    for (int v : by_position_[{n, CFBackbone::end_marker}]) {
      const StackNode& node = stack_[static_cast<std::size_t>(v)];
      for (const Action& a : table_.actions(node.state, CFBackbone::end_marker)) {
        if (a.kind != Action::Kind::accept) continue;
        accept_ = {node.state, CFBackbone::end_marker, a};
        for (const Edge& e : node.edges) {
          const StackNode& to = stack_[static_cast<std::size_t>(e.to)];
          if (to.pos == 0 && to.state == 0 && nodes_[static_cast<std::size_t>(e.forest)].symbol == bb_.start)
            roots.insert(e.forest);
        }
      }
    }
    roots_.assign(roots.begin(), roots.end());
    return roots_.empty() ? ParseStatus::no_analysis : ParseStatus::ok;
  }

  /// Keeps nodes reachable from the roots, numbered children-first.
  ParseForest build_forest(int length) {
    std::vector<int> order;
    std::vector<int> remap(nodes_.size(), -1);
    std::vector<char> state(nodes_.size(), 0);
    auto visit = [&](auto&& self, int id) -> void {
      auto& s = state[static_cast<std::size_t>(id)];
      if (s) return;
      s = 1;
      for (const auto& b : nodes_[static_cast<std::size_t>(id)].bundles)
        for (int c : b.children) self(self, c);
      remap[static_cast<std::size_t>(id)] = static_cast<int>(order.size());
      order.push_back(id);
    };
    for (int r : roots_) visit(visit, r);

    ParseForest f;
    f.backbone = &bb_;
    f.table_hash = table_.backbone_hash();
    f.length = length;
    f.accept = accept_;
    std::map<int, int> residue_remap;
    for (int id : order) {
      ForestNode n = std::move(nodes_[static_cast<std::size_t>(id)]);
      for (auto& b : n.bundles)
        for (int& c : b.children) c = remap[static_cast<std::size_t>(c)];
      auto [it, inserted] = residue_remap.emplace(n.residue, static_cast<int>(f.residues.size()));
      if (inserted) f.residues.push_back(residues_[static_cast<std::size_t>(n.residue)]);
      n.residue = it->second;
      f.nodes.push_back(std::move(n));
    }
    for (int r : roots_) f.roots.push_back(remap[static_cast<std::size_t>(r)]);
    return f;
  }

  const CFBackbone& bb_;
  const LalrTable& table_;
  const std::vector<Span>* skeleton_;
  ParseOptions options_;
  double start_ = 0.0;
  unsigned ticks_ = 0;

  std::vector<StackNode> stack_;
  std::map<std::array<int, 3>, int> stack_index_;
  std::map<std::pair<int, int>, std::vector<int>> by_position_;

  std::vector<ForestNode> nodes_;
  std::map<std::array<int, 7>, int> forest_index_;
  std::vector<std::set<std::pair<int, std::vector<int>>>> bundle_sets_;
  std::vector<FeatureMap> residues_;
  std::map<FeatureMap, int> residue_index_;
  std::vector<int> roots_;
  Transition accept_;
};

void check_table(const CFBackbone& backbone, const LalrTable& table) {
  if (table.backbone_hash() != backbone.hash())
    throw std::invalid_argument("LR table does not belong to this grammar (hash " + hex64(table.backbone_hash()) +
                                " vs " + hex64(backbone.hash()) + ")");
}

}  // namespace

ParseOutcome parse_lattice(const SentenceLattice& lattice, const CFBackbone& backbone, const LalrTable& table,
                           const ParseOptions& options) {
  check_table(backbone, table);
  return GlrParser(backbone, table, nullptr, options).run(lattice);
}

ParseOutcome constrained_parse(const SentenceLattice& lattice, const CFBackbone& backbone, const LalrTable& table,
                               const std::vector<Span>& skeleton, const ParseOptions& options) {
  check_table(backbone, table);
  return GlrParser(backbone, table, &skeleton, options).run(lattice);
}

}  // namespace plr
