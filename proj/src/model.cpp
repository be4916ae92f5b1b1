#include "plr/model.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace plr {

LogProb LogProb::from_log(double ln) { return LogProb(std::llround(ln * scale)); }
LogProb LogProb::from_prob(double p) { return from_log(std::log(p)); }

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::runtime_error malformed(const std::string& what, const std::string& kind) {
  return std::runtime_error("malformed " + kind + " file: " + what);
}

}  // namespace

void TransitionCounts::add(const Transition& t, double count) {
  if (count != 0.0) counts_[t] += count;
}

double TransitionCounts::count(const Transition& t) const {
  auto it = counts_.find(t);
  return it == counts_.end() ? 0.0 : it->second;
}

void TransitionCounts::merge(const TransitionCounts& other) {
  if (other.table_hash_ != table_hash_)
    throw std::invalid_argument("cannot merge counts trained against different tables");
  for (const auto& [t, c] : other.counts_) add(t, c);
  histories_ += other.histories_;
}

TransitionCounts TransitionCounts::scaled(double factor) const {
  TransitionCounts out(table_hash_);
  for (const auto& [t, c] : counts_) out.add(t, c * factor);
  out.histories_ = histories_ * factor;
  return out;
}

std::string TransitionCounts::serialize() const {
  std::ostringstream out;
  out << "plr-counts 1\nhash " << hex64(table_hash_) << "\nhistories " << fmt_double(histories_) << "\n";
  for (const auto& [t, c] : counts_)
    out << t.state << ' ' << t.lookahead << ' ' << t.action.str() << ' ' << fmt_double(c) << "\n";
  return out.str();
}

TransitionCounts TransitionCounts::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word, hash;
  int version = 0;
  if (!(in >> word >> version) || word != "plr-counts" || version != 1) throw malformed("header", "counts");
  if (!(in >> word >> hash) || word != "hash" || !parse_hex64(hash)) throw malformed("hash line", "counts");
  TransitionCounts c(*parse_hex64(hash));
  if (!(in >> word >> c.histories_) || word != "histories") throw malformed("histories line", "counts");
  Transition t;
  std::string act;
  double v = 0;
  while (in >> t.state >> t.lookahead >> act >> v) {
    auto a = Action::parse(act);
    if (!a) throw malformed("action '" + act + "'", "counts");
    t.action = *a;
    c.add(t, v);
  }
  if (!in.eof()) throw malformed("entry", "counts");
  return c;
}

TransitionCounts train_counts(const std::vector<ParseHistory>& histories, std::uint64_t table_hash) {
  TransitionCounts counts(table_hash);
  for (const auto& h : histories) {
    if (h.table_hash != table_hash)
      throw std::invalid_argument("history recorded against table " + hex64(h.table_hash) + ", expected " +
                                  hex64(table_hash));
    for (const auto& t : h.transitions) counts.add(t, h.weight);
    counts.add_histories(h.weight);
  }
  return counts;
}

void accumulate_forest(const ParseForest& forest, double weight, TransitionCounts& counts) {
  if (forest.table_hash != counts.table_hash())
    throw std::invalid_argument("forest built with table " + hex64(forest.table_hash) + ", counts expect " +
                                hex64(counts.table_hash()));
  using boost::multiprecision::cpp_rational;
  const auto inside = inside_counts(forest);
  BigCount total = 0;
  for (int r : forest.roots) total += inside[static_cast<std::size_t>(r)];
  if (total == 0) return;

  // outside[v]: number of ways to complete a derivation around node v.
  std::vector<BigCount> outside(forest.nodes.size());
  for (int r : forest.roots) outside[static_cast<std::size_t>(r)] += 1;
  std::map<Transition, BigCount> occurrences;
  for (std::size_t i = forest.nodes.size(); i-- > 0;) {
    const auto& n = forest.nodes[i];
    if (outside[i] == 0) continue;
    if (n.leaf) {
      occurrences[n.shift] += outside[i];
      continue;
    }
    for (const auto& b : n.bundles) {
      BigCount all = outside[i];
      for (int c : b.children) all *= inside[static_cast<std::size_t>(c)];
      occurrences[b.reduce] += all;
      for (std::size_t k = 0; k < b.children.size(); ++k) {
        BigCount o = outside[i];
        for (std::size_t j = 0; j < b.children.size(); ++j)
          if (j != k) o *= inside[static_cast<std::size_t>(b.children[j])];
        outside[static_cast<std::size_t>(b.children[k])] += o;
      }
    }
  }
  occurrences[forest.accept] += total;
  for (const auto& [t, occ] : occurrences)
    counts.add(t, weight * static_cast<double>(cpp_rational(occ, total)));
  counts.add_histories(weight);
}

std::map<int, double> frequency_of_frequencies(const TransitionCounts& counts) {
  std::map<int, double> n;
  for (const auto& [t, c] : counts.entries())
    if (c > 0) n[std::max(1, static_cast<int>(std::lround(c)))] += 1;
  return n;
}

GoodTuring::GoodTuring(std::map<int, double> freq_of_freq) : n_(std::move(freq_of_freq)) {
  if (n_.empty()) return;
  // Gale-Sampson Z_r = N_r / (0.5 (r_next - r_prev)) and its log-linear fit.
  std::vector<std::pair<int, double>> rs(n_.begin(), n_.end());
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < rs.size(); ++j) {
    double prev = j == 0 ? 0.0 : rs[j - 1].first;
    double next = j + 1 < rs.size() ? rs[j + 1].first : 2.0 * rs[j].first - prev;
    xs.push_back(std::log(static_cast<double>(rs[j].first)));
    ys.push_back(std::log(rs[j].second / (0.5 * (next - prev))));
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    slope_ = std::min(-1.0, sxy / sxx);
    intercept_ = my - slope_ * mx;
  } else {
    intercept_ = ys.front() - slope_ * xs.front();
  }

  double prev_r = 0, prev_star = 0;
  for (const auto& [r, nr] : rs) {
    double star;
    auto next = n_.find(r + 1);
    if (next != n_.end())
      star = (r + 1) * next->second / nr;
    else
      star = r * std::pow(1.0 + 1.0 / r, slope_ + 1.0);
    if (prev_r > 0 && star <= prev_star) star = r * (prev_star / prev_r);
    rstar_[r] = star;
    prev_r = r;
    prev_star = star;
  }
}

double GoodTuring::rstar(int r) const {
  auto it = rstar_.find(r);
  if (it != rstar_.end()) return it->second;
  return adjusted(static_cast<double>(r));
}

double GoodTuring::adjusted(double c) const {
  if (rstar_.empty()) return c;
  auto first = rstar_.begin();
  auto last = std::prev(rstar_.end());
  if (c <= first->first) return c * first->second / first->first;
  if (c >= last->first) return c * last->second / last->first;
  auto hi = rstar_.upper_bound(static_cast<int>(std::floor(c)));
  auto lo = std::prev(hi);
  double t = (c - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

ProbModel smooth_good_turing(const TransitionCounts& counts, const LalrTable& table) {
  if (counts.table_hash() != table.backbone_hash())
    throw std::invalid_argument("counts trained against table " + hex64(counts.table_hash()) + ", not " +
                                hex64(table.backbone_hash()));
  GoodTuring gt(frequency_of_frequencies(counts));
  ProbModel model;
  model.table_hash_ = table.backbone_hash();
  for (int s = 0; s < table.state_count(); ++s) {
    for (const auto& [la, actions] : table.row(s)) {
      if (actions.empty()) continue;
      ContextModel ctx;
      std::vector<std::pair<Action, double>> seen;
      std::vector<Action> unseen;
      for (const Action& a : actions) {
        double c = counts.count({s, la, a});
        if (c > 0)
          seen.emplace_back(a, gt.adjusted(c));
        else
          unseen.push_back(a);
      }
      const double k = static_cast<double>(actions.size());
      if (seen.empty()) {
        for (const Action& a : actions) ctx.probs[a] = 1.0 / k;
        ctx.unseen = 1.0 / k;
      } else {
        double star_sum = 0, raw_sum = 0;
        for (const auto& [a, cs] : seen) {
          star_sum += cs;
          raw_sum += counts.count({s, la, a});
        }
        double reserved = 0;
        if (!unseen.empty()) {
          reserved = raw_sum - star_sum;
          if (reserved <= 0) reserved = 1.0;
        }
        const double z = star_sum + reserved;
        for (const auto& [a, cs] : seen) ctx.probs[a] = cs / z;
        if (!unseen.empty()) {
          double share = reserved / static_cast<double>(unseen.size()) / z;
          for (const Action& a : unseen) ctx.probs[a] = share;
          ctx.unseen = share;
        } else {
          ctx.unseen = std::min_element(ctx.probs.begin(), ctx.probs.end(),
                                        [](auto& x, auto& y) { return x.second < y.second; })
                           ->second;
        }
      }
      model.contexts_[{s, la}] = std::move(ctx);
    }
  }
  model.finalize();
  return model;
}

void ProbModel::finalize() {
  floor_ = 1.0;
  log_.clear();
  unseen_log_.clear();
  for (const auto& [key, ctx] : contexts_) {
    for (const auto& [a, p] : ctx.probs) {
      floor_ = std::min(floor_, p);
      log_[{key.first, key.second, a}] = LogProb::from_prob(p);
    }
    floor_ = std::min(floor_, ctx.unseen);
    unseen_log_[key] = LogProb::from_prob(ctx.unseen);
  }
}

double ProbModel::prob(const Transition& t) const {
  auto c = contexts_.find({t.state, t.lookahead});
  if (c == contexts_.end()) return floor_;
  auto a = c->second.probs.find(t.action);
  return a == c->second.probs.end() ? c->second.unseen : a->second;
}

LogProb ProbModel::logprob(const Transition& t) const {
  if (auto it = log_.find(t); it != log_.end()) return it->second;
  if (auto it = unseen_log_.find({t.state, t.lookahead}); it != unseen_log_.end()) return it->second;
  return LogProb::from_prob(floor_);
}

std::string ProbModel::serialize() const {
  std::ostringstream out;
  out << "plr-model 1\nhash " << hex64(table_hash_) << "\n";
  for (const auto& [key, ctx] : contexts_) {
    out << "context " << key.first << ' ' << key.second << ' ' << fmt_double(ctx.unseen) << "\n";
    for (const auto& [a, p] : ctx.probs)
      out << "prob " << key.first << ' ' << key.second << ' ' << a.str() << ' ' << fmt_double(p) << "\n";
  }
  return out.str();
}

ProbModel ProbModel::deserialize(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word, hash;
  int version = 0;
  if (!(in >> word >> version) || word != "plr-model" || version != 1) throw malformed("header", "model");
  if (!(in >> word >> hash) || word != "hash" || !parse_hex64(hash)) throw malformed("hash line", "model");
  ProbModel m;
  m.table_hash_ = *parse_hex64(hash);
  while (in >> word) {
    int s = 0, la = 0;
    if (!(in >> s >> la)) throw malformed("context key", "model");
    if (word == "context") {
      double u = 0;
      if (!(in >> u)) throw malformed("context line", "model");
      m.contexts_[{s, la}].unseen = u;
    } else if (word == "prob") {
      std::string act;
      double p = 0;
      if (!(in >> act >> p)) throw malformed("prob line", "model");
      auto a = Action::parse(act);
      if (!a) throw malformed("action '" + act + "'", "model");
      m.contexts_[{s, la}].probs[*a] = p;
    } else {
      throw malformed("unknown entry '" + word + "'", "model");
    }
  }
  m.finalize();
  return m;
}

LogProb score_derivation(const std::vector<Transition>& transitions, const ProbModel& model) {
  LogProb total;
  for (const auto& t : transitions) total += model.logprob(t);
  return total;
}

}  // namespace plr
