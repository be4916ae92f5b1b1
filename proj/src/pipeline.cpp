#include "plr/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace plr {

CompiledGrammar compile_grammar(std::string_view text) {
  CompiledGrammar g;
  g.source = parse_grammar_file(text);
  g.expanded = expand_kleene(g.source);
  g.backbone = compile_backbone(g.expanded);
  g.table = build_lalr(g.backbone);
  return g;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << contents;
}

std::vector<Tree> subsample(const std::vector<Tree>& trees, int num, int den, std::uint64_t seed) {
  if (num <= 0 || den <= 0 || num > den) throw std::invalid_argument("subsample fraction must be in (0, 1]");
  if (num == den) return trees;
  std::vector<std::size_t> idx(trees.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  auto keep = static_cast<std::size_t>(std::llround(static_cast<double>(trees.size()) * num / den));
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::vector<Tree> out;
  for (auto i : idx) out.push_back(trees[i]);
  return out;
}

namespace {

std::vector<Span> skeleton_of(const Tree& t) { return extract_brackets(t).spans; }

}  // namespace

TrainReport train_from_treebank(const CompiledGrammar& g, const std::vector<Tree>& trees,
                                const TrainOptions& options) {
  auto outcomes = parallel_map<ParseOutcome>(trees.size(), options.jobs, [&](std::size_t i) {
    return constrained_parse(tree_lattice(trees[i]), g.backbone, g.table, skeleton_of(trees[i]), options.parse);
  });
  TrainReport r{static_cast<int>(trees.size()), 0, 0, 0, TransitionCounts(g.table.backbone_hash())};
  for (const auto& o : outcomes) {
    if (o.status != ParseStatus::ok) {
      ++r.skipped;
      continue;
    }
    ++r.used;
    r.histories += count_parses(*o.forest);
    accumulate_forest(*o.forest, options.weight, r.counts);
  }
  return r;
}

Chooser best_of(const ProbModel& model, const RankOptions& options) {
  return [&model, options](const ParseForest& f, std::size_t) {
    return rank_nbest(f, model, 1, options).front().derivation;
  };
}

Chooser random_choice(std::uint64_t seed) {
  return [seed](const ParseForest& f, std::size_t i) {
    std::mt19937_64 rng(seed + i);
    return sample_derivation(f, rng);
  };
}

EvalResult evaluate(const CompiledGrammar& g, const std::vector<Tree>& gold, const Chooser& choose,
                    const EvalOptions& options) {
  struct One {
    OutcomeSummary summary;
    std::optional<Tree> chosen;
  };
  auto results = parallel_map<One>(gold.size(), options.jobs, [&](std::size_t i) {
    SentenceLattice lat = tree_lattice(gold[i]);
    ParseOutcome o = parse_lattice(lat, g.backbone, g.table, options.parse);
    One r;
    r.summary = {lat.size(), o.status, o.forest ? count_parses(*o.forest) : BigCount(0)};
    if (o.forest) r.chosen = display_tree(choose(*o.forest, i).tree, g.backbone, &lat);
    return r;
  });
  EvalResult out;
  std::vector<std::pair<BracketSet, BracketSet>> pairs;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    BracketSet gb = extract_brackets(gold[i]);
    BracketSet cb{gb.length, {}};
    if (results[i].chosen) cb = extract_brackets(*results[i].chosen);
    pairs.emplace_back(std::move(cb), std::move(gb));
    out.outcomes.push_back(results[i].summary);
    out.chosen.push_back(std::move(results[i].chosen));
  }
  out.report = geig_report(pairs);
  return out;
}

double expected_random_recall(const CompiledGrammar& g, const std::vector<Tree>& gold, const EvalOptions& options) {
  auto expected = parallel_map<std::pair<double, int>>(gold.size(), options.jobs, [&](std::size_t i) {
    SentenceLattice lat = tree_lattice(gold[i]);
    BracketSet gb = extract_brackets(gold[i]);
    ParseOutcome o = parse_lattice(lat, g.backbone, g.table, options.parse);
    double matched = 0;
    if (o.forest) {
      auto all = enumerate_derivations(*o.forest);
      for (const auto& d : all) matched += matched_brackets(extract_brackets(display_tree(d.tree, g.backbone)), gb);
      matched /= static_cast<double>(all.size());
    }
    return std::make_pair(matched, static_cast<int>(gb.spans.size()));
  });
  double matched = 0;
  int total = 0;
  for (const auto& [m, n] : expected) {
    matched += m;
    total += n;
  }
  return total ? matched / total : 0.0;
}

AblationReport run_ablation(const CompiledGrammar& g, const std::vector<Tree>& train, const std::vector<Tree>& test,
                            const AblationOptions& options) {
  AblationReport r;
  r.seed = options.seed;
  r.random_seeds = options.random_seeds;
  auto point = [](std::string label, int trees, const GeigReport& rep) {
    return AblationPoint{std::move(label), trees, rep.recall, rep.precision, rep.zero_crossings, rep.mean_crossings};
  };
  for (int k = 0; k <= options.halvings; ++k) {
    const int den = 1 << k;
    auto subset = subsample(train, 1, den, options.seed);
    TrainOptions topt;
    topt.jobs = options.eval.jobs;
    topt.parse = options.eval.parse;
    TrainReport tr = train_from_treebank(g, subset, topt);
    ProbModel model = smooth_good_turing(tr.counts, g.table);
    EvalResult ev = evaluate(g, test, best_of(model), options.eval);
    r.points.push_back(point(k == 0 ? "full" : "1/" + std::to_string(den), static_cast<int>(subset.size()), ev.report));
  }
  AblationPoint zero{"0", 0, 0, 0, 0, 0};
  for (int s = 0; s < options.random_seeds; ++s) {
    EvalResult ev = evaluate(g, test, random_choice(options.seed * 1000003ULL + static_cast<std::uint64_t>(s)),
                             options.eval);
    zero.recall += ev.report.recall;
    zero.precision += ev.report.precision;
    zero.zero_crossings += ev.report.zero_crossings;
    zero.mean_crossings += ev.report.mean_crossings;
  }
  if (options.random_seeds > 0) {
    const double n = options.random_seeds;
    zero.recall /= n;
    zero.precision /= n;
    zero.zero_crossings /= n;
    zero.mean_crossings /= n;
  }
  r.points.push_back(zero);
  r.expected_random_recall = expected_random_recall(g, test, options.eval);
  return r;
}

std::string format_ablation(const AblationReport& r, bool tsv) {
  std::ostringstream out;
  char line[160];
  if (tsv) {
    out << "# seed " << r.seed << "\n";
    out << "training\ttrees\trecall\tprecision\tzero_crossings\tmean_crossings\n";
    for (const auto& p : r.points) {
      std::snprintf(line, sizeof line, "%s\t%d\t%.6f\t%.6f\t%.6f\t%.6f\n", p.label.c_str(), p.trees, p.recall,
                    p.precision, p.zero_crossings, p.mean_crossings);
      out << line;
    }
    std::snprintf(line, sizeof line, "# expected_random_recall %.6f\n", r.expected_random_recall);
    out << line;
    return out.str();
  }
  out << "# seed " << r.seed << " (no-data point: mean of " << r.random_seeds << " random-choice runs)\n";
  std::snprintf(line, sizeof line, "%-10s %6s %9s %10s %11s %11s\n", "Training", "Trees", "Recall", "Precision",
                "Zero cross", "Mean cross");
  out << line;
  for (const auto& p : r.points) {
    std::snprintf(line, sizeof line, "%-10s %6d %8.2f%% %9.2f%% %10.1f%% %11.3f\n", p.label.c_str(), p.trees,
                  100 * p.recall, 100 * p.precision, 100 * p.zero_crossings, p.mean_crossings);
    out << line;
  }
  std::snprintf(line, sizeof line, "Expected recall of random choice: %.2f%%\n", 100 * r.expected_random_recall);
  out << line;
  return out.str();
}

}  // namespace plr
