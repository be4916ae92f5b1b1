// plr: command-line front end for the probabilistic GLR toolkit.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "plr/pipeline.hpp"
#include "plr/tagged.hpp"

using namespace plr;

namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;
constexpr int kNoAnalysis = 3;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  double timeout = 30.0;
  double certainty = 0.9;
  double ratio = 50.0;
  std::string format = "text";
  std::string input_format = "tagged";
  int jobs = 1;

  bool tsv() const { return format == "tsv"; }
  ParseOptions parse() const {
    ParseOptions o;
    if (timeout > 0) o.timeout = timeout; else o.timeout.reset();
    return o;
  }
};

void add_common(CLI::App* cmd, Common& c, bool input) {
  cmd->add_option("--timeout", c.timeout, "CPU seconds per sentence (0: no limit)")->capture_default_str();
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "tsv"}))->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  if (!input) return;
  cmd->add_option("--certainty", c.certainty, "Keep only the top label at or above this likelihood")
      ->capture_default_str();
  cmd->add_option("--ratio", c.ratio, "Otherwise keep labels within this factor of the top")->capture_default_str();
  cmd->add_option("--input-format", c.input_format, "tagged (word|L:p), plain (word_L) or tree")
      ->check(CLI::IsMember({"tagged", "plain", "tree"}))
      ->capture_default_str();
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    out.push_back(line);
  }
  return out;
}

std::vector<SentenceLattice> read_input(const std::string& path, const Common& c) {
  std::vector<SentenceLattice> out;
  const std::string text = read_file(path);
  try {
    if (c.input_format == "tree") {
      for (const auto& t : read_treebank(text)) out.push_back(tree_lattice(t));
      return out;
    }
    for (const auto& line : content_lines(text)) {
      auto tokens = c.input_format == "plain" ? parse_plain_line(line) : parse_tagged_line(line);
      for (auto& t : tokens) t = threshold_labels(t, c.certainty, c.ratio);
      out.push_back(to_lattice(tokens));
    }
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
  return out;
}

CompiledGrammar load_grammar(const std::string& path) {
  try {
    return compile_grammar(read_file(path));
  } catch (const GrammarError& e) {
    throw DataError(path + ":" + e.what());
  }
}

ProbModel load_model(const std::string& path, const CompiledGrammar& g) {
  ProbModel m = ProbModel::deserialize(read_file(path));
  if (m.table_hash() != g.table.backbone_hash())
    throw DataError("model " + path + " was trained for table " + hex64(m.table_hash()) + ", grammar gives " +
                    hex64(g.table.backbone_hash()));
  return m;
}

std::string words(const SentenceLattice& s) {
  std::string out;
  for (const auto& t : s.tokens) out += (out.empty() ? "" : " ") + t.word;
  return out;
}

int cmd_compile(const std::string& grammar, const std::string& out_path, const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  if (!out_path.empty()) write_file(out_path, g.table.serialize());
  const std::pair<const char*, std::string> rows[] = {
      {"rules", std::to_string(g.source.rules.size())},
      {"expanded_rules", std::to_string(g.expanded.rules.size())},
      {"productions", std::to_string(g.backbone.productions.size())},
      {"terminals", std::to_string(g.backbone.num_terminals - 1)},
      {"nonterminals", std::to_string(g.backbone.num_symbols() - g.backbone.num_terminals)},
      {"states", std::to_string(g.table.state_count())},
      {"actions", std::to_string(g.table.action_count())},
      {"conflicts", std::to_string(g.table.conflict_count())},
      {"table_hash", hex64(g.table.backbone_hash())},
  };
  for (const auto& [k, v] : rows) {
    if (c.tsv())
      std::cout << k << '\t' << v << '\n';
    else
      std::printf("%-14s %s\n", k, v.c_str());
  }
  return 0;
}

int cmd_parse(const std::string& grammar, const std::string& input, const std::string& skeleton_path, bool dump,
              const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  auto sentences = read_input(input, c);
  std::vector<std::vector<Span>> skeletons;
  if (!skeleton_path.empty()) {
    for (const auto& t : read_treebank(read_file(skeleton_path), false)) skeletons.push_back(extract_brackets(t).spans);
    if (skeletons.size() != sentences.size())
      throw DataError("skeleton file has " + std::to_string(skeletons.size()) + " trees for " +
                      std::to_string(sentences.size()) + " sentences");
  }
  auto outcomes = parallel_map<ParseOutcome>(sentences.size(), c.jobs, [&](std::size_t i) {
    return skeletons.empty() ? parse_lattice(sentences[i], g.backbone, g.table, c.parse())
                             : constrained_parse(sentences[i], g.backbone, g.table, skeletons[i], c.parse());
  });
  if (c.tsv()) std::cout << "sentence\tlength\tstatus\tparses\tcpu_seconds\n";
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    std::string count = o.forest ? count_parses(*o.forest).str() : "0";
    if (c.tsv()) {
      std::printf("%zu\t%d\t%s\t%s\t%.6f\n", i + 1, o.tokens, to_string(o.status), count.c_str(), o.cpu_seconds);
    } else {
      std::printf("%zu: %s\n   %s, %s parses, %d tokens, %.3fs\n", i + 1, words(sentences[i]).c_str(),
                  to_string(o.status), count.c_str(), o.tokens, o.cpu_seconds);
    }
    if (dump && o.forest) std::cout << dump_forest(*o.forest);
  }
  return 0;
}

int cmd_train(const std::string& grammar, const std::vector<std::string>& treebanks, std::vector<double> weights,
              const std::string& model_path, const std::string& counts_path, const std::string& fraction,
              std::uint64_t seed, const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  if (!weights.empty() && weights.size() != treebanks.size())
    throw CLI::ValidationError("--weight", "give one weight per treebank");
  weights.resize(treebanks.size(), 1.0);
  int num = 1, den = 1;
  if (!fraction.empty() && std::sscanf(fraction.c_str(), "%d/%d", &num, &den) != 2)
    throw CLI::ValidationError("--subsample", "expected a fraction like 1/64");

  TransitionCounts counts(g.table.backbone_hash());
  int sentences = 0, used = 0, skipped = 0;
  BigCount histories = 0;
  for (std::size_t i = 0; i < treebanks.size(); ++i) {
    std::vector<Tree> trees;
    try {
      trees = subsample(read_treebank(read_file(treebanks[i])), num, den, seed);
    } catch (const std::invalid_argument& e) {
      throw DataError(treebanks[i] + ": " + e.what());
    }
    TrainOptions opt;
    opt.weight = weights[i];
    opt.jobs = c.jobs;
    opt.parse = c.parse();
    TrainReport r = train_from_treebank(g, trees, opt);
    counts.merge(r.counts);
    sentences += r.sentences;
    used += r.used;
    skipped += r.skipped;
    histories += r.histories;
  }
  if (used == 0) throw DataError("no training sentence has a skeleton-consistent analysis");
  ProbModel model = smooth_good_turing(counts, g.table);
  write_file(model_path, model.serialize());
  if (!counts_path.empty()) write_file(counts_path, counts.serialize());
  const double skipped_frac = sentences ? static_cast<double>(skipped) / sentences : 0.0;
  if (c.tsv()) {
    std::cout << "sentences\tused\thistories\tskipped_fraction\n"
              << sentences << '\t' << used << '\t' << histories << '\t' << skipped_frac << '\n';
  } else {
    std::printf("sentences       %d\nused            %d\nhistories       %s\nskipped         %.1f%%\n", sentences, used,
                histories.str().c_str(), 100 * skipped_frac);
  }
  return 0;
}

int cmd_rank(const std::string& grammar, const std::string& model_path, const std::string& input, int nbest,
             bool strict, bool tag_likelihoods, const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  ProbModel model = load_model(model_path, g);
  auto sentences = read_input(input, c);
  RankOptions ropt{tag_likelihoods};
  auto ranked = parallel_map<std::pair<ParseStatus, std::vector<RankedAnalysis>>>(
      sentences.size(), c.jobs, [&](std::size_t i) {
        ParseOutcome o = parse_lattice(sentences[i], g.backbone, g.table, c.parse());
        std::vector<RankedAnalysis> r;
        if (o.forest) r = rank_nbest(*o.forest, model, static_cast<std::size_t>(nbest), ropt);
        return std::make_pair(o.status, std::move(r));
      });
  bool missing = false;
  if (c.tsv()) std::cout << "sentence\trank\tlogprob\ttree\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& [status, list] = ranked[i];
    if (!c.tsv()) std::printf("# %zu: %s\n", i + 1, words(sentences[i]).c_str());
    if (list.empty()) {
      missing = true;
      if (c.tsv())
        std::printf("%zu\t0\t-\t%s\n", i + 1, to_string(status));
      else
        std::printf("  %s\n", to_string(status));
      continue;
    }
    for (const auto& a : list) {
      std::string tree = to_string(display_tree(a.derivation.tree, g.backbone, &sentences[i]));
      if (c.tsv())
        std::printf("%zu\t%d\t%.6f\t%s\n", i + 1, a.rank, a.score.value(), tree.c_str());
      else
        std::printf("  %d %10.4f  %s\n", a.rank, a.score.value(), tree.c_str());
    }
  }
  return strict && missing ? kNoAnalysis : 0;
}

int cmd_eval(const std::string& gold_path, const std::string& candidate, const std::string& grammar,
             const std::string& model_path, bool random, std::uint64_t seed, const Common& c) {
  std::vector<Tree> gold;
  try {
    gold = read_treebank(read_file(gold_path));
  } catch (const std::invalid_argument& e) {
    throw DataError(gold_path + ": " + e.what());
  }
  GeigReport report;
  if (!candidate.empty()) {
    auto cand = read_treebank(read_file(candidate));
    if (cand.size() != gold.size()) throw DataError("candidate and gold treebanks differ in size");
    std::vector<std::pair<BracketSet, BracketSet>> pairs;
    for (std::size_t i = 0; i < gold.size(); ++i) pairs.emplace_back(extract_brackets(cand[i]), extract_brackets(gold[i]));
    try {
      report = geig_report(pairs);
    } catch (const std::invalid_argument& e) {
      throw DataError(e.what());
    }
  } else {
    if (grammar.empty() || (model_path.empty() && !random))
      throw CLI::ValidationError("eval", "give --candidate, or --grammar with --model or --random");
    CompiledGrammar g = load_grammar(grammar);
    EvalOptions opt{c.jobs, c.parse()};
    if (random) {
      report = evaluate(g, gold, random_choice(seed), opt).report;
    } else {
      ProbModel model = load_model(model_path, g);
      report = evaluate(g, gold, best_of(model), opt).report;
    }
  }
  std::cout << format_geig(report, c.tsv());
  return 0;
}

int cmd_stats(const std::string& grammar, const std::string& input, const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  auto sentences = read_input(input, c);
  auto summaries = parallel_map<OutcomeSummary>(sentences.size(), c.jobs, [&](std::size_t i) {
    ParseOutcome o = parse_lattice(sentences[i], g.backbone, g.table, c.parse());
    return OutcomeSummary{o.tokens, o.status, o.forest ? count_parses(*o.forest) : BigCount(0)};
  });
  std::cout << format_coverage(coverage_stats(summaries), c.tsv());
  return 0;
}

int cmd_ablate(const std::string& grammar, const std::string& train, const std::string& test, std::uint64_t seed,
               int halvings, int random_seeds, const Common& c) {
  CompiledGrammar g = load_grammar(grammar);
  std::vector<Tree> tr, te;
  try {
    tr = read_treebank(read_file(train));
    te = read_treebank(read_file(test));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  AblationOptions opt;
  opt.seed = seed;
  opt.halvings = halvings;
  opt.random_seeds = random_seeds;
  opt.eval = {c.jobs, c.parse()};
  std::cout << format_ablation(run_ablation(g, tr, te, opt), c.tsv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic GLR parsing toolkit"};
  app.require_subcommand(1);
  Common common;
  std::string grammar, input, output, model, counts, skeleton, gold, candidate, fraction, train, test;
  std::vector<std::string> treebanks;
  std::vector<double> weights;
  std::uint64_t seed = 1;
  int nbest = 1, halvings = 6, random_seeds = 20;
  bool dump = false, strict = false, tag_lik = false, random = false;

  auto* compile = app.add_subcommand("compile", "Compile a grammar and report table statistics");
  compile->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  compile->add_option("-o,--output", output, "Write the serialized table here");
  add_common(compile, common, false);

  auto* parse = app.add_subcommand("parse", "Parse sentences and count analyses");
  parse->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  parse->add_option("input", input, "Sentences, one per line")->required()->check(CLI::ExistingFile);
  parse->add_option("--skeleton", skeleton, "Unlabelled bracketings constraining each sentence")
      ->check(CLI::ExistingFile);
  parse->add_flag("--dump", dump, "Print the packed forest");
  add_common(parse, common, true);

  auto* trainc = app.add_subcommand("train", "Train a model from bracketed treebanks");
  trainc->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  trainc->add_option("treebanks", treebanks, "Treebank files")->required()->check(CLI::ExistingFile);
  trainc->add_option("-o,--output", output, "Model file to write")->required();
  trainc->add_option("--counts", counts, "Also write raw transition counts here");
  trainc->add_option("--weight", weights, "Per-treebank count weight (default 1)");
  trainc->add_option("--subsample", fraction, "Train on a random fraction of each treebank, e.g. 1/64");
  trainc->add_option("--seed", seed, "Subsampling seed")->capture_default_str();
  add_common(trainc, common, false);

  auto* rank = app.add_subcommand("rank", "Return the n most probable analyses");
  rank->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  rank->add_option("model", model, "Model file")->required()->check(CLI::ExistingFile);
  rank->add_option("input", input, "Sentences, one per line")->required()->check(CLI::ExistingFile);
  rank->add_option("--nbest", nbest, "Analyses per sentence")->check(CLI::PositiveNumber)->capture_default_str();
  rank->add_flag("--strict", strict, "Exit with status 3 if some sentence has no analysis");
  rank->add_flag("--tag-likelihoods", tag_lik, "Multiply label likelihoods into scores");
  add_common(rank, common, true);

  auto* eval = app.add_subcommand("eval", "GEIG bracket evaluation against a gold treebank");
  eval->add_option("gold", gold, "Gold treebank")->required()->check(CLI::ExistingFile);
  eval->add_option("--candidate", candidate, "Candidate treebank to score directly")->check(CLI::ExistingFile);
  eval->add_option("--grammar", grammar, "Grammar for parsing the gold sentences")->check(CLI::ExistingFile);
  eval->add_option("--model", model, "Model choosing the best analysis")->check(CLI::ExistingFile);
  eval->add_flag("--random", random, "Choose analyses uniformly at random");
  eval->add_option("--seed", seed, "Seed for --random")->capture_default_str();
  add_common(eval, common, false);

  auto* stats = app.add_subcommand("stats", "Coverage and ambiguity distribution");
  stats->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  stats->add_option("input", input, "Sentences, one per line")->required()->check(CLI::ExistingFile);
  add_common(stats, common, true);

  auto* ablate = app.add_subcommand("ablate", "Accuracy against training-set size");
  ablate->add_option("grammar", grammar, "Grammar file")->required()->check(CLI::ExistingFile);
  ablate->add_option("train", train, "Training treebank")->required()->check(CLI::ExistingFile);
  ablate->add_option("test", test, "Test treebank")->required()->check(CLI::ExistingFile);
  ablate->add_option("--seed", seed, "Subsampling seed")->capture_default_str();
  ablate->add_option("--halvings", halvings, "Number of halvings")->check(CLI::NonNegativeNumber)->capture_default_str();
  ablate->add_option("--random-seeds", random_seeds, "Random-choice runs for the no-data point")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_common(ablate, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*compile) return cmd_compile(grammar, output, common);
    if (*parse) return cmd_parse(grammar, input, skeleton, dump, common);
    if (*trainc) return cmd_train(grammar, treebanks, weights, output, counts, fraction, seed, common);
    if (*rank) return cmd_rank(grammar, model, input, nbest, strict, tag_lik, common);
    if (*eval) return cmd_eval(gold, candidate, grammar, model, random, seed, common);
    if (*stats) return cmd_stats(grammar, input, common);
    if (*ablate) return cmd_ablate(grammar, train, test, seed, halvings, random_seeds, common);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "plr: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "plr: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}
