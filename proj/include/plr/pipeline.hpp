#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "plr/backbone.hpp"
#include "plr/geig.hpp"
#include "plr/glr.hpp"
#include "plr/grammar.hpp"
#include "plr/lalr.hpp"
#include "plr/model.hpp"
#include "plr/nbest.hpp"
#include "plr/tree.hpp"

namespace plr {

/// Everything derived from one grammar file. Forests point at `backbone`,
/// so keep this object in place while they are alive.
struct CompiledGrammar {
  Grammar source;
  Grammar expanded;
  CFBackbone backbone;
  LalrTable table;
};

CompiledGrammar compile_grammar(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results keep input order.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, int jobs, F fn) {
  std::vector<R> out(n);
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next++; i < n; i = next++) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        next = n;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Every tree if num == den, else round(size * num / den) of them chosen at
/// random with `seed`, kept in corpus order.
std::vector<Tree> subsample(const std::vector<Tree>& trees, int num, int den, std::uint64_t seed);

struct TrainOptions {
  double weight = 1.0;
  int jobs = 1;
  ParseOptions parse;
};

struct TrainReport {
  int sentences = 0;
  int used = 0;
  int skipped = 0;     // no skeleton-consistent analysis (or time-out)
  BigCount histories;  // derivations contributing (fractionally)
  TransitionCounts counts;
};

/// Parses each tree's words under its own bracketing and accumulates the
/// surviving derivations, 1/m each.
TrainReport train_from_treebank(const CompiledGrammar& g, const std::vector<Tree>& trees,
                                const TrainOptions& options = {});

/// Picks one derivation of a sentence's forest (sentence index given).
using Chooser = std::function<Derivation(const ParseForest&, std::size_t)>;

Chooser best_of(const ProbModel& model, const RankOptions& options = {});
/// Uniform random derivation; sentence i uses an RNG seeded with seed + i.
Chooser random_choice(std::uint64_t seed);

struct EvalOptions {
  int jobs = 1;
  ParseOptions parse;
};

struct EvalResult {
  GeigReport report;
  std::vector<OutcomeSummary> outcomes;
  std::vector<std::optional<Tree>> chosen;  // display trees
};

/// Parses the words of each gold tree, picks one analysis with `choose`, and
/// scores its brackets against the gold tree. Failed sentences contribute no
/// candidate brackets.
EvalResult evaluate(const CompiledGrammar& g, const std::vector<Tree>& gold, const Chooser& choose,
                    const EvalOptions& options = {});

/// Exact expected corpus recall of uniform random choice (by enumeration).
double expected_random_recall(const CompiledGrammar& g, const std::vector<Tree>& gold,
                              const EvalOptions& options = {});

struct AblationPoint {
  std::string label;  // "full", "1/2", ..., "0"
  int trees = 0;
  double recall = 0;
  double precision = 0;
  double zero_crossings = 0;
  double mean_crossings = 0;
};

struct AblationReport {
  std::uint64_t seed = 0;
  int random_seeds = 0;
  double expected_random_recall = 0;
  std::vector<AblationPoint> points;
};

struct AblationOptions {
  std::uint64_t seed = 1;
  int halvings = 6;       // full, 1/2 ... 1/2^halvings, then no data
  int random_seeds = 20;  // seeds averaged for the no-data point
  EvalOptions eval;
};

/// Trains on successively halved random subsets of `train` and evaluates on
/// `test`. With no training data the parser can only choose at random, so
/// the last point averages `random_seeds` random-choice runs.
AblationReport run_ablation(const CompiledGrammar& g, const std::vector<Tree>& train, const std::vector<Tree>& test,
                            const AblationOptions& options = {});

std::string format_ablation(const AblationReport& r, bool tsv);

}  // namespace plr
