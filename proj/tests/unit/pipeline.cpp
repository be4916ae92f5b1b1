#include <doctest.h>

#include "../support.hpp"
#include "plr/pipeline.hpp"

using namespace plr;
using testing_support::data_path;
using testing_support::fixture;

namespace {

std::vector<Tree> toy(const char* name) { return read_treebank(read_file(data_path(name))); }

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("parallel_map keeps input order") {
    auto out = parallel_map<int>(1000, 8, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
    CHECK_THROWS(parallel_map<int>(10, 4, [](std::size_t i) -> int {
      if (i == 7) throw std::runtime_error("boom");
      return 0;
    }));
  }

  TEST_CASE("subsampling is seeded, nested and in corpus order") {
    auto trees = toy("toy_train.trees");
    auto half = subsample(trees, 1, 2, 7);
    auto quarter = subsample(trees, 1, 4, 7);
    CHECK(half.size() == trees.size() / 2);
    CHECK(quarter.size() == trees.size() / 4);
    CHECK(subsample(trees, 1, 2, 7) == half);
    CHECK(subsample(trees, 1, 2, 8) != half);
    // Smaller samples are prefixes of one permutation, so they nest.
    for (const auto& t : quarter) CHECK(std::find(half.begin(), half.end(), t) != half.end());
    auto pos = [&](const Tree& t) { return std::find(trees.begin(), trees.end(), t) - trees.begin(); };
    for (std::size_t i = 1; i < half.size(); ++i) CHECK(pos(half[i - 1]) < pos(half[i]));
    CHECK(subsample(trees, 1, 1, 3) == trees);
  }

  TEST_CASE("training from the toy treebank") {
    auto g = fixture("tags.g");
    auto trees = toy("toy_train.trees");
    TrainOptions opt;
    opt.jobs = 4;
    auto r = train_from_treebank(g, trees, opt);
    CHECK(r.sentences == static_cast<int>(trees.size()));
    CHECK(r.used == r.sentences);
    CHECK(r.skipped == 0);
    CHECK(r.counts.histories() == doctest::Approx(static_cast<double>(trees.size())));
    opt.jobs = 1;
    CHECK(train_from_treebank(g, trees, opt).counts.entries() == r.counts.entries());
    opt.weight = 0.5;
    CHECK(train_from_treebank(g, trees, opt).counts.histories() == doctest::Approx(trees.size() * 0.5));
  }

  TEST_CASE("three left, one right") {
    auto g = fixture("catalan.g");
    std::vector<Tree> trees(3, read_tree("(X (X a_a a_a) a_a)"));
    trees.push_back(read_tree("(X a_a (X a_a a_a))"));
    auto r = train_from_treebank(g, trees);
    std::vector<double> conflicted;
    for (int s = 0; s < g.table.state_count(); ++s)
      for (const auto& [la, acts] : g.table.row(s))
        if (acts.size() > 1) {
          double total = 0;
          for (const auto& a : acts) total += r.counts.count({s, la, a});
          if (total == 4)
            for (const auto& a : acts) conflicted.push_back(r.counts.count({s, la, a}) / total);
        }
    std::sort(conflicted.begin(), conflicted.end());
    CHECK(conflicted == std::vector<double>{0.25, 0.75});
  }

  TEST_CASE("inconsistent trees are skipped") {
    auto g = fixture("catalan.g");
    auto r = train_from_treebank(g, {read_tree("(X a_a b_b)"), read_tree("(X a_a)")});
    CHECK(r.used == 1);
    CHECK(r.skipped == 1);
  }

  TEST_CASE("gold against gold is perfect") {
    auto g = fixture("tags.g");
    auto test = toy("toy_test.trees");
    std::vector<std::pair<BracketSet, BracketSet>> pairs;
    for (const auto& t : test) pairs.emplace_back(extract_brackets(t), extract_brackets(t));
    auto r = geig_report(pairs);
    CHECK(r.recall == 1.0);
    CHECK(r.precision == 1.0);
  }

  TEST_CASE("evaluation and random choice") {
    auto g = fixture("tags.g");
    auto train = toy("toy_train.trees");
    auto test = toy("toy_test.trees");
    auto model = smooth_good_turing(train_from_treebank(g, train).counts, g.table);
    EvalOptions opt;
    opt.jobs = 3;
    auto best = evaluate(g, test, best_of(model), opt);
    CHECK(best.outcomes.size() == test.size());
    for (const auto& c : best.chosen) CHECK(c.has_value());
    auto again = evaluate(g, test, best_of(model), EvalOptions{});
    CHECK(again.report.recall == best.report.recall);
    double mean = 0;
    for (int s = 0; s < 20; ++s) mean += evaluate(g, test, random_choice(100 + s), opt).report.recall / 20;
    CHECK(mean == doctest::Approx(expected_random_recall(g, test)).epsilon(0.05));
    CHECK(best.report.recall > expected_random_recall(g, test));
  }

  TEST_CASE("ablation report") {
    auto g = fixture("tags.g");
    AblationOptions opt;
    opt.halvings = 2;
    opt.random_seeds = 3;
    auto r = run_ablation(g, toy("toy_train.trees"), toy("toy_test.trees"), opt);
    REQUIRE(r.points.size() == 4);
    CHECK(r.points[0].label == "full");
    CHECK(r.points[2].label == "1/4");
    CHECK(r.points[3].label == "0");
    CHECK(format_ablation(r, true).rfind("# seed 1\n", 0) == 0);
    CHECK(format_ablation(r, false) == format_ablation(run_ablation(g, toy("toy_train.trees"),
                                                                    toy("toy_test.trees"), opt),
                                                       false));
  }
}
