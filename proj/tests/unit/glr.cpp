#include <doctest.h>

#include "../oracle/oracle.hpp"
#include "../support.hpp"
#include "plr/glr.hpp"

using namespace plr;
using testing_support::fixture;

namespace {

ParseOutcome parse(const CompiledGrammar& g, const std::vector<std::string>& labels, const ParseOptions& o = {}) {
  return parse_lattice(SentenceLattice::from_labels(labels), g.backbone, g.table, o);
}

BigCount count(const ParseOutcome& o) { return o.forest ? count_parses(*o.forest) : BigCount(0); }

std::vector<std::string> as(int n) { return std::vector<std::string>(static_cast<std::size_t>(n), "a"); }

}  // namespace

TEST_SUITE("glr") {
  TEST_CASE("catalan counts") {
    auto g = fixture("catalan.g");
    CHECK(count(parse(g, as(4))) == 5);
    CHECK(count(parse(g, as(5))) == 14);
    CHECK(count(parse(g, as(6))) == 42);
    CHECK(count(parse(g, as(20))) == BigCount("1767263190"));
  }

  TEST_CASE("agreement clash fails") {
    auto g = fixture("agreement.g");
    auto o = parse(g, {"AT", "NN1", "VV0"});
    CHECK(o.status == ParseStatus::no_analysis);
    CHECK_FALSE(o.forest);
    CHECK(count(parse(g, {"AT", "NN1", "VVZ"})) == 1);
    CHECK(std::string(to_string(o.status)) == "no-analysis");
  }

  TEST_CASE("unknown labels and empty input") {
    auto g = fixture("catalan.g");
    CHECK(parse(g, {"a", "zzz"}).status == ParseStatus::no_analysis);
    CHECK(parse(g, {}).status == ParseStatus::no_analysis);
  }

  TEST_CASE("constrained parsing filters by crossing") {
    auto g = fixture("catalan.g");
    auto lat = SentenceLattice::from_labels(as(3));
    auto left = constrained_parse(lat, g.backbone, g.table, {{0, 2}});
    REQUIRE(left.forest);
    CHECK(count_parses(*left.forest) == 1);
    auto d = enumerate_derivations(*left.forest);
    REQUIRE(d.size() == 1);
    CHECK(d[0].tree.children[0].end == 2);
    CHECK(count(constrained_parse(lat, g.backbone, g.table, {})) == 2);
    CHECK(constrained_parse(lat, g.backbone, g.table, {{0, 2}, {1, 3}}).status == ParseStatus::no_analysis);
  }

  TEST_CASE("constrained parsing matches the filtered oracle") {
    auto g = fixture("tags.g");
    std::mt19937_64 rng(3);
    oracle::Sentence s{"AT", "NN1", "VVZ", "AT", "NN1", "II", "AT", "NN1", "II", "NN2"};
    auto trees = oracle::chart_trees(g.expanded, oracle::single(s));
    REQUIRE(trees.size() > 2);
    for (int i = 0; i < 20; ++i) {
      // Skeleton from a random oracle tree's non-auxiliary spans.
      const auto& pick = trees[rng() % trees.size()];
      std::vector<Span> skel;
      std::function<void(const oracle::OTree&)> walk = [&](const oracle::OTree& n) {
        if (!n.leaf() && rng() % 2 && n.end - n.start >= 2) skel.push_back({n.start, n.end});
        for (const auto& c : n.children) walk(c);
      };
      walk(pick);
      auto want = oracle::chart_trees(g.expanded, oracle::single(s), &skel);
      auto got = constrained_parse(SentenceLattice::from_labels(s), g.backbone, g.table, skel);
      REQUIRE(got.forest);
      CHECK(count_parses(*got.forest) == want.size());
      std::vector<oracle::OTree> have;
      for (const auto& d : enumerate_derivations(*got.forest)) have.push_back(oracle::from_derivation(d.tree, g.backbone));
      std::sort(have.begin(), have.end());
      CHECK(have == want);
    }
  }

  TEST_CASE("lattice input sums over label choices") {
    auto g = fixture("tags.g");
    SentenceLattice lat;
    lat.tokens = {{"the", {{"AT", 1.0}}},
                  {"head", {{"NN1", 0.6}, {"VV0", 0.3}}},
                  {"sees", {{"VVZ", 0.9}, {"NN2", 0.1}}}};
    auto o = parse_lattice(lat, g.backbone, g.table);
    REQUIRE(o.forest);
    oracle::Labels labels{{"AT"}, {"NN1", "VV0"}, {"VVZ", "NN2"}};
    CHECK(count_parses(*o.forest) == oracle::chart_count(g.expanded, labels));
  }

  TEST_CASE("time-out") {
    auto g = fixture("catalan.g");
    ParseOptions o;
    o.timeout = 1e-9;
    auto r = parse(g, as(60), o);
    CHECK(r.status == ParseStatus::timeout);
    CHECK_FALSE(r.forest);
  }

  TEST_CASE("table hash mismatch is rejected") {
    auto a = fixture("catalan.g");
    auto b = fixture("expr.g");
    CHECK_THROWS_AS(parse_lattice(SentenceLattice::from_labels({"a"}), a.backbone, b.table), std::invalid_argument);
  }

  TEST_CASE("forest is polynomial while the count is exponential") {
    auto g = fixture("catalan.g");
    auto o = parse(g, as(40));
    REQUIRE(o.forest);
    CHECK(o.forest->nodes.size() < 5000);
    CHECK(count_parses(*o.forest) == BigCount("680425371729975800390"));
  }
}
