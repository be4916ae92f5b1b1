#include <doctest.h>

#include "../support.hpp"
#include "catalan_training.hpp"
#include "plr/glr.hpp"
#include "plr/nbest.hpp"

using namespace plr;
using namespace catalan_training;
using testing_support::fixture;

TEST_SUITE("nbest") {
  TEST_CASE("unambiguous sentence") {
    auto g = fixture("expr.g");
    auto m = smooth_good_turing(TransitionCounts(g.table.backbone_hash()), g.table);
    auto o = parse_lattice(SentenceLattice::from_labels({"id", "+", "id"}), g.backbone, g.table);
    REQUIRE(o.forest);
    auto r = rank_nbest(*o.forest, m, 5);
    REQUIRE(r.size() == 1);
    CHECK(r[0].rank == 1);
  }

  TEST_CASE("3:1 model ranks left branching first") {
    auto g = fixture("catalan.g");
    auto m = smooth_good_turing(three_to_one(g), g.table);
    auto o = parse_lattice(SentenceLattice::from_labels({"a", "a", "a"}), g.backbone, g.table);
    REQUIRE(o.forest);
    auto r = rank_nbest(*o.forest, m, 2);
    REQUIRE(r.size() == 2);
    CHECK(r[0].derivation.tree == only(g, 3, {{0, 2}}).tree);
    CHECK(r[1].derivation.tree == only(g, 3, {{1, 3}}).tree);
    CHECK(r[0].score > r[1].score);
    CHECK(r[1].rank == 2);
  }

  TEST_CASE("n=1 is the argmax of enumeration") {
    auto g = fixture("catalan.g");
    auto m = smooth_good_turing(three_to_one(g), g.table);
    auto o = parse_lattice(SentenceLattice::from_labels({"a", "a", "a", "a", "a"}), g.backbone, g.table);
    REQUIRE(o.forest);
    auto all = enumerate_derivations(*o.forest);
    REQUIRE(all.size() == 14);
    const Derivation* best = &all[0];
    for (const auto& d : all)
      if (score(d, m) > score(*best, m)) best = &d;
    auto r = rank_nbest(*o.forest, m, 1);
    REQUIRE(r.size() == 1);
    CHECK(r[0].derivation.signature == best->signature);
    CHECK(r[0].score == score(*best, m));
    CHECK(rank_nbest(*o.forest, m, 100).size() == 14);
  }

  TEST_CASE("tag likelihoods shift scores") {
    auto g = fixture("tags.g");
    auto m = smooth_good_turing(TransitionCounts(g.table.backbone_hash()), g.table);
    SentenceLattice lat;
    lat.tokens = {{"the", {{"AT", 1.0}}}, {"dog", {{"NN1", 0.5}}}, {"barks", {{"VVZ", 0.25}}}};
    auto o = parse_lattice(lat, g.backbone, g.table);
    REQUIRE(o.forest);
    RankOptions with;
    with.include_tag_likelihoods = true;
    auto plain = rank_nbest(*o.forest, m, 1);
    auto tagged = rank_nbest(*o.forest, m, 1, with);
    CHECK(tagged[0].score.value() == doctest::Approx(plain[0].score.value() + std::log(0.125)).epsilon(1e-6));
  }

  TEST_CASE("hash mismatch") {
    auto g = fixture("catalan.g");
    auto e = fixture("expr.g");
    auto m = smooth_good_turing(TransitionCounts(e.table.backbone_hash()), e.table);
    auto o = parse_lattice(SentenceLattice::from_labels({"a"}), g.backbone, g.table);
    REQUIRE(o.forest);
    CHECK_THROWS_AS(rank_nbest(*o.forest, m, 1), std::invalid_argument);
  }
}
