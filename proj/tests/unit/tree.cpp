#include <doctest.h>

#include "../support.hpp"
#include "plr/geig.hpp"
#include "plr/glr.hpp"
#include "plr/tree.hpp"

using namespace plr;

TEST_SUITE("tree") {
  TEST_CASE("reading labelled trees") {
    Tree t = read_tree("(S (NP the_AT dog_NN1) (VP barks_VVZ))");
    CHECK(t.label == "S");
    REQUIRE(t.children.size() == 2);
    CHECK(t.children[0].children[1].word == "dog");
    CHECK(t.children[0].children[1].label == "NN1");
    CHECK(t.size() == 3);
    CHECK(to_string(t) == "(S (NP the_AT dog_NN1) (VP barks_VVZ))");
  }

  TEST_CASE("annotation is stripped") {
    Tree t = read_tree("(S (NP-SBJ the_AT dog_NN1) (VP=2 barks_VVZ (-NONE- *T*)))");
    CHECK(t.children[0].label == "NP");
    CHECK(t.children[1].label == "VP");
    CHECK(t.children[1].children.size() == 1);
  }

  TEST_CASE("unlabelled skeletons") {
    Tree t = read_tree("((the dog) (barks))", false);
    CHECK(t.size() == 3);
    auto b = extract_brackets(t);
    CHECK(b.spans == std::vector<Span>{{0, 2}, {0, 3}});
  }

  TEST_CASE("malformed trees") {
    CHECK_THROWS(read_tree("(S (NP a b)"));
    CHECK_THROWS(read_tree("(S a) b)"));
    CHECK_THROWS(read_tree(""));
  }

  TEST_CASE("treebank reading skips comments") {
    auto tb = read_treebank("# header\n(S a_X b_Y)\n\n(S c_X)\n");
    CHECK(tb.size() == 2);
  }

  TEST_CASE("lattice from tree leaves") {
    auto lat = tree_lattice(read_tree("(S (NP the_AT dog_NN1) barks_VVZ)"));
    REQUIRE(lat.size() == 3);
    CHECK(lat.tokens[2].word == "barks");
    CHECK(lat.tokens[2].labels[0].label == "VVZ");
  }

  TEST_CASE("display splices kleene auxiliaries") {
    auto g = testing_support::fixture("tags.g");
    Tree gold = read_tree("(T (S (NP the_AT (N1 (AP old_JJ) (AP small_JJ) (N0 dog_NN1))) (VP barks_VVZ)))");
    auto lat = tree_lattice(gold);
    auto o = parse_lattice(lat, g.backbone, g.table);
    REQUIRE(o.forest);
    auto all = enumerate_derivations(*o.forest);
    REQUIRE(all.size() == 1);
    CHECK(to_string(display_tree(all[0].tree, g.backbone, &lat)) == to_string(gold));
  }
}
