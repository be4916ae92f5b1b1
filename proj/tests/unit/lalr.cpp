#include <doctest.h>

#include "../oracle/oracle.hpp"
#include "../support.hpp"
#include "plr/lalr.hpp"

using namespace plr;
using testing_support::fixture;

namespace {

CompiledGrammar inline_grammar(const char* text) { return compile_grammar(text); }

bool accepts(const CompiledGrammar& g, const oracle::Sentence& s) {
  return oracle::table_language(g.table, g.backbone, static_cast<int>(s.size())).count(s) > 0;
}

}  // namespace

TEST_SUITE("lalr") {
  TEST_CASE("single terminal") {
    auto g = inline_grammar("S -> 'a' ;");
    CHECK(oracle::table_language(g.table, g.backbone, 4) == std::set<oracle::Sentence>{{"a"}});
    CHECK(g.table.conflict_count() == 0);
  }

  TEST_CASE("expression grammar is deterministic") {
    auto g = fixture("expr.g");
    CHECK(g.table.conflict_count() == 0);
    CHECK(accepts(g, {"id", "+", "id", "+", "id"}));
    CHECK_FALSE(accepts(g, {"+", "id"}));
    for (const auto& s : oracle::all_strings({"id", "+"}, 7))
      CHECK(accepts(g, s) == (oracle::chart_count(g.expanded, oracle::single(s)) > 0));
  }

  TEST_CASE("reduce/reduce conflict is retained") {
    auto g = fixture("rr.g");
    auto a = *g.table.terminal_id("a");
    auto shift = g.table.actions(0, a);
    REQUIRE(shift.size() == 1);
    CHECK(shift[0].kind == Action::Kind::shift);
    auto after = shift[0].target;
    auto acts = g.table.actions(after, 0);
    REQUIRE(acts.size() == 2);
    CHECK(acts[0].kind == Action::Kind::reduce);
    CHECK(acts[1].kind == Action::Kind::reduce);
    CHECK(g.table.conflict_count() == 1);
    CHECK(lookup_actions(g.table, after, "$").size() == 2);
  }

  TEST_CASE("lookup_actions") {
    auto g = fixture("catalan.g");
    CHECK_FALSE(lookup_actions(g.table, 0, "a").empty());
    CHECK(lookup_actions(g.table, 0, "ZZZ").empty());
  }

  TEST_CASE("nullable symbols") {
    auto g = inline_grammar("S -> A* 'b' B* C* ; A -> 'a' ; B -> 'c' ; C -> B* 'd' ;");
    CHECK(oracle::table_language(g.table, g.backbone, 5) == oracle::language(g.expanded, 5));
    CHECK(accepts(g, {"b"}));
    CHECK(accepts(g, {"a", "a", "b", "c"}));
    CHECK(accepts(g, {"b", "d", "c", "d"}));
  }

  TEST_CASE("construction is deterministic and serializes") {
    auto g = fixture("tags.g");
    auto again = build_lalr(g.backbone);
    CHECK(again == g.table);
    CHECK(g.table.backbone_hash() == g.backbone.hash());
    auto text = g.table.serialize();
    CHECK(LalrTable::deserialize(text) == g.table);
    CHECK(text.rfind("plr-lalr-table 1", 0) == 0);
    CHECK_THROWS(LalrTable::deserialize("plr-lalr-table 99\n"));
  }

  TEST_CASE("actions are ordered shift, reduce, accept") {
    auto g = fixture("catalan.g");
    for (int s = 0; s < g.table.state_count(); ++s)
      for (const auto& [la, acts] : g.table.row(s))
        CHECK(std::is_sorted(acts.begin(), acts.end()));
  }
}
