#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../oracle/oracle.hpp"
#include "../support.hpp"
#include "plr/backbone.hpp"
#include "plr/features.hpp"
#include "plr/grammar.hpp"

using namespace plr;

namespace {

FeatureMap fm(std::initializer_list<std::pair<const char*, const char*>> kv) {
  FeatureMap m;
  for (auto [k, v] : kv) m[k] = FeatureValue::parse(v);
  return m;
}

}  // namespace

TEST_SUITE("grammar") {
  TEST_CASE("unify merges, clashes and binds") {
    auto a = unify(fm({{"num", "sg"}}), fm({{"num", "sg"}, {"per", "3"}}));
    REQUIRE(a);
    CHECK(*a == fm({{"num", "sg"}, {"per", "3"}}));
    CHECK_FALSE(unify(fm({{"num", "sg"}}), fm({{"num", "pl"}})));
    auto c = unify(fm({{"agr", "?X"}}), fm({{"agr", "3sg"}}));
    REQUIRE(c);
    CHECK(*c == fm({{"agr", "3sg"}}));
  }

  TEST_CASE("shared variables propagate and clash") {
    // ?X links a and b on one side; the other side pins them to different atoms.
    CHECK_FALSE(unify(fm({{"a", "?X"}, {"b", "?X"}}), fm({{"a", "sg"}, {"b", "pl"}})));
    auto m = unify(fm({{"a", "?X"}, {"b", "?X"}}), fm({{"a", "sg"}}));
    REQUIRE(m);
    CHECK(*m == fm({{"a", "sg"}, {"b", "sg"}}));
  }

  TEST_CASE("unify is commutative, associative and idempotent up to renaming") {
    std::mt19937_64 rng(5);
    const char* values[] = {"sg", "pl", "?X", "?Y", "?Z"};
    const char* names[] = {"a", "b", "c"};
    // Each map gets its own variables, as after renaming apart.
    auto random_map = [&](const char* tag) {
      FeatureMap m;
      for (const char* n : names)
        if (rng() % 3) {
          std::string v = values[rng() % 5];
          m[n] = FeatureValue::parse(v[0] == '?' ? v + tag : v);
        }
      return m;
    };
    auto canon = [](const std::optional<FeatureMap>& m) {
      return m ? std::optional<FeatureMap>(canonicalize(*m)) : std::nullopt;
    };
    for (int i = 0; i < 2000; ++i) {
      auto x = random_map("x"), y = random_map("y"), z = random_map("z");
      CHECK(canon(unify(x, y)) == canon(unify(y, x)));
      auto xy = unify(x, y);
      auto yz = unify(y, z);
      auto left = xy ? unify(*xy, z) : std::nullopt;
      auto right = yz ? unify(x, *yz) : std::nullopt;
      CHECK(canon(left) == canon(right));
    }
    auto ground = fm({{"num", "sg"}, {"per", "3"}});
    CHECK(unify(ground, ground) == ground);
  }

  TEST_CASE("canonicalize and rename_apart") {
    CHECK(canonicalize(fm({{"a", "?P"}, {"b", "?Q"}})) == canonicalize(fm({{"a", "?M"}, {"b", "?N"}})));
    CHECK(canonicalize(fm({{"a", "?P"}, {"b", "?P"}})) != canonicalize(fm({{"a", "?M"}, {"b", "?N"}})));
    auto r = rename_apart(fm({{"a", "?X"}, {"b", "sg"}}), "#1:");
    CHECK(r.at("a").is_variable());
    CHECK(r.at("a").text() != "X");
    CHECK(r.at("b") == FeatureValue::atom("sg"));
    CHECK(to_string(fm({{"b", "?X"}, {"a", "sg"}})) == "a=sg,b=?X");
  }

  TEST_CASE("parse_grammar_file examples") {
    auto g = parse_grammar_file("S -> NP[num=?N] VP[num=?N] ; NP -> 'n' ; VP -> 'v' ;");
    REQUIRE(g.rules.size() == 3);
    CHECK(g.start == "S");
    CHECK(g.rules[0].daughters[0].category.features.at("num") == FeatureValue::variable("N"));

    auto x = parse_grammar_file("X -> X X ; X -> 'a' ;");
    CHECK(x.rules.size() == 2);
    CHECK(x.terminals == std::set<std::string>{"a"});
    CHECK(x.rules[0].id == "r1");
  }

  TEST_CASE("named rules and alternatives") {
    auto g = parse_grammar_file("@top S -> A | B ; A -> 'a' ; B -> 'b' ;");
    REQUIRE(g.rules.size() == 4);
    CHECK(g.rules[0].id == "top");
    CHECK(g.rules[1].id == "top/2");
  }

  TEST_CASE("grammar errors") {
    try {
      parse_grammar_file("S -> Q 'a' ;");
      FAIL("expected an error");
    } catch (const GrammarError& e) {
      CHECK(std::string(e.what()).find("Q") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_grammar_file("@x S -> 'a' ; @x S -> 'b' ;"), GrammarError);
    CHECK_THROWS_AS(parse_grammar_file("S -> 'a' "), GrammarError);
    CHECK_THROWS_AS(parse_grammar_file("S -> T[f=a] ; %textual T[f=b] -> 'a' ; %end"), GrammarError);
    try {
      parse_grammar_file("S -> 'a' ;\nS -> [ ;");
      FAIL("expected an error");
    } catch (const GrammarError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("kleene expansion preserves the language") {
    const char* grammars[] = {
        "X1 -> X0 Arg* ; X0 -> 'x' ; Arg -> 'a' | 'b' ;",
        "VP -> V NP+ ; V -> 'v' ; NP -> 'n' | 'd' 'n' ;",
        "S -> A* 'b' A+ ; A -> 'a' ;",
    };
    for (const char* text : grammars) {
      Grammar g = parse_grammar_file(text);
      Grammar e = expand_kleene(g);
      CHECK_FALSE(e.has_kleene());
      // Reference: generate directly from the marked grammar.
      std::map<std::string, std::set<oracle::Sentence>> L;
      const int max_len = 6;
      for (bool changed = true; changed;) {
        changed = false;
        for (const auto& r : g.rules) {
          std::set<oracle::Sentence> acc{{}};
          for (const auto& d : r.daughters) {
            std::set<oracle::Sentence> unit = d.terminal ? std::set<oracle::Sentence>{{d.category.name}}
                                                         : L[d.category.name];
            std::set<oracle::Sentence> reps = d.repeat == Repeat::one ? unit : std::set<oracle::Sentence>{};
            if (d.repeat != Repeat::one) {
              std::set<oracle::Sentence> layer{{}};
              if (d.repeat == Repeat::star) reps.insert(oracle::Sentence{});
              for (int k = 0; k < max_len; ++k) {
                std::set<oracle::Sentence> next;
                for (const auto& a : layer)
                  for (const auto& b : unit)
                    if (a.size() + b.size() <= max_len) {
                      auto s = a;
                      s.insert(s.end(), b.begin(), b.end());
                      next.insert(s);
                    }
                reps.insert(next.begin(), next.end());
                layer = next;
              }
            }
            std::set<oracle::Sentence> next;
            for (const auto& a : acc)
              for (const auto& b : reps)
                if (a.size() + b.size() <= max_len) {
                  auto s = a;
                  s.insert(s.end(), b.begin(), b.end());
                  next.insert(s);
                }
            acc = next;
          }
          for (const auto& s : acc) changed |= L[r.mother.name].insert(s).second;
        }
      }
      std::set<oracle::Sentence> want;
      for (const auto& s : L[g.start])
        if (!s.empty()) want.insert(s);
      CHECK(oracle::language(e, max_len) == want);
    }
  }

  TEST_CASE("plus expansion has no empty auxiliary rule, star has one") {
    auto plus = expand_kleene(parse_grammar_file("VP -> V NP+ ; V -> 'v' ; NP -> 'n' ;"));
    auto star = expand_kleene(parse_grammar_file("VP -> V NP* ; V -> 'v' ; NP -> 'n' ;"));
    auto empties = [](const Grammar& g) {
      int n = 0;
      for (const auto& r : g.rules) n += r.auxiliary && r.daughters.empty();
      return n;
    };
    CHECK(empties(plus) == 0);
    CHECK(empties(star) == 1);
    auto same = parse_grammar_file("NP -> Det N ; Det -> 'd' ; N -> 'n' ;");
    CHECK(expand_kleene(same).rules.size() == same.rules.size());
  }

  TEST_CASE("kleene threads shared variables") {
    auto g = expand_kleene(parse_grammar_file(
        "S -> N[num=?X] A[num=?X]* ; N[num=sg] -> 'n1' ; N[num=pl] -> 'n2' ; A[num=sg] -> 'a1' ; A[num=pl] -> 'a2' ;"));
    CHECK(oracle::chart_count(g, oracle::single({"n1", "a1", "a1"})) == 1);
    CHECK(oracle::chart_count(g, oracle::single({"n1", "a1", "a2"})) == 0);
  }

  TEST_CASE("backbone projection and residues") {
    auto one = compile_backbone(parse_grammar_file("S -> 'a' ;"));
    CHECK(one.productions.size() == 1);
    CHECK(one.residues[0].trivial());
    CHECK(one.name(0) == "$");

    auto g = parse_grammar_file("S -> NP[num=?N] VP[num=?N] ; NP[num=sg] -> 'n' ; VP[num=sg] -> 'v' ;");
    auto bb = compile_backbone(g);
    const auto& p = bb.productions[0];
    CHECK(bb.name(p.lhs) == "S");
    REQUIRE(p.rhs.size() == 2);
    CHECK(bb.name(p.rhs[0]) == "NP");
    CHECK(bb.residues[0].daughters[0].at("num") == bb.residues[0].daughters[1].at("num"));
    CHECK(bb.hash() == compile_backbone(g).hash());
    CHECK_THROWS_AS(compile_backbone(parse_grammar_file("S -> A ; A -> S | 'a' ;")), GrammarError);
  }

  TEST_CASE("backbone language contains the feature-checked language") {
    auto g = testing_support::fixture("tags.g");
    auto cf = oracle::language(g.expanded, 6);
    std::vector<std::string> sigma{"AT", "NN1", "NN2", "JJ", "VVZ", "VV0", "II"};
    for (const auto& s : oracle::all_strings(sigma, 5))
      if (oracle::chart_count(g.expanded, oracle::single(s)) > 0) CHECK(cf.count(s) == 1);
    int pruned = 0;
    for (const auto& s : cf) pruned += oracle::chart_count(g.expanded, oracle::single(s)) == 0;
    CHECK(pruned > 0);  // agreement removes strings, never adds them
  }
}
