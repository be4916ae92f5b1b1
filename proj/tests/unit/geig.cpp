#include <doctest.h>

#include "plr/geig.hpp"
#include "plr/tree.hpp"

using namespace plr;

namespace {

BracketSet bs(int n, std::vector<Span> s) { return {n, std::move(s)}; }

}  // namespace

TEST_SUITE("geig") {
  TEST_CASE("bracket extraction") {
    CHECK(extract_brackets(read_tree("(S a_X b_X c_X)")).spans == std::vector<Span>{{0, 3}});
    CHECK(extract_brackets(read_tree("(S (A a_X b_X) c_X)")).spans == std::vector<Span>{{0, 2}, {0, 3}});
    auto unary = extract_brackets(read_tree("(X (Y a_Z))"));
    CHECK(unary.spans.empty());
    CHECK(unary.length == 1);
  }

  TEST_CASE("crossing examples") {
    CHECK(crossing_count(bs(5, {{1, 4}}), bs(5, {{0, 3}})) == 1);
    CHECK(crossing_count(bs(5, {{0, 3}}), bs(5, {{0, 3}, {3, 5}})) == 0);
    CHECK(crossing_count(bs(5, {}), bs(5, {{0, 3}})) == 0);
    CHECK_THROWS(crossing_count(bs(4, {}), bs(5, {})));
  }

  TEST_CASE("report examples") {
    auto gold = bs(4, {{0, 2}, {2, 4}, {0, 4}});
    auto cand = bs(4, {{0, 2}, {0, 4}, {1, 4}});
    auto r = geig_report({{cand, gold}});
    CHECK(r.recall == 2.0 / 3.0);
    CHECK(r.precision == 2.0 / 3.0);
    CHECK(r.mean_crossings == 1.0);
    CHECK(r.zero_crossings == 0.0);

    auto perfect = geig_report({{gold, gold}, {bs(4, {{0, 3}, {0, 4}}), bs(4, {{0, 3}, {0, 4}})}});
    CHECK(perfect.recall == 1.0);
    CHECK(perfect.precision == 1.0);
    CHECK(perfect.mean_crossings == 0.0);
    CHECK(perfect.zero_crossings == 1.0);

    auto two = geig_report({{gold, gold}, {cand, gold}});
    CHECK(two.zero_crossings == 0.5);
    CHECK(two.mean_crossings == 0.5);
    CHECK_THROWS(geig_report({}));
  }

  TEST_CASE("swapping exchanges recall and precision") {
    auto gold = bs(6, {{0, 2}, {0, 6}, {2, 6}, {3, 6}});
    auto cand = bs(6, {{0, 2}, {0, 6}, {1, 3}});
    auto a = geig_report({{cand, gold}});
    auto b = geig_report({{gold, cand}});
    CHECK(a.recall == b.precision);
    CHECK(a.precision == b.recall);
  }

  TEST_CASE("duplicate spans count as a multiset") {
    auto gold = bs(3, {{0, 3}, {0, 3}});
    CHECK(matched_brackets(bs(3, {{0, 3}}), gold) == 1);
    CHECK(matched_brackets(bs(3, {{0, 3}, {0, 3}, {0, 3}}), gold) == 2);
  }

  TEST_CASE("apb") {
    CHECK(apb({{2, 1}, {2, 16}}) == 2.0);
    CHECK(apb({{5, 1}, {7, 1}}) == 1.0);
    CHECK(apb({{1, 3}, {1, 5}}) == doctest::Approx(std::sqrt(15.0)));
    CHECK(apb({{1, 6}, {1, 10}}) == doctest::Approx(2 * std::sqrt(15.0)));
    CHECK(apb({{3, 8}, {2, 16}, {4, 1}}) == doctest::Approx(apb({{4, 1}, {3, 8}, {2, 16}})));
    BigCount huge = BigCount(1) << 4000;
    CHECK(apb({{1000, huge}}) == doctest::Approx(16.0));
    CHECK_THROWS(apb({}));
    CHECK(std::pow(1.313, 20.1) == doctest::Approx(238).epsilon(0.005));
  }

  TEST_CASE("coverage") {
    std::vector<OutcomeSummary> ten(10, {5, ParseStatus::ok, 1});
    auto s = coverage_stats(ten);
    CHECK(s.buckets[1] == 10);
    CHECK(s.buckets[0] == 0);
    CHECK(s.apb == 1.0);

    std::vector<OutcomeSummary> mixed{{3, ParseStatus::no_analysis, 0}, {4, ParseStatus::ok, 12},
                                      {9, ParseStatus::ok, 5000},       {6, ParseStatus::ok, 150000},
                                      {11, ParseStatus::timeout, 0},     {2, ParseStatus::ok, 9}};
    auto m = coverage_stats(mixed);
    CHECK(m.buckets == std::array<int, 8>{1, 1, 1, 0, 1, 0, 1, 1});
    CHECK(m.mean_length_fails == 3.0);
    CHECK(m.mean_length_timeouts == 11.0);
    CHECK(m.mean_length == doctest::Approx(35.0 / 6));
    CHECK(std::string(CoverageStats::bucket_name(7)) == "Time-outs");
    CHECK(format_coverage(m, true).find('\t') != std::string::npos);
  }
}
