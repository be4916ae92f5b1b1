#pragma once

#include <array>
#include <string>
#include <vector>

#include "plr/glr.hpp"
#include "plr/lattice.hpp"
#include "plr/tree.hpp"

namespace plr {

/// Unlabelled brackets of one sentence (a multiset, kept sorted).
struct BracketSet {
  int length = 0;
  std::vector<Span> spans;
};

/// One span per constituent covering two or more tokens, the whole
/// sentence included.
BracketSet extract_brackets(const Tree& tree);

/// Candidate spans crossing at least one gold span. Throws
/// std::invalid_argument if the sentence lengths differ.
int crossing_count(const BracketSet& candidate, const BracketSet& gold);

/// Size of the multiset intersection.
int matched_brackets(const BracketSet& candidate, const BracketSet& gold);

struct GeigRow {
  int length = 0;
  int gold = 0;
  int candidate = 0;
  int matched = 0;
  int crossings = 0;
};

struct GeigReport {
  std::vector<GeigRow> rows;
  int gold_total = 0;
  int candidate_total = 0;
  int matched_total = 0;
  double recall = 0;         // matched / gold, corpus level
  double precision = 0;      // matched / candidate, corpus level
  double mean_crossings = 0; // per sentence
  double zero_crossings = 0; // fraction of sentences with none
};

/// Throws std::invalid_argument on an empty list.
GeigReport geig_report(const std::vector<std::pair<BracketSet, BracketSet>>& candidate_gold);

/// Aligned table (or tab-separated lines with `tsv`).
std::string format_geig(const GeigReport& r, bool tsv);

struct ApbRecord {
  int length = 0;
  BigCount parses = 1;
};

/// exp(mean(ln p / n)). Throws std::invalid_argument on an empty list or
/// a record with n < 1 or p < 1.
double apb(const std::vector<ApbRecord>& records);

/// Natural log of a big count without overflowing a double.
double log_count(const BigCount& c);

struct CoverageStats {
  static constexpr int kBuckets = 8;
  static const char* bucket_name(int b);

  /// fails, 1-9, 10-99, 100-999, 1K-9.9K, 10K-99K, 100K+, time-outs
  std::array<int, kBuckets> buckets{};
  int sentences = 0;
  double mean_length = 0;
  double mean_length_fails = 0;
  double mean_length_timeouts = 0;
  double apb = 0;  // over parsed sentences; 0 when there are none
};

struct OutcomeSummary {
  int length = 0;
  ParseStatus status = ParseStatus::no_analysis;
  BigCount parses = 0;
};

CoverageStats coverage_stats(const std::vector<OutcomeSummary>& outcomes);

std::string format_coverage(const CoverageStats& s, bool tsv);

}  // namespace plr
