#include "plr/geig.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace plr {

BracketSet extract_brackets(const Tree& tree) {
  BracketSet b;
  auto walk = [&](auto&& self, const Tree& t, int start) -> int {
    if (t.leaf()) return start + 1;
    int end = start;
    for (const auto& c : t.children) end = self(self, c, end);
    if (end - start >= 2) b.spans.push_back({start, end});
    return end;
  };
  b.length = walk(walk, tree, 0);
  std::sort(b.spans.begin(), b.spans.end());
  return b;
}

int crossing_count(const BracketSet& candidate, const BracketSet& gold) {
  if (candidate.length != gold.length)
    throw std::invalid_argument("crossing_count: sentence lengths differ (" + std::to_string(candidate.length) +
                                " vs " + std::to_string(gold.length) + ")");
  int n = 0;
  for (const Span& c : candidate.spans)
    if (std::any_of(gold.spans.begin(), gold.spans.end(), [&](const Span& g) { return c.crosses(g); })) ++n;
  return n;
}

int matched_brackets(const BracketSet& candidate, const BracketSet& gold) {
  std::vector<Span> a = candidate.spans, b = gold.spans, common;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return static_cast<int>(common.size());
}

GeigReport geig_report(const std::vector<std::pair<BracketSet, BracketSet>>& candidate_gold) {
  if (candidate_gold.empty()) throw std::invalid_argument("geig_report: no sentences");
  GeigReport r;
  int zero = 0, crossings = 0;
  for (const auto& [cand, gold] : candidate_gold) {
    GeigRow row;
    row.length = gold.length;
    row.gold = static_cast<int>(gold.spans.size());
    row.candidate = static_cast<int>(cand.spans.size());
    row.matched = matched_brackets(cand, gold);
    row.crossings = crossing_count(cand, gold);
    r.gold_total += row.gold;
    r.candidate_total += row.candidate;
    r.matched_total += row.matched;
    crossings += row.crossings;
    zero += row.crossings == 0 ? 1 : 0;
    r.rows.push_back(row);
  }
  const double n = static_cast<double>(candidate_gold.size());
  r.recall = r.gold_total ? static_cast<double>(r.matched_total) / r.gold_total : 0.0;
  r.precision = r.candidate_total ? static_cast<double>(r.matched_total) / r.candidate_total : 0.0;
  r.mean_crossings = crossings / n;
  r.zero_crossings = zero / n;
  return r;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string format_geig(const GeigReport& r, bool tsv) {
  std::ostringstream out;
  if (tsv) {
    out << "sentences\tzero_crossings\tmean_crossings\trecall\tprecision\tmatched\tgold\tcandidate\n";
    out << r.rows.size() << '\t' << fixed(r.zero_crossings, 6) << '\t' << fixed(r.mean_crossings, 6) << '\t'
        << fixed(r.recall, 6) << '\t' << fixed(r.precision, 6) << '\t' << r.matched_total << '\t' << r.gold_total
        << '\t' << r.candidate_total << "\n";
    return out.str();
  }
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %10s %10s %10s %10s\n", "", "Zero cross", "Mean cross", "Recall",
                "Precision");
  out << line;
  std::snprintf(line, sizeof line, "%-16s %9.1f%% %10.2f %9.1f%% %9.1f%%\n", "GEIG", 100 * r.zero_crossings,
                r.mean_crossings, 100 * r.recall, 100 * r.precision);
  out << line;
  out << "sentences " << r.rows.size() << ", brackets matched " << r.matched_total << " of " << r.gold_total
      << " gold / " << r.candidate_total << " candidate\n";
  return out.str();
}

namespace {

double log2_count(const BigCount& c) {
  if (c <= 0) throw std::invalid_argument("log_count: non-positive count");
  const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(c));
  if (bits < 1000) return std::log2(c.convert_to<double>());
  boost::multiprecision::cpp_bin_float_50 wide(c);
  return static_cast<double>(boost::multiprecision::log2(wide));
}

}  // namespace

double log_count(const BigCount& c) { return log2_count(c) * std::log(2.0); }

double apb(const std::vector<ApbRecord>& records) {
  if (records.empty()) throw std::invalid_argument("apb: no records");
  double sum = 0;
  for (const auto& r : records) {
    if (r.length < 1 || r.parses < 1) throw std::invalid_argument("apb: need n >= 1 and p >= 1");
    sum += log2_count(r.parses) / r.length;  // base 2 keeps powers of two exact
  }
  return std::exp2(sum / static_cast<double>(records.size()));
}

const char* CoverageStats::bucket_name(int b) {
  static const char* names[kBuckets] = {"Parse fails", "1-9", "10-99", "100-999", "1K-9.9K", "10K-99K", "100K+",
                                        "Time-outs"};
  return names[b];
}

CoverageStats coverage_stats(const std::vector<OutcomeSummary>& outcomes) {
  CoverageStats s;
  double len = 0, len_fail = 0, len_timeout = 0;
  std::vector<ApbRecord> parsed;
  for (const auto& o : outcomes) {
    ++s.sentences;
    len += o.length;
    int b = 0;
    if (o.status == ParseStatus::timeout) {
      b = 7;
      len_timeout += o.length;
    } else if (o.status == ParseStatus::no_analysis || o.parses == 0) {
      b = 0;
      len_fail += o.length;
    } else {
      b = o.parses < 10 ? 1 : o.parses < 100 ? 2 : o.parses < 1000 ? 3 : o.parses < 10000 ? 4 : o.parses < 100000 ? 5 : 6;
      parsed.push_back({o.length, o.parses});
    }
    ++s.buckets[static_cast<std::size_t>(b)];
  }
  if (s.sentences) s.mean_length = len / s.sentences;
  if (s.buckets[0]) s.mean_length_fails = len_fail / s.buckets[0];
  if (s.buckets[7]) s.mean_length_timeouts = len_timeout / s.buckets[7];
  if (!parsed.empty()) s.apb = apb(parsed);
  return s;
}

std::string format_coverage(const CoverageStats& s, bool tsv) {
  std::ostringstream out;
  if (tsv) {
    out << "bucket\tcount\tpercent\n";
    for (int b = 0; b < CoverageStats::kBuckets; ++b)
      out << CoverageStats::bucket_name(b) << '\t' << s.buckets[static_cast<std::size_t>(b)] << '\t'
          << fixed(s.sentences ? 100.0 * s.buckets[static_cast<std::size_t>(b)] / s.sentences : 0.0, 2) << "\n";
    out << "sentences\t" << s.sentences << "\t\n";
    out << "mean_length\t" << fixed(s.mean_length, 2) << "\t\n";
    out << "mean_length_fails\t" << fixed(s.mean_length_fails, 2) << "\t\n";
    out << "mean_length_timeouts\t" << fixed(s.mean_length_timeouts, 2) << "\t\n";
    out << "apb\t" << fixed(s.apb, 4) << "\t\n";
    return out.str();
  }
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %8s %8s\n", "Parses", "Number", "%");
  out << line;
  for (int b = 0; b < CoverageStats::kBuckets; ++b) {
    int c = s.buckets[static_cast<std::size_t>(b)];
    std::snprintf(line, sizeof line, "%-14s %8d %7.1f%%\n", CoverageStats::bucket_name(b), c,
                  s.sentences ? 100.0 * c / s.sentences : 0.0);
    out << line;
  }
  std::snprintf(line, sizeof line, "%-14s %8d\n", "Sentences", s.sentences);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %8.1f  (fails %.1f, time-outs %.1f)\n", "Mean length", s.mean_length,
                s.mean_length_fails, s.mean_length_timeouts);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %8.3f\n", "APB", s.apb);
  out << line;
  return out.str();
}

}  // namespace plr
