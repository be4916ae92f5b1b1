#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "plr/forest.hpp"
#include "plr/lalr.hpp"

namespace plr {

/// Natural-log probability held in fixed point (units of 2^-32). Each
/// transition is rounded once; sums are then exact integers, so a score does
/// not depend on the order in which it was accumulated and ties are real.
class LogProb {
 public:
  static constexpr double scale = 4294967296.0;

  constexpr LogProb() = default;
  static LogProb from_prob(double p);
  static LogProb from_log(double ln);
  static constexpr LogProb from_raw(std::int64_t raw) { return LogProb(raw); }

  double value() const { return static_cast<double>(raw_) / scale; }
  std::int64_t raw() const { return raw_; }

  LogProb& operator+=(LogProb o) {
    raw_ += o.raw_;
    return *this;
  }
  friend LogProb operator+(LogProb a, LogProb b) { return a += b; }
  friend auto operator<=>(const LogProb&, const LogProb&) = default;

 private:
  constexpr explicit LogProb(std::int64_t raw) : raw_(raw) {}
  std::int64_t raw_ = 0;
};

/// Transitions traversed by one complete derivation, in execution order.
struct ParseHistory {
  std::uint64_t table_hash = 0;
  double weight = 1.0;
  std::vector<Transition> transitions;
};

/// (state, lookahead, action) -> traversal count. Counts may be fractional
/// when a training sentence keeps several consistent derivations.
class TransitionCounts {
 public:
  explicit TransitionCounts(std::uint64_t table_hash = 0) : table_hash_(table_hash) {}

  void add(const Transition& t, double count);
  double count(const Transition& t) const;
  const std::map<Transition, double>& entries() const { return counts_; }

  std::uint64_t table_hash() const { return table_hash_; }
  /// Weighted number of training sentences accumulated.
  double histories() const { return histories_; }
  void add_histories(double n) { histories_ += n; }

  /// Sums another partial count; throws on a table-hash mismatch.
  void merge(const TransitionCounts& other);
  /// Every count multiplied by `factor`.
  TransitionCounts scaled(double factor) const;

  std::string serialize() const;
  static TransitionCounts deserialize(std::string_view text);

 private:
  std::uint64_t table_hash_;
  double histories_ = 0.0;
  std::map<Transition, double> counts_;
};

/// Counts every transition of every history, times its weight. Throws
/// std::invalid_argument if a history was recorded against another table.
TransitionCounts train_counts(const std::vector<ParseHistory>& histories, std::uint64_t table_hash);

/// Adds the transitions of all derivations in `forest`, each of the m
/// derivations weighted weight/m (expected counts via inside/outside, no
/// unpacking).
void accumulate_forest(const ParseForest& forest, double weight, TransitionCounts& counts);

/// Good-Turing adjusted counts from globally pooled frequencies of
/// frequencies. r* = (r+1) N_{r+1} / N_r where N_{r+1} > 0; otherwise the
/// Gale-Sampson log-linear fit of Z_r against r (slope capped at -1).
/// Adjusted counts are forced strictly increasing in r.
class GoodTuring {
 public:
  /// `freq_of_freq[r]` = N_r, the number of seen events with count r >= 1.
  explicit GoodTuring(std::map<int, double> freq_of_freq);

  /// Adjusted count for an observed frequency r (one of the pooled r values).
  double rstar(int r) const;
  /// Adjusted count for any c > 0: piecewise linear through (r, r*), scaled
  /// proportionally below the smallest and above the largest observed r.
  double adjusted(double c) const;

  double slope() const { return slope_; }
  double intercept() const { return intercept_; }

 private:
  std::map<int, double> n_;
  std::map<int, double> rstar_;
  double slope_ = -1.0;
  double intercept_ = 0.0;
};

/// Probability of each action in a (state, lookahead) context.
struct ContextModel {
  std::map<Action, double> probs;
  /// Probability used for an action the table does not list here.
  double unseen = 0.0;
};

class ProbModel {
 public:
  using ContextKey = std::pair<int, int>;  // (state, lookahead)

  std::uint64_t table_hash() const { return table_hash_; }
  const std::map<ContextKey, ContextModel>& contexts() const { return contexts_; }

  /// Never zero: unknown actions and contexts fall back to smoothed mass.
  double prob(const Transition& t) const;
  LogProb logprob(const Transition& t) const;

  std::string serialize() const;
  static ProbModel deserialize(std::string_view text);

 private:
  friend ProbModel smooth_good_turing(const TransitionCounts&, const LalrTable&);
  void finalize();

  std::uint64_t table_hash_ = 0;
  std::map<ContextKey, ContextModel> contexts_;
  double floor_ = 1.0;  // smallest probability in the model
  std::map<Transition, LogProb> log_;
  std::map<ContextKey, LogProb> unseen_log_;
};

/// Smooths counts into a per-context distribution over the table's actions.
/// A context with no observations is uniform; otherwise unseen actions
/// share the mass Good-Turing discounts from the seen ones (at least one
/// pseudo-traversal when the discount is not positive).
ProbModel smooth_good_turing(const TransitionCounts& counts, const LalrTable& table);

/// Frequencies of frequencies pooled over all seen transitions; fractional
/// counts contribute at max(1, round(c)).
std::map<int, double> frequency_of_frequencies(const TransitionCounts& counts);

/// Sum of per-transition log probabilities.
LogProb score_derivation(const std::vector<Transition>& transitions, const ProbModel& model);

}  // namespace plr
