#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace plr {

/// A feature value: either an atomic constant (`sg`) or a variable (`?N`)
/// whose scope is a single rule instantiation.
class FeatureValue {
 public:
  FeatureValue() = default;

  static FeatureValue atom(std::string text) { return FeatureValue(std::move(text), false); }
  static FeatureValue variable(std::string name) { return FeatureValue(std::move(name), true); }

  /// Parses `?X` as a variable and anything else as an atom.
  static FeatureValue parse(std::string_view text);

  bool is_variable() const { return variable_; }
  /// Atom text, or the variable name without the leading `?`.
  const std::string& text() const { return text_; }
  std::string str() const { return variable_ ? "?" + text_ : text_; }

  friend auto operator<=>(const FeatureValue&, const FeatureValue&) = default;

 private:
  FeatureValue(std::string text, bool variable) : text_(std::move(text)), variable_(variable) {}

  std::string text_;
  bool variable_ = false;
};

/// Flat feature structure: feature name -> value. Names are unique by
/// construction; a missing feature is unconstrained.
using FeatureMap = std::map<std::string, FeatureValue>;

/// Variable bindings shared across one rule instantiation.
///
/// Variables form equivalence classes; each class is either free or bound to
/// one atom. Unifying two atoms that differ, or binding a class to a second
/// atom, fails.
class Unifier {
 public:
  /// Unifies two values under the current bindings. On failure the bindings
  /// may be partially updated; discard the Unifier.
  bool unify(const FeatureValue& a, const FeatureValue& b);

  /// Unifies feature by feature over the names both maps define.
  bool unify(const FeatureMap& a, const FeatureMap& b);

  /// The value a term currently stands for: an atom, or the representative
  /// variable of its class.
  FeatureValue resolve(const FeatureValue& v) const;
  FeatureMap resolve(const FeatureMap& m) const;

 private:
  std::string find(const std::string& var) const;

  std::map<std::string, std::string> parent_;  // variable -> variable
  std::map<std::string, std::string> value_;   // representative -> atom
};

/// Most general merge of two feature maps. Variables with the same name in
/// `a` and `b` denote the same variable. Returns nullopt on a constant clash
/// or inconsistent binding; never throws.
std::optional<FeatureMap> unify(const FeatureMap& a, const FeatureMap& b);

/// Renames variables to `?_0`, `?_1`, ... in order of first occurrence
/// (features visited by name), so alpha-equivalent maps compare equal.
FeatureMap canonicalize(const FeatureMap& m);

/// Prefixes every variable name so that maps from different rule
/// instantiations cannot capture each other's variables.
FeatureMap rename_apart(const FeatureMap& m, std::string_view prefix);

/// `name=value,name=value` in feature-name order. Empty map gives "".
std::string to_string(const FeatureMap& m);

}  // namespace plr
