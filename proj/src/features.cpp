#include "plr/features.hpp"

#include <algorithm>

namespace plr {

FeatureValue FeatureValue::parse(std::string_view text) {
  if (!text.empty() && text.front() == '?') return variable(std::string(text.substr(1)));
  return atom(std::string(text));
}

std::string Unifier::find(const std::string& var) const {
  std::string cur = var;
  for (auto it = parent_.find(cur); it != parent_.end(); it = parent_.find(cur)) cur = it->second;
  return cur;
}

FeatureValue Unifier::resolve(const FeatureValue& v) const {
  if (!v.is_variable()) return v;
  std::string rep = find(v.text());
  if (auto it = value_.find(rep); it != value_.end()) return FeatureValue::atom(it->second);
  return FeatureValue::variable(rep);
}

FeatureMap Unifier::resolve(const FeatureMap& m) const {
  FeatureMap out;
  for (const auto& [name, value] : m) out.emplace(name, resolve(value));
  return out;
}

bool Unifier::unify(const FeatureValue& a, const FeatureValue& b) {
  FeatureValue ra = resolve(a);
  FeatureValue rb = resolve(b);
  if (!ra.is_variable() && !rb.is_variable()) return ra.text() == rb.text();
  if (ra.is_variable() && rb.is_variable()) {
    if (ra.text() == rb.text()) return true;
    // Deterministic orientation: the smaller name becomes the representative.
    const auto& [lo, hi] = std::minmax(ra.text(), rb.text());
    parent_[hi] = lo;
    return true;
  }
  const FeatureValue& var = ra.is_variable() ? ra : rb;
  const FeatureValue& atom = ra.is_variable() ? rb : ra;
  value_[var.text()] = atom.text();
  return true;
}

bool Unifier::unify(const FeatureMap& a, const FeatureMap& b) {
  for (const auto& [name, value] : a) {
    auto it = b.find(name);
    if (it != b.end() && !unify(value, it->second)) return false;
  }
  return true;
}

std::optional<FeatureMap> unify(const FeatureMap& a, const FeatureMap& b) {
  Unifier u;
  if (!u.unify(a, b)) return std::nullopt;
  FeatureMap merged = a;
  for (const auto& [name, value] : b) merged.emplace(name, value);
  return u.resolve(merged);
}

FeatureMap canonicalize(const FeatureMap& m) {
  std::map<std::string, std::string> renaming;
  FeatureMap out;
  for (const auto& [name, value] : m) {
    if (!value.is_variable()) {
      out.emplace(name, value);
      continue;
    }
    auto [it, inserted] = renaming.emplace(value.text(), "");
    if (inserted) it->second = "_" + std::to_string(renaming.size() - 1);
    out.emplace(name, FeatureValue::variable(it->second));
  }
  return out;
}

FeatureMap rename_apart(const FeatureMap& m, std::string_view prefix) {
  FeatureMap out;
  for (const auto& [name, value] : m) {
    if (value.is_variable())
      out.emplace(name, FeatureValue::variable(std::string(prefix) + value.text()));
    else
      out.emplace(name, value);
  }
  return out;
}

std::string to_string(const FeatureMap& m) {
  std::string s;
  for (const auto& [name, value] : m) {
    if (!s.empty()) s += ',';
    s += name;
    s += '=';
    s += value.str();
  }
  return s;
}

}  // namespace plr
