#include <set>

#include "plr/backbone.hpp"

namespace plr {

std::string kleene_aux_name(const std::string& daughter, Repeat repeat, const std::string& rule_id,
                            std::size_t index) {
  return daughter + (repeat == Repeat::star ? "*" : "+") + "@" + rule_id + "." + std::to_string(index);
}

namespace {

void collect_variables(const FeatureMap& m, std::multiset<std::string>& out) {
  for (const auto& [name, value] : m)
    if (value.is_variable()) out.insert(value.text());
}

}  // namespace

Grammar expand_kleene(const Grammar& grammar) {
  if (!grammar.has_kleene()) return grammar;

  Grammar out;
  out.terminals = grammar.terminals;
  out.start = grammar.start;
  for (const auto& rule : grammar.rules) {
    Rule rewritten = rule;
    std::vector<Rule> extra;
    for (std::size_t i = 0; i < rule.daughters.size(); ++i) {
      const Daughter& d = rule.daughters[i];
      if (d.repeat == Repeat::one) continue;

      // Variables of the repeated daughter that are visible elsewhere in the rule.
      std::multiset<std::string> elsewhere;
      collect_variables(rule.mother.features, elsewhere);
      for (std::size_t j = 0; j < rule.daughters.size(); ++j)
        if (j != i) collect_variables(rule.daughters[j].category.features, elsewhere);
      FeatureMap threaded;
      for (const auto& [name, value] : d.category.features)
        if (value.is_variable() && elsewhere.count(value.text()))
          threaded.emplace("_" + value.text(), value);

      Category aux{kleene_aux_name(d.category.name, d.repeat, rule.id, i), threaded};
      Daughter item = d;
      item.repeat = Repeat::one;
      Daughter recur{aux, Repeat::one, false};

      Rule base;
      base.id = rule.id + "." + std::to_string(i) + "#0";
      base.mother = aux;
      base.source = rule.source;
      base.auxiliary = true;
      base.location = rule.location;
      if (d.repeat == Repeat::plus) base.daughters.push_back(item);
      Rule step = base;
      step.id = rule.id + "." + std::to_string(i) + "#1";
      step.daughters = {recur, item};
      extra.push_back(std::move(base));
      extra.push_back(std::move(step));

      rewritten.daughters[i] = Daughter{aux, Repeat::one, false};
    }
    out.rules.push_back(std::move(rewritten));
    for (auto& r : extra) out.rules.push_back(std::move(r));
  }
  out.validate();
  return out;
}

}  // namespace plr
