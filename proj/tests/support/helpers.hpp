#pragma once

#include <set>
#include <string>

#include "reqtest/analysis.hpp"
#include "reqtest/builtin_specs.hpp"

namespace testutil {

inline std::set<std::string> set_of(const reqtest::GameGraph& g, const reqtest::StateSet& s) {
  const auto v = g.names_of(s);
  return {v.begin(), v.end()};
}

inline reqtest::StateSet make(const reqtest::GameGraph& g, const std::set<std::string>& names) {
  return g.make_set({names.begin(), names.end()});
}

inline reqtest::SpecAutomaton completed(const std::string& name) {
  return reqtest::complete(reqtest::resolve_spec(name), reqtest::CompletionPolicy::ToError);
}

/// Completed fig1 x fig6 product, the requirement seen through the
/// adversarial implementation.
inline reqtest::SpecAutomaton fig6_product() { return reqtest::product(completed("fig1"), completed("fig6")); }

inline std::set<std::string> objective_names(const reqtest::SpecAutomaton& a) {
  std::set<std::string> out;
  for (reqtest::StateId s : a.objectives.front().states) out.insert(a.states[s].name);
  return out;
}

}  // namespace testutil
