#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reqtest/automaton.hpp"

namespace reqtest {

/// Names of the bundled specs: fig1, fig5, carriage, i1, fig6, passageway,
/// passageway3.
std::vector<std::string> builtin_spec_names();
std::optional<std::string> builtin_spec_text(std::string_view name);

/// Loads `path_or_name` from disk when such a file exists, otherwise from the
/// bundled specs. Throws SpecError when neither applies.
SpecAutomaton resolve_spec(const std::string& path_or_name);

}  // namespace reqtest
