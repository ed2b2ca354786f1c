#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "reqtest/automaton.hpp"

namespace reqtest {

/// Parses the textual spec format:
///
///     inputs: a b c
///     outputs: one
///     assume: a & !b | !a & b          # optional, input-only
///     states:
///       s0 in initial
///       s0.a out
///       t in error
///     transitions:
///       s0 -> s0.a [a & !b]
///       s0.a -> t [one]
///     objectives:
///       reach_o = o
///
/// `#` starts a comment. A transition between two input-states is desugared
/// into a fresh output-state whose only outgoing guard is `true`. Syntax
/// errors, dangling state references and guards over the wrong phase raise
/// ParseError with line and column.
SpecAutomaton parse_spec(std::string_view text);

/// JSON mirror of the same schema.
SpecAutomaton parse_spec_json(std::string_view text);

std::string serialize_spec(const SpecAutomaton& a);
std::string serialize_spec_json(const SpecAutomaton& a);

/// Reads a spec file; `.json` selects the JSON mirror.
SpecAutomaton load_spec_file(const std::filesystem::path& path);

}  // namespace reqtest
