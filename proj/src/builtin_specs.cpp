#include "reqtest/builtin_specs.hpp"

#include <filesystem>

#include "reqtest/errors.hpp"
#include "reqtest/passageway.hpp"
#include "reqtest/spec_io.hpp"

namespace reqtest {

namespace {

// Input letters a, b, c are one-hot propositions; the output letter 1 is
// `one`, the letter 0 is `!one`. o and t have no outgoing transitions, as
// drawn.
constexpr const char* kFig1 = R"(# Requirement automaton with input letters a,b,c and output letters 0,1.
inputs: a b c
outputs: one
assume: a & !b & !c | !a & b & !c | !a & !b & c
states:
  s0 in initial
  s1 in
  o in
  t in error
  s0.a out
  s0.bc out
  s1.a out
  s1.b out
  s1.c out
transitions:
  s0 -> s0.a [a]
  s0 -> s0.bc [b | c]
  s0.a -> s1 [!one]
  s0.a -> t [one]
  s0.bc -> s0 [true]
  s1 -> s1.a [a]
  s1 -> s1.b [b]
  s1 -> s1.c [c]
  s1.a -> s1 [true]
  s1.b -> s0 [!one]
  s1.b -> o [one]
  s1.c -> s0 [!one]
  s1.c -> o [one]
objectives:
  o = o
)";

// Implementation I1: a -> 0, b -> 1, c -> 0 from its single input-state.
constexpr const char* kI1 = R"(# Implementation with a single input-state.
inputs: a b c
outputs: one
assume: a & !b & !c | !a & b & !c | !a & !b & c
states:
  q0 in initial
  q0.a out
  q0.b out
  q0.c out
transitions:
  q0 -> q0.a [a]
  q0 -> q0.b [b]
  q0 -> q0.c [c]
  q0.a -> q0 [!one]
  q0.b -> q0 [one]
  q0.c -> q0 [!one]
)";

// Implementation whose only trace covering `o` of fig1 is (b,0)(a,0)(b,1).
// Every other input leads to `d`, which answers 1 forever.
constexpr const char* kFig6 = R"(# Implementation that defeats the pure greedy tester on fig1.
inputs: a b c
outputs: one
assume: a & !b & !c | !a & b & !c | !a & !b & c
states:
  p0 in initial
  p1 in
  p2 in
  p3 in
  d in
  p0.b out
  p1.a out
  p2.b out
  to.d out
transitions:
  p0 -> p0.b [b]
  p0 -> to.d [a | c]
  p0.b -> p1 [!one]
  p1 -> p1.a [a]
  p1 -> to.d [b | c]
  p1.a -> p2 [!one]
  p2 -> p2.b [b]
  p2 -> to.d [a | c]
  p2.b -> p3 [one]
  p3 -> to.d [true]
  d -> to.d [true]
  to.d -> d [one]
)";

// Schematic of the W_i hierarchy: s0 and s0p are one step controllable into
// o; sc0 needs cooperation to reach W_0; sc1 needs cooperation to reach sc0.
constexpr const char* kFig5 = R"(# Controllable and cooperative predecessors.
inputs: x
outputs: y
states:
  sc1 in initial
  sc0 in
  s0 in
  s0p in
  o in
  dead in
  err in error
  s0.x out
  s0.n out
  s0p.x out
  s0p.n out
  sc0.x out
  sc0.n out
  sc1.x out
  sc1.n out
transitions:
  s0 -> s0.x [x]
  s0 -> s0.n [!x]
  s0.x -> o [true]
  s0.n -> sc0 [y]
  s0.n -> sc1 [!y]
  s0p -> s0p.x [x]
  s0p -> s0p.n [!x]
  s0p.x -> o [true]
  s0p.n -> dead [true]
  sc0 -> sc0.x [x]
  sc0 -> sc0.n [!x]
  sc0.x -> s0 [y]
  sc0.x -> sc0 [!y]
  sc0.n -> s0p [y]
  sc0.n -> dead [!y]
  sc1 -> sc1.x [x]
  sc1 -> sc1.n [!x]
  sc1.x -> sc0 [y]
  sc1.x -> dead [!y]
  sc1.n -> dead [true]
  o -> dead [true]
  dead -> dead [true]
  err -> err [true]
objectives:
  o = o
)";

// Carriage requirements R1-R3 as drawn: the transitions to err on
// movefwd & movebwd, and on the negated guards of the s1 output-states, are
// left out and restored by completion.
constexpr const char* kCarriage = R"(# Carriage controller requirements R1-R3 (first phase).
inputs: cargo bwdlimit fwdlimit
outputs: movefwd movebwd
states:
  s0 in initial
  s1 in
  s2 in
  err in error
  s0.go out
  s0.wait out
  s0.off out
  s1.run out
  s1.stop out
transitions:
  s0 -> s0.go [cargo & bwdlimit]
  s0 -> s0.wait [!cargo & bwdlimit]
  s0 -> s0.off [!bwdlimit]
  s0.go -> s1 [movefwd & !movebwd]
  s0.go -> err [!movefwd]
  s0.wait -> s0 [!movefwd & !movebwd]
  s0.wait -> err [movefwd | movebwd]
  s0.off -> err [true]
  s1 -> s1.run [!fwdlimit]
  s1 -> s1.stop [fwdlimit]
  s1.run -> s1 [movefwd & !movebwd]
  s1.stop -> s2 [!movefwd & !movebwd]
  s2 -> s2 [true]
  err -> err [true]
objectives:
  s2 = s2
)";

}  // namespace

std::vector<std::string> builtin_spec_names() {
  return {"fig1", "fig5", "carriage", "i1", "fig6", "passageway", "passageway3"};
}

std::optional<std::string> builtin_spec_text(std::string_view name) {
  if (name == "fig1") return kFig1;
  if (name == "fig5") return kFig5;
  if (name == "carriage") return kCarriage;
  if (name == "i1") return kI1;
  if (name == "fig6") return kFig6;
  if (name == "passageway") return passageway_spec_text(10);
  if (name == "passageway3") return passageway_spec_text(3);
  return std::nullopt;
}

SpecAutomaton resolve_spec(const std::string& path_or_name) {
  if (std::filesystem::is_regular_file(path_or_name)) return load_spec_file(path_or_name);
  if (const auto text = builtin_spec_text(path_or_name)) return parse_spec(*text);
  throw SpecError("no spec file or bundled spec named '" + path_or_name + "'");
}

}  // namespace reqtest
