#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reqtest/alphabet.hpp"
#include "reqtest/guard.hpp"

namespace reqtest {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = 0xffffffffu;

enum class StateKind { Input, Output };

struct State {
  std::string name;
  StateKind kind = StateKind::Input;
  bool error = false;

  friend bool operator==(const State&, const State&) = default;
};

struct Transition {
  StateId src = 0;
  StateId dst = 0;
  Guard guard;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Named set of input-states to be covered.
struct Objective {
  std::string name;
  std::vector<StateId> states;

  friend bool operator==(const Objective&, const Objective&) = default;
};

using Trace = std::vector<Valuation>;

/// Two-phase guarded automaton: input-states read an input valuation and move
/// to an output-state, which reads an output valuation and moves back to an
/// input-state. Error states are input-states.
///
/// `assumption` restricts the input valuations the environment may ever
/// provide (an input-only guard, `true` by default). Valuations outside it
/// are never chosen by testers and are ignored by completeness/determinism
/// checks and the game operators.
struct SpecAutomaton {
  Alphabet alphabet;
  Guard assumption;
  std::vector<State> states;
  StateId initial = 0;
  std::vector<Transition> transitions;
  std::vector<Objective> objectives;

  std::optional<StateId> find_state(std::string_view name) const;
  const Objective& objective(std::string_view name) const;  // throws SpecError
  bool is_input(StateId s) const { return states[s].kind == StateKind::Input; }

  /// Input valuations satisfying the assumption, ascending.
  std::vector<Bits> valid_inputs() const;
  bool input_valid(Bits v) const { return assumption.eval({v, 0}); }

  /// Transition indices grouped by source state.
  std::vector<std::vector<std::size_t>> outgoing() const;

  friend bool operator==(const SpecAutomaton&, const SpecAutomaton&) = default;
};

/// Structural well-formedness: phase alternation, input-state initial and
/// error states, phase-correct guards, objectives over input-states. Throws
/// SpecError describing the first violation.
void check_well_formed(const SpecAutomaton& a);

/// Input-states reachable from `s` in one two-phase step on `v`. Empty when
/// no transition is enabled.
std::vector<StateId> post(const SpecAutomaton& a, StateId s, Valuation v);

/// Input-states `p` with `s` in post(a, p, v).
std::vector<StateId> pre(const SpecAutomaton& a, StateId s, Valuation v);

struct Counterexample {
  enum class Kind { Incomplete, Nondeterministic, ErrorEscapes };
  Kind kind;
  std::string state;
  std::string valuation;  // bit string of the offending phase valuation
  std::string detail;
};

struct ValidationReport {
  bool complete = true;
  bool deterministic = true;
  bool errors_absorbing = true;
  std::vector<Counterexample> counterexamples;

  bool ok() const { return complete && deterministic && errors_absorbing; }
};

/// Checks completeness and determinism on the reachable part by enumerating
/// every valuation of the relevant phase, and that no input-state outside the
/// error set is reachable from an error state.
ValidationReport validate(const SpecAutomaton& a);

enum class CompletionPolicy {
  ToError,   ///< missing input valuations lead to an error state
  SelfLoop,  ///< missing input valuations loop back to the same state
};

/// Routes every missing valuation so the result is complete. Missing outputs
/// always lead to an error state; missing inputs follow `policy`. An error
/// state `err` is created when needed. Throws SpecError on nondeterministic
/// input.
SpecAutomaton complete(const SpecAutomaton& a, CompletionPolicy policy);

/// Synchronous product over the union alphabet, restricted to the part
/// reachable from the pair of initial states. Guards are conjoined; error
/// pairs are those with an error component. Objectives of both operands are
/// lifted (operand-2 names that clash with operand-1 names are dropped).
SpecAutomaton product(const SpecAutomaton& a1, const SpecAutomaton& a2);

struct RunResult {
  StateId end = 0;
  bool fails = false;
  std::vector<StateId> input_states;  // run projected on input-states, length |trace|+1
};

/// Unique run of a deterministic complete automaton. Throws RunError when no
/// transition is enabled at some step.
RunResult run_trace(const SpecAutomaton& a, std::span<const Valuation> trace);

}  // namespace reqtest
