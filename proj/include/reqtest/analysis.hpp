#pragma once

#include <span>
#include <string>
#include <vector>

#include "reqtest/automaton.hpp"
#include "reqtest/state_set.hpp"

namespace reqtest {

/// Explicit input-state graph of a deterministic automaton: for every
/// input-state, valid input valuation and output valuation, the successor
/// input-state (kNoState where the automaton is incomplete). Built once by
/// enumeration; every fixpoint, game operator and tester reads this table.
class GameGraph {
 public:
  /// Throws SpecError if the automaton is nondeterministic.
  explicit GameGraph(const SpecAutomaton& a);

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return names_.size(); }
  StateId initial() const { return initial_; }
  const std::string& name(StateId s) const { return names_[s]; }
  bool is_error(StateId s) const { return error_[s]; }
  StateSet error_states() const;
  StateSet all_states() const { return StateSet(size(), std::vector<StateId>(all_ids())); }

  /// Valid input valuations, ascending; the canonical input order.
  const std::vector<Bits>& inputs() const { return inputs_; }
  Bits output_space() const { return output_space_; }

  /// Successor for the i-th valid input (position in inputs()) and output w.
  StateId succ(StateId s, std::size_t input_pos, Bits output) const {
    return table_[(static_cast<std::size_t>(s) * inputs_.size() + input_pos) * output_space_ + output];
  }
  /// Successor for a raw valuation; kNoState for inputs outside the assumption.
  StateId step(StateId s, Valuation v) const;
  std::size_t input_position(Bits input) const;  // npos if invalid

  /// Distinct input-state predecessors / successors (any valuation).
  const std::vector<StateId>& predecessors(StateId s) const { return preds_[s]; }
  const std::vector<StateId>& successors(StateId s) const { return succs_[s]; }

  std::optional<StateId> find(std::string_view name) const;
  /// Compact index of a SpecAutomaton input-state id.
  StateId from_spec(StateId spec_id) const;
  /// Objective of the source automaton as a StateSet (throws SpecError).
  StateSet objective(std::string_view name) const;
  StateSet make_set(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const StateSet& set) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<StateId> all_ids() const;

  Alphabet alphabet_;
  std::vector<std::string> names_;
  std::vector<bool> error_;
  std::vector<StateId> spec_to_compact_;
  StateId initial_ = 0;
  std::vector<Bits> inputs_;
  std::vector<std::size_t> input_pos_;  // raw input -> position or npos
  Bits output_space_ = 1;
  std::vector<StateId> table_;
  std::vector<std::vector<StateId>> preds_;
  std::vector<std::vector<StateId>> succs_;
  std::vector<Objective> objectives_;
};

/// Immediate predecessors: states with some valuation leading into B.
StateSet pre(const GameGraph& g, const StateSet& b);
/// Immediate successors of B.
StateSet post(const GameGraph& g, const StateSet& b);

/// Least fixpoint of X -> B ∪ Pre(X): states with a finite trace into B.
StateSet pre_star(const GameGraph& g, const StateSet& b);
/// Least fixpoint of X -> B ∪ Post(X).
StateSet post_star(const GameGraph& g, const StateSet& b);

/// For each state, the valid inputs for which some output keeps the run in
/// coreach(O) (ascending, in canonical input order).
struct CoreachInput {
  StateSet coreach;
  std::vector<std::vector<Bits>> allowed;

  bool contains(StateId s, Bits input) const;
};

CoreachInput coreach_inp(const GameGraph& g, const StateSet& objective);

/// Distance partition C_0 = O, C_i = Pre(C_{i-1}) minus earlier layers, and
/// the non-coreachable sink C_{m+1}.
struct RewardLayers {
  std::vector<StateSet> layers;  // C_0..C_m
  StateSet sink;                 // C_{m+1}
  std::vector<int> index;        // state -> layer number (m+1 for the sink)
  bool empty_objective = false;

  int m() const { return static_cast<int>(layers.size()) - 1; }
  int sink_index() const { return m() + 1; }
};

RewardLayers reward_layers(const GameGraph& g, const StateSet& objective);

/// Layer index of the state a trace ends in; 0 iff the state is in O.
int last_reward(const RewardLayers& layers, StateId end_state);

/// r_{K-1} * sum_i gamma^i r_i over an already padded reward sequence.
/// Throws std::invalid_argument on an empty sequence or gamma outside (0,1).
double discounted_reward(std::span<const int> rewards, double gamma);

}  // namespace reqtest
