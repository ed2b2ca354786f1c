#pragma once

#include <vector>

#include "reqtest/analysis.hpp"

namespace reqtest {

/// Memoryless tester strategy: for each input-state of its domain, the set of
/// valid input valuations it allows (ascending). States where the choice is
/// not dictated by the construction carry every valid input and are listed in
/// `arbitrary`.
struct Strategy {
  StateSet domain;
  StateSet arbitrary;
  std::vector<std::vector<Bits>> choices;

  /// Throws std::out_of_range for states outside the domain.
  const std::vector<Bits>& at(StateId s) const;
  bool allows(StateId s, Bits input) const;
};

/// One-step controllable predecessors: non-error states from which some valid
/// input forces every output into B ∪ err.
StateSet cpre(const GameGraph& g, const StateSet& b);

struct CPreStar {
  StateSet result;
  /// C_0 = ∅, C_i = B ∪ C_{i-1} ∪ CPre(C_{i-1}); the last entry is the fixpoint.
  std::vector<StateSet> iterates;
  /// Least i with s in C_i, or -1 outside the fixpoint.
  std::vector<int> first_index;
};

CPreStar cpre_star(const GameGraph& g, const StateSet& b);

/// Winning strategy over cpre_star(B): at s, the inputs whose every output
/// lands in C_{i_s - 1} ∪ err. States of B get the arbitrary default.
Strategy winning_strategy(const GameGraph& g, const CPreStar& fixpoint);

/// Cooperative strategy over Pre(B) \ B: inputs for which some output enters B.
Strategy cooperative_strategy(const GameGraph& g, const StateSet& b);

struct GreedyArtifacts {
  std::vector<StateSet> w;     // W_0 .. W_n
  std::vector<StateSet> coop;  // coop[i] = Coop_i for i >= 1; coop[0] is empty
  std::vector<int> rank;       // smallest i with s in W_i, -1 outside coreach
  Strategy st_greedy;

  std::size_t levels() const { return w.size(); }
};

/// Greedy hierarchy for objective O: W_0 = CPre*(O); Coop_{i+1} = Pre(W_i) \ W_i
/// with a cooperative choice; W_{i+1} = CPre*(Coop_{i+1} ∪ W_i) with a winning
/// choice elsewhere; stops when Coop is empty. st_greedy(s) = st_rank(s)(s).
GreedyArtifacts greedy_strategy(const GameGraph& g, const StateSet& objective);

}  // namespace reqtest
