#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "reqtest/testers.hpp"

namespace reqtest {

/// MCTS tree over input sequences. Node 0 is the root (post-reset state).
class SearchTree {
 public:
  struct Node {
    StateId state = 0;  // requirement state when the node was first reached
    Verdict verdict = Verdict::Active;
    std::uint32_t depth = 0;
    std::uint32_t parent = 0;
    Bits input = 0;           // edge label from the parent
    std::uint64_t visits = 0;  // n (or n_i seen from the parent)
    double mean = 0;           // r_i: average of propagated rewards
    std::vector<std::pair<Bits, std::uint32_t>> children;  // ascending input
  };

  SearchTree(StateId root_state, Verdict root_verdict);

  const Node& node(std::uint32_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  std::optional<std::uint32_t> child(std::uint32_t id, Bits input) const;
  std::uint32_t add_child(std::uint32_t parent, Bits input, StateId state, Verdict verdict);
  /// Adds `reward` to the running average of every node on `path`.
  void propagate(const std::vector<std::uint32_t>& path, double reward);
  TreeStats stats() const;

 private:
  std::vector<Node> nodes_;
};

/// r_i + c * sqrt(ln n / n_i); -infinity for an unvisited child.
double uct_score(double mean, std::uint64_t n, std::uint64_t n_i, double c);

/// Per-step layer rewards of a trace (the layer reached after each step),
/// right-padded with the last value to length K. An empty trace yields the
/// initial state's layer.
std::vector<int> step_rewards(const SpecContext& ctx, const Trace& trace, int K);

/// Reward fed to UCT, scaled to [0,1]: last layer / (m+1), or the discounted
/// reward over (m+1)^2 (1-gamma^K)/(1-gamma).
double normalized_reward(const SpecContext& ctx, const std::vector<int>& rewards, const TesterConfig& cfg);

/// One MCTS search (basic, or greedy-biased for Algorithm::GreedyMcts).
class MctsSearch {
 public:
  MctsSearch(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed);

  struct Iteration {
    RunOutcome run;
    std::vector<std::uint32_t> path;  // tree nodes from the root
    double reward = 0;
  };
  /// Selection, expansion, roll-out and propagation; one SUT run.
  Iteration iterate();

  /// Inputs the tree policy considers at `node` in requirement state `s`.
  const std::vector<Bits>& candidates(std::uint32_t node, StateId s) const;

  const SearchTree& tree() const { return tree_; }
  bool greedy_tree() const { return greedy_tree_; }
  bool greedy_rollout() const { return greedy_rollout_; }

 private:
  const SpecContext& ctx_;
  SutSession& sut_;
  TesterConfig cfg_;
  Rng rng_;
  SearchTree tree_;
  bool greedy_tree_;
  bool greedy_rollout_;
};

AttemptReport mcts_attempt(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed);

}  // namespace reqtest
