#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "reqtest/game.hpp"
#include "reqtest/sut.hpp"

namespace reqtest {

enum class Algorithm { Uniform, Greedy, EpsGreedy, Mcts, GreedyMcts };
enum class RewardMode { Last, Discounted };

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);
std::string to_string(RewardMode m);
std::optional<RewardMode> parse_reward_mode(std::string_view s);

struct TesterConfig {
  Algorithm algorithm = Algorithm::Uniform;
  int K = 250;
  int runs = 3000;
  int attempts = 10;
  double epsilon = 0.25;
  double gamma = 0.99;
  int M = 30;  // greedy-tree visit bound; 0 disables the greedy tree
  double c = -0.025;  // on the [0,1] reward scale
  RewardMode reward = RewardMode::Discounted;
  bool greedy_rollout = true;  // greedy-mcts only
  std::uint64_t seed = 1;
  bool continue_after_error = false;

  /// Throws std::invalid_argument naming the first out-of-range field.
  void check() const;
};

enum class Verdict { Active, Covering, Error, CoveringError, Inconclusive };

std::string to_string(Verdict v);
inline bool covers(Verdict v) { return v == Verdict::Covering || v == Verdict::CoveringError; }
inline bool fails(Verdict v) { return v == Verdict::Error || v == Verdict::CoveringError; }

/// Everything the testers precompute from a completed requirement automaton
/// and an objective. Read-only once built; shared by parallel attempts.
struct SpecContext {
  SpecAutomaton automaton;
  std::string objective_name;
  GameGraph graph;
  StateSet objective;
  CoreachInput coreach;
  RewardLayers layers;
  GreedyArtifacts greedy;

  SpecContext(SpecAutomaton completed, std::string objective_name);

  Verdict classify(StateId s) const;
};

/// Covering and Error first (both may hold), then Inconclusive, else Active.
Verdict classify(StateId end, const StateSet& objective, const StateSet& coreach, const GameGraph& g);

using Rng = std::mt19937_64;

/// Uniform pick from a non-empty pool.
Bits pick(const std::vector<Bits>& pool, Rng& rng);

/// One input choice of the step policies used by the simple testers and by
/// MCTS roll-outs.
Bits choose_uniform(const SpecContext& ctx, StateId s, Rng& rng);
Bits choose_greedy(const SpecContext& ctx, StateId s, Rng& rng);
Bits choose_eps_greedy(const SpecContext& ctx, StateId s, double epsilon, Rng& rng);

struct RunOutcome {
  Verdict verdict = Verdict::Active;
  StateId end = 0;
  Trace trace;
};

/// One run of a simple tester (uniform, greedy, eps-greedy): reset, then
/// step while Active and fewer than K steps.
RunOutcome run_once(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, Rng& rng);

struct TreeStats {
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
};

struct AttemptReport {
  Algorithm algorithm = Algorithm::Uniform;
  std::uint64_t seed = 0;
  bool success = false;
  bool covered = false;
  int runs_used = 0;
  std::optional<Trace> covering_trace;
  std::vector<Trace> error_traces;  // first kMaxErrorTraces only
  std::size_t error_count = 0;
  std::optional<TreeStats> tree;
  std::optional<std::string> transport_error;
  double wall_time_ms = 0;

  static constexpr std::size_t kMaxErrorTraces = 10;
  /// Records a finished run; returns true when the attempt should stop.
  bool record(const RunOutcome& run, const TesterConfig& cfg);
};

/// One attempt of cfg.algorithm with the given seed. Transport errors
/// propagate to the caller.
AttemptReport run_attempt(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed);

/// Trace as a list of per-step bit strings, inputs then outputs.
std::vector<std::string> trace_to_strings(const Alphabet& ab, const Trace& t);
Trace trace_from_strings(const Alphabet& ab, const std::vector<std::string>& steps);

}  // namespace reqtest
