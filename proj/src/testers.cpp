#include "reqtest/testers.hpp"

#include <chrono>
#include <stdexcept>

#include "reqtest/errors.hpp"
#include "reqtest/mcts.hpp"

namespace reqtest {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Uniform: return "uniform";
    case Algorithm::Greedy: return "greedy";
    case Algorithm::EpsGreedy: return "eps-greedy";
    case Algorithm::Mcts: return "mcts";
    case Algorithm::GreedyMcts: return "greedy-mcts";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (Algorithm a : {Algorithm::Uniform, Algorithm::Greedy, Algorithm::EpsGreedy, Algorithm::Mcts, Algorithm::GreedyMcts})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

std::string to_string(RewardMode m) { return m == RewardMode::Last ? "last" : "discounted"; }

std::optional<RewardMode> parse_reward_mode(std::string_view s) {
  if (s == "last") return RewardMode::Last;
  if (s == "discounted") return RewardMode::Discounted;
  return std::nullopt;
}

void TesterConfig::check() const {
  if (K < 1) throw std::invalid_argument("K must be at least 1");
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (attempts < 1) throw std::invalid_argument("attempts must be at least 1");
  if (!(epsilon > 0 && epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0,1)");
  if (!(gamma > 0 && gamma < 1)) throw std::invalid_argument("gamma must lie in (0,1)");
  if (M < 0) throw std::invalid_argument("M must be non-negative");
  if (!(c < 0)) throw std::invalid_argument("c must be negative");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Active: return "active";
    case Verdict::Covering: return "covering";
    case Verdict::Error: return "error";
    case Verdict::CoveringError: return "covering+error";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict classify(StateId end, const StateSet& objective, const StateSet& coreach, const GameGraph& g) {
  const bool in_o = objective.contains(end);
  const bool in_err = g.is_error(end);
  if (in_o && in_err) return Verdict::CoveringError;
  if (in_o) return Verdict::Covering;
  if (in_err) return Verdict::Error;
  if (!coreach.contains(end)) return Verdict::Inconclusive;
  return Verdict::Active;
}

SpecContext::SpecContext(SpecAutomaton completed, std::string name)
    : automaton(std::move(completed)),
      objective_name(std::move(name)),
      graph(automaton),
      objective(graph.objective(objective_name)),
      coreach(coreach_inp(graph, objective)),
      layers(reward_layers(graph, objective)),
      greedy(greedy_strategy(graph, objective)) {}

Verdict SpecContext::classify(StateId s) const { return reqtest::classify(s, objective, coreach.coreach, graph); }

Bits pick(const std::vector<Bits>& pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

Bits choose_uniform(const SpecContext& ctx, StateId s, Rng& rng) { return pick(ctx.coreach.allowed[s], rng); }

Bits choose_greedy(const SpecContext& ctx, StateId s, Rng& rng) { return pick(ctx.greedy.st_greedy.at(s), rng); }

Bits choose_eps_greedy(const SpecContext& ctx, StateId s, double epsilon, Rng& rng) {
  std::bernoulli_distribution explore(epsilon);
  return explore(rng) ? choose_uniform(ctx, s, rng) : choose_greedy(ctx, s, rng);
}

RunOutcome run_once(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, Rng& rng) {
  RunOutcome out;
  sut.reset();
  StateId s = ctx.graph.initial();
  Verdict v = ctx.classify(s);
  while (v == Verdict::Active && out.trace.size() < static_cast<std::size_t>(cfg.K)) {
    Bits in = 0;
    switch (cfg.algorithm) {
      case Algorithm::Greedy: in = choose_greedy(ctx, s, rng); break;
      case Algorithm::EpsGreedy: in = choose_eps_greedy(ctx, s, cfg.epsilon, rng); break;
      default: in = choose_uniform(ctx, s, rng); break;
    }
    const Bits o = sut.step(in);
    out.trace.push_back({in, o});
    s = ctx.graph.step(s, {in, o});
    if (s == kNoState) throw RunError("requirement automaton has no move", out.trace.size() - 1);
    v = ctx.classify(s);
  }
  out.verdict = v;
  out.end = s;
  return out;
}

bool AttemptReport::record(const RunOutcome& run, const TesterConfig& cfg) {
  ++runs_used;
  if (fails(run.verdict)) {
    if (error_traces.size() < kMaxErrorTraces) error_traces.push_back(run.trace);
    ++error_count;
    success = true;
  }
  if (covers(run.verdict)) {
    covered = true;
    success = true;
    covering_trace = run.trace;
    return true;
  }
  return fails(run.verdict) && !cfg.continue_after_error;
}

AttemptReport run_attempt(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  AttemptReport report;
  if (cfg.algorithm == Algorithm::Mcts || cfg.algorithm == Algorithm::GreedyMcts) {
    report = mcts_attempt(ctx, sut, cfg, seed);
  } else {
    report.algorithm = cfg.algorithm;
    report.seed = seed;
    Rng rng(seed);
    for (int r = 0; r < cfg.runs; ++r)
      if (report.record(run_once(ctx, sut, cfg, rng), cfg)) break;
  }
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::string> trace_to_strings(const Alphabet& ab, const Trace& t) {
  std::vector<std::string> out;
  out.reserve(t.size());
  for (const Valuation& v : t) out.push_back(ab.valuation_bits(v));
  return out;
}

Trace trace_from_strings(const Alphabet& ab, const std::vector<std::string>& steps) {
  Trace t;
  for (const std::string& s : steps) {
    if (s.size() != ab.num_props()) throw SpecError("trace step '" + s + "' has the wrong length");
    const auto in = ab.parse_input_bits(std::string_view(s).substr(0, ab.num_inputs()));
    const auto out = ab.parse_output_bits(std::string_view(s).substr(ab.num_inputs()));
    if (!in || !out) throw SpecError("trace step '" + s + "' is not a bit string");
    t.push_back({*in, *out});
  }
  return t;
}

}  // namespace reqtest
