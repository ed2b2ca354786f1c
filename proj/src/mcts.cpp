#include "reqtest/mcts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reqtest/errors.hpp"

namespace reqtest {

SearchTree::SearchTree(StateId root_state, Verdict root_verdict) {
  nodes_.push_back(Node{root_state, root_verdict, 0, 0, 0, 0, 0, {}});
}

std::optional<std::uint32_t> SearchTree::child(std::uint32_t id, Bits input) const {
  const auto& ch = nodes_[id].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), input, [](const auto& p, Bits b) { return p.first < b; });
  if (it != ch.end() && it->first == input) return it->second;
  return std::nullopt;
}

std::uint32_t SearchTree::add_child(std::uint32_t parent, Bits input, StateId state, Verdict verdict) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{state, verdict, nodes_[parent].depth + 1, parent, input, 0, 0, {}});
  auto& ch = nodes_[parent].children;
  auto it = std::lower_bound(ch.begin(), ch.end(), input, [](const auto& p, Bits b) { return p.first < b; });
  ch.insert(it, {input, id});
  return id;
}

void SearchTree::propagate(const std::vector<std::uint32_t>& path, double reward) {
  for (std::uint32_t id : path) {
    Node& n = nodes_[id];
    ++n.visits;
    n.mean += (reward - n.mean) / static_cast<double>(n.visits);
  }
}

TreeStats SearchTree::stats() const {
  TreeStats s;
  s.nodes = nodes_.size();
  for (const Node& n : nodes_) s.max_depth = std::max<std::size_t>(s.max_depth, n.depth);
  return s;
}

double uct_score(double mean, std::uint64_t n, std::uint64_t n_i, double c) {
  if (n_i == 0) return -std::numeric_limits<double>::infinity();
  return mean + c * std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n_i));
}

std::vector<int> step_rewards(const SpecContext& ctx, const Trace& trace, int K) {
  std::vector<int> r;
  r.reserve(std::max<std::size_t>(static_cast<std::size_t>(K), 1));
  StateId s = ctx.graph.initial();
  for (const Valuation& v : trace) {
    s = ctx.graph.step(s, v);
    r.push_back(last_reward(ctx.layers, s));
  }
  if (r.empty()) r.push_back(last_reward(ctx.layers, s));
  while (r.size() < static_cast<std::size_t>(K)) r.push_back(r.back());
  return r;
}

double normalized_reward(const SpecContext& ctx, const std::vector<int>& rewards, const TesterConfig& cfg) {
  const double top = std::max(1, ctx.layers.sink_index());
  if (cfg.reward == RewardMode::Last) return rewards.back() / top;
  const double k = static_cast<double>(rewards.size());
  const double bound = top * top * (1 - std::pow(cfg.gamma, k)) / (1 - cfg.gamma);
  return discounted_reward(rewards, cfg.gamma) / bound;
}

MctsSearch::MctsSearch(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed)
    : ctx_(ctx),
      sut_(sut),
      cfg_(cfg),
      rng_(seed),
      tree_(ctx.graph.initial(), ctx.classify(ctx.graph.initial())),
      greedy_tree_(cfg.algorithm == Algorithm::GreedyMcts && cfg.M > 0),
      greedy_rollout_(cfg.algorithm == Algorithm::GreedyMcts && cfg.greedy_rollout) {}

const std::vector<Bits>& MctsSearch::candidates(std::uint32_t node, StateId s) const {
  if (greedy_tree_ && tree_.node(node).visits < static_cast<std::uint64_t>(cfg_.M)) return ctx_.greedy.st_greedy.at(s);
  return ctx_.coreach.allowed[s];
}

MctsSearch::Iteration MctsSearch::iterate() {
  Iteration it;
  Trace& trace = it.run.trace;
  const auto K = static_cast<std::size_t>(cfg_.K);
  sut_.reset();
  StateId s = ctx_.graph.initial();
  std::uint32_t node = 0;
  it.path.push_back(node);

  auto play = [&](Bits in) {
    const Bits out = sut_.step(in);
    trace.push_back({in, out});
    s = ctx_.graph.step(s, {in, out});
    if (s == kNoState) throw RunError("requirement automaton has no move", trace.size() - 1);
  };

  // Selection and expansion.
  while (ctx_.classify(s) == Verdict::Active && trace.size() < K) {
    const auto& pool = candidates(node, s);
    std::optional<Bits> untried;
    for (Bits in : pool)
      if (!tree_.child(node, in)) {
        untried = in;
        break;
      }
    if (untried) {
      play(*untried);
      node = tree_.add_child(node, *untried, s, ctx_.classify(s));
      it.path.push_back(node);
      break;
    }
    const std::uint64_t n = tree_.node(node).visits;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_child = 0;
    Bits best_input = 0;
    for (Bits in : pool) {
      const std::uint32_t ch = *tree_.child(node, in);
      const double score = uct_score(tree_.node(ch).mean, n, tree_.node(ch).visits, cfg_.c);
      if (score < best) {
        best = score;
        best_child = ch;
        best_input = in;
      }
    }
    play(best_input);
    node = best_child;
    it.path.push_back(node);
  }

  // Roll-out.
  while (ctx_.classify(s) == Verdict::Active && trace.size() < K)
    play(greedy_rollout_ ? choose_eps_greedy(ctx_, s, cfg_.epsilon, rng_) : choose_uniform(ctx_, s, rng_));

  it.run.end = s;
  it.run.verdict = ctx_.classify(s);
  it.reward = normalized_reward(ctx_, step_rewards(ctx_, trace, cfg_.K), cfg_);
  tree_.propagate(it.path, it.reward);
  return it;
}

AttemptReport mcts_attempt(const SpecContext& ctx, SutSession& sut, const TesterConfig& cfg, std::uint64_t seed) {
  AttemptReport report;
  report.algorithm = cfg.algorithm;
  report.seed = seed;
  MctsSearch search(ctx, sut, cfg, seed);
  for (int r = 0; r < cfg.runs; ++r)
    if (report.record(search.iterate().run, cfg)) break;
  report.tree = search.tree().stats();
  return report;
}

}  // namespace reqtest
