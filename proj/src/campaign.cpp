#include "reqtest/campaign.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "reqtest/errors.hpp"

namespace reqtest {

double CampaignResult::success_rate() const {
  return attempts.empty() ? 0.0 : 100.0 * successes / static_cast<double>(attempts.size());
}

double CampaignResult::average_runs() const {
  if (successes == 0) return 0;
  double total = 0;
  for (const auto& a : attempts)
    if (a.success) total += a.runs_used;
  return total / successes;
}

namespace {

void audit(const SpecContext& ctx, const AttemptReport& a) {
  auto expect = [&](const Trace& t, bool want_cover) {
    const RunResult r = run_trace(ctx.automaton, t);
    const StateId end = ctx.graph.from_spec(r.end);
    const Verdict v = ctx.classify(end);
    if (want_cover ? !covers(v) : !fails(v))
      throw std::logic_error("self-audit failed: reported trace does not re-run to its verdict");
  };
  if (a.covering_trace) expect(*a.covering_trace, true);
  for (const Trace& t : a.error_traces) expect(t, false);
}

}  // namespace

CampaignResult run_campaign(const SpecContext& ctx, const SutFactory& factory, const CampaignSetup& setup,
                            std::string label) {
  setup.config.check();
  const auto start = std::chrono::steady_clock::now();
  CampaignResult res;
  res.label = label.empty() ? to_string(setup.config.algorithm) : std::move(label);
  res.setup = setup;
  const int n = setup.config.attempts;
  res.attempts.resize(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i; (i = next++) < n;) {
      const std::uint64_t seed = setup.config.seed + static_cast<std::uint64_t>(i);
      try {
        auto sut = factory();
        res.attempts[i] = run_attempt(ctx, *sut, setup.config, seed);
      } catch (const TransportError& e) {
        AttemptReport& a = res.attempts[i];
        a = AttemptReport{};
        a.algorithm = setup.config.algorithm;
        a.seed = seed;
        a.transport_error = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min(setup.jobs, n));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& a : res.attempts) {
    audit(ctx, a);
    res.successes += a.success;
    res.transport_failures += a.transport_error.has_value();
  }
  res.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::string report_json(const SpecContext& ctx, const std::vector<CampaignResult>& results, bool timing) {
  using nlohmann::ordered_json;
  const Alphabet& ab = ctx.automaton.alphabet;
  ordered_json doc;
  doc["objective"] = ctx.objective_name;
  doc["alphabet"] = {{"inputs", ab.inputs()}, {"outputs", ab.outputs()}};
  ordered_json rows = ordered_json::array();
  for (const auto& r : results) {
    const TesterConfig& c = r.setup.config;
    ordered_json row;
    row["label"] = r.label;
    row["spec"] = r.setup.spec;
    row["sut"] = r.setup.sut;
    row["config"] = {{"algorithm", to_string(c.algorithm)},
                     {"K", c.K},
                     {"runs", c.runs},
                     {"attempts", c.attempts},
                     {"epsilon", c.epsilon},
                     {"gamma", c.gamma},
                     {"M", c.M},
                     {"c", c.c},
                     {"reward", to_string(c.reward)},
                     {"greedy_rollout", c.greedy_rollout},
                     {"seed", c.seed},
                     {"continue_after_error", c.continue_after_error}};
    row["summary"] = {{"successes", r.successes},
                      {"success_rate", r.success_rate()},
                      {"average_runs", r.average_runs()},
                      {"transport_failures", r.transport_failures}};
    if (timing) row["wall_time_ms"] = r.wall_time_ms;
    ordered_json attempts = ordered_json::array();
    for (const auto& a : r.attempts) {
      ordered_json j;
      j["algorithm"] = to_string(a.algorithm);
      j["seed"] = a.seed;
      j["success"] = a.success;
      j["covered"] = a.covered;
      j["runs_used"] = a.runs_used;
      if (a.covering_trace) j["covering_trace"] = trace_to_strings(ab, *a.covering_trace);
      ordered_json errs = ordered_json::array();
      for (const auto& t : a.error_traces) errs.push_back(trace_to_strings(ab, t));
      j["error_traces"] = errs;
      j["error_count"] = a.error_count;
      if (a.tree) j["tree"] = {{"nodes", a.tree->nodes}, {"max_depth", a.tree->max_depth}};
      if (a.transport_error) j["transport_error"] = *a.transport_error;
      if (timing) j["wall_time_ms"] = a.wall_time_ms;
      attempts.push_back(std::move(j));
    }
    row["attempts"] = std::move(attempts);
    rows.push_back(std::move(row));
  }
  doc["campaigns"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void print_summary(std::ostream& os, const std::vector<CampaignResult>& results) {
  char line[160];
  std::snprintf(line, sizeof line, "%-32s %12s %12s\n", "Algorithm", "Success", "Avg runs");
  os << line;
  for (const auto& r : results) {
    char avg[32] = "-";
    if (r.successes > 0) std::snprintf(avg, sizeof avg, "%.1f", r.average_runs());
    std::snprintf(line, sizeof line, "%-32s %11.1f%% %12s\n", r.label.c_str(), r.success_rate(), avg);
    os << line;
    if (r.transport_failures > 0) os << "  (" << r.transport_failures << " attempts hit SUT transport failures)\n";
  }
}

int campaign_exit_code(const std::vector<CampaignResult>& results) {
  bool success = false;
  for (const auto& r : results) {
    if (r.transport_failures > 0) return 3;
    success = success || r.successes > 0;
  }
  return success ? 0 : 1;
}

std::vector<std::pair<std::string, TesterConfig>> table1_configs(const TesterConfig& base) {
  auto with = [&](Algorithm a, int M, bool rollout) {
    TesterConfig c = base;
    c.algorithm = a;
    c.M = M;
    c.greedy_rollout = rollout;
    return c;
  };
  return {{"UniformTC", with(Algorithm::Uniform, base.M, false)},
          {"eps-GreedyTC", with(Algorithm::EpsGreedy, base.M, false)},
          {"Basic MCTS", with(Algorithm::Mcts, base.M, false)},
          {"MCTS + greedy roll-out", with(Algorithm::GreedyMcts, 0, true)},
          {"MCTS + greedy tree & roll-out", with(Algorithm::GreedyMcts, base.M, true)}};
}

}  // namespace reqtest
