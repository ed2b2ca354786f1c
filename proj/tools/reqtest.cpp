// reqtest: validate and analyze requirement automata, run online test
// campaigns against a system under test, reproduce the experiment matrix.

#include <cmath>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "reqtest/builtin_specs.hpp"
#include "reqtest/campaign.hpp"
#include "reqtest/errors.hpp"
#include "reqtest/spec_io.hpp"

using namespace reqtest;
using nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;

SpecAutomaton load_completed(const std::string& spec, CompletionPolicy policy) {
  return complete(resolve_spec(spec), policy);
}

std::string pick_objective(const SpecAutomaton& a, const std::string& requested) {
  if (!requested.empty()) {
    a.objective(requested);
    return requested;
  }
  if (a.objectives.size() == 1) return a.objectives.front().name;
  throw SpecError("spec declares " + std::to_string(a.objectives.size()) + " objectives; pass --objective");
}

ordered_json names(const GameGraph& g, const StateSet& s) { return g.names_of(s); }

ordered_json inputs_json(const Alphabet& ab, const std::vector<Bits>& v) {
  ordered_json out = ordered_json::array();
  for (Bits b : v) out.push_back(ab.describe_input(b));
  return out;
}

ordered_json strategy_json(const GameGraph& g, const Strategy& st) {
  ordered_json out = ordered_json::object();
  for (StateId s : st.domain.members())
    out[g.name(s)] = {{"inputs", inputs_json(g.alphabet(), st.at(s))}, {"arbitrary", st.arbitrary.contains(s)}};
  return out;
}

struct RunFlags {
  std::string spec, objective, sut, algo = "uniform", reward = "discounted", report;
  TesterConfig cfg;
  int jobs = 1;
  bool paper_scale = false, timing = false, no_greedy_rollout = false, self_loop = false;
  int timeout_ms = 5000;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_algo) {
  cmd->add_option("--spec", f.spec, "Spec file or bundled spec name")->required();
  cmd->add_option("--objective", f.objective, "Objective name (default: the only one)");
  cmd->add_option("--sut", f.sut, "builtin:<name> or exec:<command>")->required();
  if (with_algo)
    cmd->add_option("--algo", f.algo, "uniform, greedy, eps-greedy, mcts or greedy-mcts")
        ->check(CLI::IsMember({"uniform", "greedy", "eps-greedy", "mcts", "greedy-mcts"}));
  cmd->add_option("--K", f.cfg.K, "Max steps per run")->capture_default_str();
  cmd->add_option("--runs", f.cfg.runs, "Runs per attempt")->capture_default_str();
  cmd->add_option("--attempts", f.cfg.attempts, "Independent attempts")->capture_default_str();
  cmd->add_option("--epsilon", f.cfg.epsilon, "Exploration rate of eps-greedy")->capture_default_str();
  cmd->add_option("--gamma", f.cfg.gamma, "Discount of the discounted reward")->capture_default_str();
  cmd->add_option("--M,--greedy-tree", f.cfg.M, "Greedy visits per tree node (0 disables)")->capture_default_str();
  cmd->add_option("--c", f.cfg.c, "UCT constant (negative)")->capture_default_str();
  cmd->add_option("--reward", f.reward, "last or discounted")
      ->check(CLI::IsMember({"last", "discounted"}))
      ->capture_default_str();
  cmd->add_option("--seed", f.cfg.seed, "Seed of attempt 0")->capture_default_str();
  cmd->add_option("--jobs", f.jobs, "Parallel attempts")->capture_default_str();
  cmd->add_option("--report", f.report, "Write the JSON report here");
  cmd->add_option("--timeout-ms", f.timeout_ms, "Per-reply timeout for exec: SUTs")->capture_default_str();
  cmd->add_flag("--continue-after-error", f.cfg.continue_after_error, "Keep searching for a covering trace");
  cmd->add_flag("--paper-scale", f.paper_scale, "50 attempts x 10000 runs");
  cmd->add_flag("--timing", f.timing, "Include wall times in the report");
  cmd->add_flag("--no-greedy-rollout", f.no_greedy_rollout, "greedy-mcts: uniform roll-outs");
  cmd->add_flag("--greedy-rollout", "greedy-mcts: greedy roll-outs (default)");
  cmd->add_flag("--self-loop", f.self_loop, "Complete missing inputs with self-loops instead of err");
}

int campaign(RunFlags& f, bool matrix) {
  f.cfg.algorithm = *parse_algorithm(f.algo);
  f.cfg.reward = *parse_reward_mode(f.reward);
  f.cfg.greedy_rollout = !f.no_greedy_rollout;
  if (f.paper_scale) {
    f.cfg.attempts = 50;
    f.cfg.runs = 10000;
  }
  f.cfg.check();
  SpecAutomaton a = load_completed(f.spec, f.self_loop ? CompletionPolicy::SelfLoop : CompletionPolicy::ToError);
  const std::string objective = pick_objective(a, f.objective);
  const SpecContext ctx(std::move(a), objective);
  const SutFactory factory = make_sut_factory(f.sut, ctx.automaton.alphabet, f.timeout_ms);

  std::vector<std::pair<std::string, TesterConfig>> configs;
  if (matrix)
    configs = table1_configs(f.cfg);
  else
    configs.emplace_back(to_string(f.cfg.algorithm), f.cfg);
  std::vector<CampaignResult> results;
  for (const auto& [label, cfg] : configs) {
    CampaignSetup setup{f.spec, f.sut, cfg, f.jobs, f.timeout_ms};
    results.push_back(run_campaign(ctx, factory, setup, label));
  }
  print_summary(std::cout, results);
  for (const auto& r : results)
    for (const auto& att : r.attempts)
      if (att.transport_error) std::cerr << "attempt seed " << att.seed << ": " << *att.transport_error << "\n";
  if (!f.report.empty()) {
    std::ofstream out(f.report, std::ios::binary);
    if (!out) throw SpecError("cannot write report '" + f.report + "'");
    out << report_json(ctx, results, f.timing);
  }
  return campaign_exit_code(results);
}

int cmd_validate(const std::string& spec, bool do_complete, bool self_loop) {
  SpecAutomaton a = resolve_spec(spec);
  if (do_complete) a = complete(a, self_loop ? CompletionPolicy::SelfLoop : CompletionPolicy::ToError);
  const ValidationReport r = validate(a);
  std::cout << "complete: " << (r.complete ? "yes" : "no") << "\n"
            << "deterministic: " << (r.deterministic ? "yes" : "no") << "\n"
            << "errors absorbing: " << (r.errors_absorbing ? "yes" : "no") << "\n";
  for (const auto& c : r.counterexamples) {
    const char* kind = c.kind == Counterexample::Kind::Incomplete         ? "incomplete"
                       : c.kind == Counterexample::Kind::Nondeterministic ? "nondeterministic"
                                                                          : "error escapes";
    std::cout << "  " << kind << " at " << c.state << " on " << c.valuation;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
  }
  return r.ok() ? 0 : 1;
}

int cmd_analyze(const std::string& spec, const std::string& objective_flag, bool game, bool self_loop,
                const std::string& strategy_out) {
  const SpecAutomaton a = load_completed(spec, self_loop ? CompletionPolicy::SelfLoop : CompletionPolicy::ToError);
  const std::string objective = pick_objective(a, objective_flag);
  const GameGraph g(a);
  const StateSet o = g.objective(objective);
  const CoreachInput ci = coreach_inp(g, o);
  const RewardLayers layers = reward_layers(g, o);
  if (layers.empty_objective) std::cerr << "warning: objective '" << objective << "' is empty; every state is in the sink\n";

  ordered_json doc;
  doc["objective"] = objective;
  doc["coreach"] = names(g, ci.coreach);
  ordered_json cin = ordered_json::object();
  for (StateId s = 0; s < g.size(); ++s) cin[g.name(s)] = inputs_json(g.alphabet(), ci.allowed[s]);
  doc["coreach_inp"] = cin;
  ordered_json ls = ordered_json::array();
  for (const auto& l : layers.layers) ls.push_back(names(g, l));
  doc["layers"] = ls;
  doc["sink"] = names(g, layers.sink);
  doc["m"] = layers.m();
  if (game || !strategy_out.empty()) {
    const GreedyArtifacts ga = greedy_strategy(g, o);
    ordered_json w = ordered_json::array(), coop = ordered_json::array(), rank = ordered_json::object();
    for (const auto& x : ga.w) w.push_back(names(g, x));
    for (std::size_t i = 1; i < ga.coop.size(); ++i) coop.push_back(names(g, ga.coop[i]));
    for (StateId s = 0; s < g.size(); ++s)
      if (ga.rank[s] >= 0) rank[g.name(s)] = ga.rank[s];
    ordered_json gj;
    gj["W"] = w;
    gj["Coop"] = coop;
    gj["rank"] = rank;
    gj["st_greedy"] = strategy_json(g, ga.st_greedy);
    if (game) doc["game"] = gj;
    if (!strategy_out.empty()) {
      std::ofstream out(strategy_out);
      if (!out) throw SpecError("cannot write '" + strategy_out + "'");
      out << gj["st_greedy"].dump(2) << "\n";
    }
  }
  std::cout << doc.dump(2) << "\n";
  return 0;
}

int cmd_export(const std::string& name, bool json) {
  const SpecAutomaton a = resolve_spec(name);
  std::cout << (json ? serialize_spec_json(a) : serialize_spec(a));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online black-box test synthesis from safety-automaton requirements"};
  app.require_subcommand(1);

  std::string spec, objective, strategy_out;
  bool do_complete = false, self_loop = false, game = false, json = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check completeness, determinism and absorbing errors");
  validate_cmd->add_option("spec", spec, "Spec file or bundled spec name")->required();
  validate_cmd->add_flag("--complete", do_complete, "Validate after auto-completion");
  validate_cmd->add_flag("--self-loop", self_loop, "Complete missing inputs with self-loops");

  auto* analyze_cmd = app.add_subcommand("analyze", "Print coreach, coreach_inp and reward layers as JSON");
  analyze_cmd->add_option("--spec", spec, "Spec file or bundled spec name")->required();
  analyze_cmd->add_option("--objective", objective, "Objective name");
  analyze_cmd->add_flag("--game", game, "Add W_i, Coop_i, rank and st_greedy");
  analyze_cmd->add_flag("--self-loop", self_loop, "Complete missing inputs with self-loops");
  analyze_cmd->add_option("--strategy-out", strategy_out, "Write st_greedy to this file");

  RunFlags run_flags, exp_flags;
  auto* run_cmd = app.add_subcommand("run", "Run a test campaign against a SUT");
  add_run_flags(run_cmd, run_flags, true);
  auto* exp_cmd = app.add_subcommand("experiment", "Run the five-algorithm comparison matrix");
  add_run_flags(exp_cmd, exp_flags, false);

  auto* export_cmd = app.add_subcommand("export-spec", "Print a bundled spec in the text (or JSON) format");
  export_cmd->add_option("name", spec, "Bundled spec name")->required();
  export_cmd->add_flag("--json", json, "JSON mirror");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(spec, do_complete, self_loop);
    if (*analyze_cmd) return cmd_analyze(spec, objective, game, self_loop, strategy_out);
    if (*run_cmd) return campaign(run_flags, false);
    if (*exp_cmd) return campaign(exp_flags, true);
    if (*export_cmd) return cmd_export(spec, json);
  } catch (const TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return 3;
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
