#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "reqtest/game.hpp"
#include "reqtest/spec_io.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace reqtest;
using testutil::completed;
using testutil::make;
using testutil::set_of;
using Names = std::set<std::string>;

namespace {

constexpr Bits A = 1, B = 2, C = 4;

std::vector<std::pair<std::string, SpecAutomaton>> corpus() {
  std::vector<std::pair<std::string, SpecAutomaton>> out;
  for (const std::string& n : builtin_spec_names())
    if (!resolve_spec(n).objectives.empty()) out.emplace_back(n, completed(n));
  out.emplace_back("fig6-product", testutil::fig6_product());
  out.emplace_back("random", oracle::random_safety_automaton(60, 21));
  return out;
}

// Every play from `s` that follows `st` reaches `target` or err within
// `depth` steps.
bool all_plays_reach(const GameGraph& g, const Strategy& st, const StateSet& target, StateId s, std::size_t depth) {
  if (target.contains(s) || g.is_error(s)) return true;
  if (depth == 0 || !st.domain.contains(s)) return false;
  for (Bits in : st.at(s)) {
    const std::size_t ip = g.input_position(in);
    for (Bits o = 0; o < g.output_space(); ++o)
      if (!all_plays_reach(g, st, target, g.succ(s, ip, o), depth - 1)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("cpre on fig1") {
  for (const SpecAutomaton& a : {resolve_spec("fig1"), completed("fig1")}) {
    const GameGraph g(a);
    const Names c = set_of(g, cpre(g, make(g, {"s1", "o"})));
    CHECK(c.count("s0"));
    CHECK(c.count("s1"));
  }
  // As drawn, o has no moves and forces nothing.
  const GameGraph raw(resolve_spec("fig1"));
  CHECK(cpre(raw, make(raw, {"o"})).empty());
  CHECK(cpre_star(raw, make(raw, {})).result.empty());
  // Completed to err, every input at o forces err.
  const GameGraph done(completed("fig1"));
  CHECK(set_of(done, cpre(done, make(done, {"o"}))) == Names{"o"});
  CHECK(set_of(done, cpre_star(done, make(done, {})).result) == Names{"o"});
}

TEST_CASE("cpre on the fig5 schematic") {
  const SpecAutomaton a = completed("fig5");
  const GameGraph g(a);
  CHECK(set_of(g, cpre(g, g.objective("o"))) == Names{"s0", "s0p"});
}

TEST_CASE("cpre_star on fig1") {
  const GameGraph g(completed("fig1"));
  CHECK(set_of(g, cpre_star(g, make(g, {"o"})).result) == Names{"o"});
  CHECK(set_of(g, cpre_star(g, make(g, {"s1", "o"})).result) == Names{"s0", "s1", "o"});
  const CPreStar f = cpre_star(g, make(g, {"s1", "o"}));
  CHECK(f.iterates.front().empty());
  CHECK(f.iterates.back() == f.result);
}

TEST_CASE("cpre and cpre_star agree with AND-OR search") {
  for (const auto& [name, a] : corpus()) {
    INFO(name);
    const GameGraph g(a);
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 6; ++trial) {
      Names b;
      for (StateId s = 0; s < g.size(); ++s)
        if (rng() % 3 == 0) b.insert(g.name(s));
      CHECK(set_of(g, cpre(g, make(g, b))) == oracle::cpre(a, b));
      CHECK(set_of(g, cpre_star(g, make(g, b)).result) == oracle::cpre_star(a, b));
    }
  }
}

TEST_CASE("controllability implies possibility") {
  for (const auto& [name, a] : corpus()) {
    INFO(name);
    const GameGraph g(a);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
      StateSet b(g.size());
      for (StateId s = 0; s < g.size(); ++s)
        if (rng() % 3 == 0) b.insert(s);
      CHECK(cpre(g, b).subset_of(pre(g, b | g.error_states())));
    }
  }
}

TEST_CASE("winning strategy") {
  const GameGraph g(completed("fig1"));
  const CPreStar f = cpre_star(g, make(g, {"s1", "o"}));
  const Strategy st = winning_strategy(g, f);
  CHECK(st.at(*g.find("s0")) == std::vector<Bits>{A});
  CHECK_THROWS_AS(st.at(*g.find("t")), std::out_of_range);

  for (const auto& [name, a] : corpus()) {
    INFO(name);
    const GameGraph gg(a);
    const StateSet target = gg.objective(a.objectives.front().name);
    const CPreStar fx = cpre_star(gg, target);
    const Strategy w = winning_strategy(gg, fx);
    for (StateId s : fx.result.members()) {
      CHECK_FALSE(w.at(s).empty());
      CHECK(all_plays_reach(gg, w, target, s, fx.iterates.size()));
    }
  }
}

TEST_CASE("cooperative strategy") {
  const GameGraph g(completed("fig1"));
  const Strategy st = cooperative_strategy(g, make(g, {"o"}));
  CHECK(set_of(g, st.domain) == Names{"s1"});
  CHECK(st.at(*g.find("s1")) == std::vector<Bits>{B, C});
  CHECK_FALSE(st.allows(*g.find("s1"), A));

  CHECK(cooperative_strategy(g, make(g, {})).domain.empty());
}

TEST_CASE("greedy strategy on fig1") {
  const GameGraph g(completed("fig1"));
  const GreedyArtifacts ga = greedy_strategy(g, make(g, {"o"}));
  CHECK(set_of(g, ga.w[0]) == Names{"o"});
  CHECK(ga.st_greedy.at(*g.find("s0")) == std::vector<Bits>{A});
  CHECK(ga.st_greedy.at(*g.find("s1")) == std::vector<Bits>{B, C});
  REQUIRE(ga.coop.size() >= 2);
  CHECK(set_of(g, ga.coop[1]) == Names{"s1"});
  CHECK(ga.st_greedy.arbitrary.contains(*g.find("t")));
}

TEST_CASE("greedy strategy on the error objective") {
  // The initial state can force err, so the hierarchy stops at W_0.
  const SpecAutomaton a = parse_spec(
      "inputs: i\noutputs: o\nstates:\n  s in initial\n  e in error\n  m out\n  n out\ntransitions:\n"
      "  s -> m [i]\n  s -> n [!i]\n  m -> e [true]\n  n -> s [true]\n  e -> e [true]\nobjectives:\n  e = e\n");
  const GameGraph g(complete(a, CompletionPolicy::ToError));
  const GreedyArtifacts ga = greedy_strategy(g, g.objective("e"));
  CHECK(ga.rank[g.initial()] == 0);
  CHECK(ga.st_greedy.at(g.initial()) == std::vector<Bits>{1});
  for (std::size_t i = 1; i < ga.coop.size(); ++i) CHECK(ga.coop[i].empty());
}

TEST_CASE("greedy strategy on the passageway") {
  const GameGraph g(completed("passageway"));
  const GreedyArtifacts ga = greedy_strategy(g, g.objective("room10"));
  for (int i = 1; i < 10; ++i) {
    for (const char* kind : {"m1_", "m2_"}) {
      const StateId s = *g.find(kind + std::to_string(i));
      for (Bits in : ga.st_greedy.at(s)) CHECK((in & 1u) == 1u);  // right
    }
  }
}

TEST_CASE("greedy hierarchy invariants") {
  for (const auto& [name, a] : corpus()) {
    INFO(name);
    const GameGraph g(a);
    const StateSet o = g.objective(a.objectives.front().name);
    const GreedyArtifacts ga = greedy_strategy(g, o);
    const StateSet co = pre_star(g, o);
    CHECK(ga.w.front() == cpre_star(g, o).result);
    for (std::size_t i = 1; i < ga.w.size(); ++i) {
      CHECK(ga.w[i - 1].subset_of(ga.w[i]));
      CHECK(ga.coop[i] == pre(g, ga.w[i - 1]) - ga.w[i - 1]);
    }
    CHECK(ga.w.back() == co);
    for (StateId s = 0; s < g.size(); ++s) {
      CHECK((ga.rank[s] >= 0) == co.contains(s));
      CHECK((ga.rank[s] == 0) == ga.w.front().contains(s));
      CHECK(ga.st_greedy.domain.contains(s));
      if (ga.rank[s] <= 0) continue;
      const auto r = static_cast<std::size_t>(ga.rank[s]);
      if (ga.coop[r].contains(s)) {
        for (Bits in : ga.st_greedy.at(s)) {
          bool progress = false;
          for (Bits out = 0; out < g.output_space(); ++out) {
            const StateId t = g.succ(s, g.input_position(in), out);
            progress |= ga.rank[t] >= 0 && ga.rank[t] < ga.rank[s];
          }
          CHECK(progress);
        }
      }
    }
  }
}
