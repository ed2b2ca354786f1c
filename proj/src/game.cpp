#include "reqtest/game.hpp"

#include <algorithm>
#include <stdexcept>

namespace reqtest {

const std::vector<Bits>& Strategy::at(StateId s) const {
  if (!domain.contains(s)) throw std::out_of_range("strategy is not defined at state " + std::to_string(s));
  return choices[s];
}

bool Strategy::allows(StateId s, Bits input) const {
  if (!domain.contains(s)) return false;
  return std::binary_search(choices[s].begin(), choices[s].end(), input);
}

namespace {

/// True iff every output after input position `ip` from `s` lands in target ∪ err.
bool forces(const GameGraph& g, StateId s, std::size_t ip, const StateSet& target, const StateSet& err) {
  for (Bits w = 0; w < g.output_space(); ++w) {
    const StateId t = g.succ(s, ip, w);
    if (t == kNoState || !(target.contains(t) || err.contains(t))) return false;
  }
  return true;
}

bool may_enter(const GameGraph& g, StateId s, std::size_t ip, const StateSet& target) {
  for (Bits w = 0; w < g.output_space(); ++w) {
    const StateId t = g.succ(s, ip, w);
    if (t != kNoState && target.contains(t)) return true;
  }
  return false;
}

Strategy empty_strategy(const GameGraph& g) {
  return Strategy{StateSet(g.size()), StateSet(g.size()), std::vector<std::vector<Bits>>(g.size())};
}

void set_arbitrary(Strategy& st, const GameGraph& g, StateId s) {
  st.domain.insert(s);
  st.arbitrary.insert(s);
  st.choices[s] = g.inputs();
}

}  // namespace

StateSet cpre(const GameGraph& g, const StateSet& b) {
  const StateSet err = g.error_states();
  StateSet r(g.size());
  for (StateId s = 0; s < g.size(); ++s) {
    if (err.contains(s)) continue;
    for (std::size_t ip = 0; ip < g.inputs().size(); ++ip) {
      if (forces(g, s, ip, b, err)) {
        r.insert(s);
        break;
      }
    }
  }
  return r;
}

CPreStar cpre_star(const GameGraph& g, const StateSet& b) {
  CPreStar r;
  r.iterates.emplace_back(g.size());
  r.first_index.assign(g.size(), -1);
  while (true) {
    const StateSet& prev = r.iterates.back();
    StateSet next = b | prev | cpre(g, prev);
    if (next == prev && r.iterates.size() > 1) break;
    const int i = static_cast<int>(r.iterates.size());
    for (StateId s : (next - prev).members()) r.first_index[s] = i;
    const bool done = next == prev;
    r.iterates.push_back(std::move(next));
    if (done) break;
  }
  r.result = r.iterates.back();
  return r;
}

Strategy winning_strategy(const GameGraph& g, const CPreStar& fixpoint) {
  const StateSet err = g.error_states();
  Strategy st = empty_strategy(g);
  for (StateId s : fixpoint.result.members()) {
    const int i = fixpoint.first_index[s];
    const StateSet& below = fixpoint.iterates[static_cast<std::size_t>(i - 1)];
    std::vector<Bits> choice;
    for (std::size_t ip = 0; ip < g.inputs().size(); ++ip)
      if (forces(g, s, ip, below, err)) choice.push_back(g.inputs()[ip]);
    if (choice.empty()) {
      // Only target states can lack a forcing input; play there is over.
      set_arbitrary(st, g, s);
      continue;
    }
    st.domain.insert(s);
    st.choices[s] = std::move(choice);
  }
  return st;
}

Strategy cooperative_strategy(const GameGraph& g, const StateSet& b) {
  Strategy st = empty_strategy(g);
  for (StateId s : (pre(g, b) - b).members()) {
    std::vector<Bits> choice;
    for (std::size_t ip = 0; ip < g.inputs().size(); ++ip)
      if (may_enter(g, s, ip, b)) choice.push_back(g.inputs()[ip]);
    st.domain.insert(s);
    st.choices[s] = std::move(choice);
  }
  return st;
}

GreedyArtifacts greedy_strategy(const GameGraph& g, const StateSet& objective) {
  GreedyArtifacts r;
  r.rank.assign(g.size(), -1);
  r.st_greedy = empty_strategy(g);

  const CPreStar w0 = cpre_star(g, objective);
  const Strategy st0 = winning_strategy(g, w0);
  r.w.push_back(w0.result);
  r.coop.emplace_back(g.size());
  for (StateId s : w0.result.members()) {
    r.rank[s] = 0;
    r.st_greedy.domain.insert(s);
    r.st_greedy.choices[s] = st0.choices[s];
    if (st0.arbitrary.contains(s)) r.st_greedy.arbitrary.insert(s);
  }

  while (true) {
    const StateSet& wi = r.w.back();
    StateSet coop = pre(g, wi) - wi;
    if (coop.empty()) break;
    const Strategy stc = cooperative_strategy(g, wi);
    const CPreStar next = cpre_star(g, coop | wi);
    const Strategy stw = winning_strategy(g, next);
    const int level = static_cast<int>(r.w.size());
    for (StateId s : (next.result - wi).members()) {
      r.rank[s] = level;
      r.st_greedy.domain.insert(s);
      if (coop.contains(s)) {
        r.st_greedy.choices[s] = stc.choices[s];
      } else {
        r.st_greedy.choices[s] = stw.choices[s];
        if (stw.arbitrary.contains(s)) r.st_greedy.arbitrary.insert(s);
      }
    }
    r.coop.push_back(std::move(coop));
    r.w.push_back(next.result);
  }

  for (StateId s = 0; s < g.size(); ++s)
    if (r.rank[s] < 0) set_arbitrary(r.st_greedy, g, s);
  return r;
}

}  // namespace reqtest
