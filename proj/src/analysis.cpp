#include "reqtest/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "reqtest/errors.hpp"

namespace reqtest {

GameGraph::GameGraph(const SpecAutomaton& a) : alphabet_(a.alphabet) {
  spec_to_compact_.assign(a.states.size(), kNoState);
  for (StateId s = 0; s < a.states.size(); ++s) {
    if (!a.is_input(s)) continue;
    spec_to_compact_[s] = static_cast<StateId>(names_.size());
    names_.push_back(a.states[s].name);
    error_.push_back(a.states[s].error);
  }
  initial_ = spec_to_compact_[a.initial];
  inputs_ = a.valid_inputs();
  input_pos_.assign(alphabet_.input_space(), npos);
  for (std::size_t i = 0; i < inputs_.size(); ++i) input_pos_[inputs_[i]] = i;
  output_space_ = alphabet_.output_space();

  const auto out = a.outgoing();
  // Output-state dispatch tables: output valuation -> spec input-state.
  std::vector<std::vector<StateId>> dispatch(a.states.size());
  for (StateId o = 0; o < a.states.size(); ++o) {
    if (a.is_input(o)) continue;
    auto& row = dispatch[o];
    row.assign(output_space_, kNoState);
    for (Bits w = 0; w < output_space_; ++w) {
      for (std::size_t ti : out[o]) {
        const auto& t = a.transitions[ti];
        if (!t.guard.eval({0, w})) continue;
        if (row[w] != kNoState && row[w] != t.dst)
          throw SpecError("automaton is nondeterministic at output-state " + a.states[o].name + " on " +
                          alphabet_.output_bits(w));
        row[w] = t.dst;
      }
    }
  }

  const std::size_t n = names_.size();
  table_.assign(n * inputs_.size() * output_space_, kNoState);
  preds_.assign(n, {});
  succs_.assign(n, {});
  for (StateId s = 0; s < a.states.size(); ++s) {
    if (!a.is_input(s)) continue;
    const StateId cs = spec_to_compact_[s];
    for (std::size_t ip = 0; ip < inputs_.size(); ++ip) {
      StateId mid = kNoState;
      for (std::size_t ti : out[s]) {
        const auto& t = a.transitions[ti];
        if (!t.guard.eval({inputs_[ip], 0})) continue;
        if (mid != kNoState && mid != t.dst)
          throw SpecError("automaton is nondeterministic at input-state " + a.states[s].name + " on " +
                          alphabet_.input_bits(inputs_[ip]));
        mid = t.dst;
      }
      if (mid == kNoState) continue;
      StateId* row = &table_[(cs * inputs_.size() + ip) * output_space_];
      for (Bits w = 0; w < output_space_; ++w) {
        const StateId dst = dispatch[mid][w];
        row[w] = dst == kNoState ? kNoState : spec_to_compact_[dst];
      }
    }
  }
  for (StateId s = 0; s < n; ++s) {
    auto& su = succs_[s];
    const StateId* begin = &table_[static_cast<std::size_t>(s) * inputs_.size() * output_space_];
    su.assign(begin, begin + inputs_.size() * output_space_);
    std::sort(su.begin(), su.end());
    su.erase(std::unique(su.begin(), su.end()), su.end());
    if (!su.empty() && su.back() == kNoState) su.pop_back();
    for (StateId t : su) preds_[t].push_back(s);
  }
  for (const auto& o : a.objectives) {
    Objective c{o.name, {}};
    for (StateId s : o.states) c.states.push_back(spec_to_compact_[s]);
    objectives_.push_back(std::move(c));
  }
}

StateSet GameGraph::error_states() const {
  StateSet e(size());
  for (StateId s = 0; s < size(); ++s)
    if (error_[s]) e.insert(s);
  return e;
}

std::vector<StateId> GameGraph::all_ids() const {
  std::vector<StateId> ids(size());
  for (StateId s = 0; s < size(); ++s) ids[s] = s;
  return ids;
}

StateId GameGraph::step(StateId s, Valuation v) const {
  const std::size_t ip = input_position(v.input);
  if (ip == npos || v.output >= output_space_) return kNoState;
  return succ(s, ip, v.output);
}

std::size_t GameGraph::input_position(Bits input) const {
  return input < input_pos_.size() ? input_pos_[input] : npos;
}

std::optional<StateId> GameGraph::find(std::string_view name) const {
  for (StateId s = 0; s < size(); ++s)
    if (names_[s] == name) return s;
  return std::nullopt;
}

StateId GameGraph::from_spec(StateId spec_id) const { return spec_to_compact_.at(spec_id); }

StateSet GameGraph::objective(std::string_view name) const {
  for (const auto& o : objectives_)
    if (o.name == name) return StateSet(size(), o.states);
  throw SpecError("unknown objective '" + std::string(name) + "'");
}

StateSet GameGraph::make_set(const std::vector<std::string>& names) const {
  StateSet s(size());
  for (const auto& n : names) {
    const auto id = find(n);
    if (!id) throw SpecError("unknown input-state '" + n + "'");
    s.insert(*id);
  }
  return s;
}

std::vector<std::string> GameGraph::names_of(const StateSet& set) const {
  std::vector<std::string> out;
  for (StateId s : set.members()) out.push_back(names_[s]);
  return out;
}

StateSet pre(const GameGraph& g, const StateSet& b) {
  StateSet r(g.size());
  for (StateId t : b.members())
    for (StateId p : g.predecessors(t)) r.insert(p);
  return r;
}

StateSet post(const GameGraph& g, const StateSet& b) {
  StateSet r(g.size());
  for (StateId s : b.members())
    for (StateId t : g.successors(s)) r.insert(t);
  return r;
}

namespace {

StateSet saturate(const StateSet& seed, const std::vector<StateId>& (GameGraph::*edges)(StateId) const,
                  const GameGraph& g) {
  StateSet r = seed;
  std::deque<StateId> work;
  for (StateId s : seed.members()) work.push_back(s);
  while (!work.empty()) {
    const StateId s = work.front();
    work.pop_front();
    for (StateId t : (g.*edges)(s)) {
      if (r.contains(t)) continue;
      r.insert(t);
      work.push_back(t);
    }
  }
  return r;
}

}  // namespace

StateSet pre_star(const GameGraph& g, const StateSet& b) { return saturate(b, &GameGraph::predecessors, g); }

StateSet post_star(const GameGraph& g, const StateSet& b) { return saturate(b, &GameGraph::successors, g); }

bool CoreachInput::contains(StateId s, Bits input) const {
  const auto& v = allowed.at(s);
  return std::binary_search(v.begin(), v.end(), input);
}

CoreachInput coreach_inp(const GameGraph& g, const StateSet& objective) {
  CoreachInput r;
  r.coreach = pre_star(g, objective);
  r.allowed.assign(g.size(), {});
  for (StateId s = 0; s < g.size(); ++s) {
    for (std::size_t ip = 0; ip < g.inputs().size(); ++ip) {
      for (Bits w = 0; w < g.output_space(); ++w) {
        const StateId t = g.succ(s, ip, w);
        if (t != kNoState && r.coreach.contains(t)) {
          r.allowed[s].push_back(g.inputs()[ip]);
          break;
        }
      }
    }
  }
  return r;
}

RewardLayers reward_layers(const GameGraph& g, const StateSet& objective) {
  RewardLayers r;
  r.empty_objective = objective.empty();
  r.layers.push_back(objective);
  StateSet seen = objective;
  while (true) {
    StateSet next = pre(g, r.layers.back()) - seen;
    if (next.empty()) break;
    seen |= next;
    r.layers.push_back(std::move(next));
  }
  r.sink = g.all_states() - seen;
  r.index.assign(g.size(), r.sink_index());
  for (std::size_t k = 0; k < r.layers.size(); ++k)
    for (StateId s : r.layers[k].members()) r.index[s] = static_cast<int>(k);
  return r;
}

int last_reward(const RewardLayers& layers, StateId end_state) { return layers.index.at(end_state); }

double discounted_reward(std::span<const int> rewards, double gamma) {
  if (rewards.empty()) throw std::invalid_argument("discounted_reward: empty reward sequence");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discounted_reward: gamma must lie in (0,1)");
  double sum = 0.0;
  double weight = 1.0;
  for (int r : rewards) {
    sum += weight * r;
    weight *= gamma;
  }
  return rewards.back() * sum;
}

}  // namespace reqtest
