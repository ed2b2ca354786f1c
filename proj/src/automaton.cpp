#include "reqtest/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "reqtest/errors.hpp"

namespace reqtest {

std::optional<StateId> SpecAutomaton::find_state(std::string_view name) const {
  for (StateId i = 0; i < states.size(); ++i)
    if (states[i].name == name) return i;
  return std::nullopt;
}

const Objective& SpecAutomaton::objective(std::string_view name) const {
  for (const auto& o : objectives)
    if (o.name == name) return o;
  throw SpecError("unknown objective '" + std::string(name) + "'");
}

std::vector<Bits> SpecAutomaton::valid_inputs() const {
  std::vector<Bits> out;
  for (Bits v = 0; v < alphabet.input_space(); ++v)
    if (input_valid(v)) out.push_back(v);
  return out;
}

std::vector<std::vector<std::size_t>> SpecAutomaton::outgoing() const {
  std::vector<std::vector<std::size_t>> out(states.size());
  for (std::size_t i = 0; i < transitions.size(); ++i) out[transitions[i].src].push_back(i);
  return out;
}

void check_well_formed(const SpecAutomaton& a) {
  if (a.states.empty()) throw SpecError("automaton has no states");
  if (a.initial >= a.states.size()) throw SpecError("initial state out of range");
  if (!a.is_input(a.initial)) throw SpecError("initial state '" + a.states[a.initial].name + "' must be an input-state");
  if (a.assumption.mentions(Phase::Output)) throw SpecError("assumption may only mention input propositions");
  std::set<std::string> names;
  for (const auto& s : a.states) {
    if (!names.insert(s.name).second) throw SpecError("duplicate state '" + s.name + "'");
    if (s.error && s.kind != StateKind::Input) throw SpecError("error state '" + s.name + "' must be an input-state");
  }
  for (const auto& t : a.transitions) {
    if (t.src >= a.states.size() || t.dst >= a.states.size()) throw SpecError("transition references unknown state");
    const auto& src = a.states[t.src];
    const auto& dst = a.states[t.dst];
    if (src.kind == dst.kind)
      throw SpecError("transition " + src.name + " -> " + dst.name + " does not alternate input/output states");
    const Phase wrong = src.kind == StateKind::Input ? Phase::Output : Phase::Input;
    if (t.guard.mentions(wrong))
      throw SpecError("guard of " + src.name + " -> " + dst.name + " mentions " +
                      (wrong == Phase::Input ? "input" : "output") + " propositions");
  }
  for (const auto& o : a.objectives) {
    for (StateId s : o.states) {
      if (s >= a.states.size() || !a.is_input(s))
        throw SpecError("objective '" + o.name + "' must contain input-states only");
    }
  }
}

std::vector<StateId> post(const SpecAutomaton& a, StateId s, Valuation v) {
  std::vector<StateId> out;
  for (const auto& t1 : a.transitions) {
    if (t1.src != s || !t1.guard.eval(v)) continue;
    for (const auto& t2 : a.transitions)
      if (t2.src == t1.dst && t2.guard.eval(v)) out.push_back(t2.dst);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<StateId> pre(const SpecAutomaton& a, StateId s, Valuation v) {
  std::vector<StateId> out;
  for (StateId p = 0; p < a.states.size(); ++p) {
    if (!a.is_input(p)) continue;
    const auto succ = post(a, p, v);
    if (std::binary_search(succ.begin(), succ.end(), s)) out.push_back(p);
  }
  return out;
}

namespace {

/// Phase valuations a state of the given kind reads; inputs restricted to the
/// assumption.
std::vector<Bits> phase_valuations(const SpecAutomaton& a, StateKind kind) {
  if (kind == StateKind::Input) return a.valid_inputs();
  std::vector<Bits> out(a.alphabet.output_space());
  for (Bits v = 0; v < out.size(); ++v) out[v] = v;
  return out;
}

Valuation as_valuation(StateKind kind, Bits v) { return kind == StateKind::Input ? Valuation{v, 0} : Valuation{0, v}; }

std::string phase_bits(const SpecAutomaton& a, StateKind kind, Bits v) {
  return kind == StateKind::Input ? a.alphabet.input_bits(v) : a.alphabet.output_bits(v);
}

bool satisfiable(const SpecAutomaton& a, StateKind kind, const Guard& g) {
  for (Bits v : phase_valuations(a, kind))
    if (g.eval(as_valuation(kind, v))) return true;
  return false;
}

/// States reachable from `from` along transitions with satisfiable guards.
std::vector<bool> reachable_from(const SpecAutomaton& a, const std::vector<StateId>& from) {
  const auto out = a.outgoing();
  std::vector<bool> seen(a.states.size(), false);
  std::deque<StateId> queue;
  for (StateId s : from) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const StateId s = queue.front();
    queue.pop_front();
    for (std::size_t ti : out[s]) {
      const auto& t = a.transitions[ti];
      if (seen[t.dst] || !satisfiable(a, a.states[s].kind, t.guard)) continue;
      seen[t.dst] = true;
      queue.push_back(t.dst);
    }
  }
  return seen;
}

std::string unique_name(const SpecAutomaton& a, const std::string& base) {
  if (!a.find_state(base)) return base;
  for (int k = 1;; ++k) {
    std::string cand = base + "." + std::to_string(k);
    if (!a.find_state(cand)) return cand;
  }
}

StateId add_state(SpecAutomaton& a, const std::string& base, StateKind kind, bool error = false) {
  a.states.push_back({unique_name(a, base), kind, error});
  return static_cast<StateId>(a.states.size() - 1);
}

}  // namespace

ValidationReport validate(const SpecAutomaton& a) {
  ValidationReport r;
  const auto out = a.outgoing();
  const auto reach = reachable_from(a, {a.initial});
  for (StateId s = 0; s < a.states.size(); ++s) {
    if (!reach[s]) continue;
    const StateKind kind = a.states[s].kind;
    for (Bits v : phase_valuations(a, kind)) {
      const Valuation val = as_valuation(kind, v);
      std::vector<StateId> targets;
      for (std::size_t ti : out[s])
        if (a.transitions[ti].guard.eval(val)) targets.push_back(a.transitions[ti].dst);
      if (targets.empty()) {
        r.complete = false;
        r.counterexamples.push_back({Counterexample::Kind::Incomplete, a.states[s].name, phase_bits(a, kind, v),
                                     "no enabled transition"});
      }
      std::sort(targets.begin(), targets.end());
      targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
      if (targets.size() > 1) {
        r.deterministic = false;
        r.counterexamples.push_back({Counterexample::Kind::Nondeterministic, a.states[s].name, phase_bits(a, kind, v),
                                     "enables transitions to " + a.states[targets[0]].name + " and " +
                                         a.states[targets[1]].name});
      }
    }
  }
  for (StateId e = 0; e < a.states.size(); ++e) {
    if (!a.states[e].error || !reach[e]) continue;
    const auto from_err = reachable_from(a, {e});
    for (StateId s = 0; s < a.states.size(); ++s) {
      if (from_err[s] && a.is_input(s) && !a.states[s].error) {
        r.errors_absorbing = false;
        r.counterexamples.push_back(
            {Counterexample::Kind::ErrorEscapes, a.states[e].name, "", "reaches non-error state " + a.states[s].name});
      }
    }
  }
  return r;
}

SpecAutomaton complete(const SpecAutomaton& a, CompletionPolicy policy) {
  const auto report = validate(a);
  if (!report.deterministic) throw SpecError("cannot complete a nondeterministic automaton");

  SpecAutomaton r = a;
  const auto out = a.outgoing();
  std::optional<StateId> err_state;
  std::optional<StateId> err_sink;  // output-state leading to err_state
  auto error_target = [&]() -> StateId {
    if (!err_state) {
      for (StateId s = 0; s < r.states.size(); ++s) {
        if (r.states[s].error) {
          err_state = s;
          break;
        }
      }
    }
    if (!err_state) {
      err_state = add_state(r, "err", StateKind::Input, true);
      const StateId loop = add_state(r, "err.loop", StateKind::Output);
      r.transitions.push_back({*err_state, loop, Guard::constant(true)});
      r.transitions.push_back({loop, *err_state, Guard::constant(true)});
    }
    return *err_state;
  };

  for (StateId s = 0; s < a.states.size(); ++s) {
    const StateKind kind = a.states[s].kind;
    Guard covered = Guard::constant(false);
    for (std::size_t ti : out[s]) covered = Guard::disj(covered, a.transitions[ti].guard);
    Guard missing = out[s].empty() ? Guard::constant(true) : Guard::negate(covered);
    if (!satisfiable(a, kind, missing)) continue;
    if (kind == StateKind::Output) {
      r.transitions.push_back({s, error_target(), missing});
      continue;
    }
    if (policy == CompletionPolicy::SelfLoop || a.states[s].error) {
      const StateId loop = add_state(r, a.states[s].name + ".loop", StateKind::Output);
      r.transitions.push_back({s, loop, missing});
      r.transitions.push_back({loop, s, Guard::constant(true)});
    } else {
      const StateId target = error_target();
      if (!err_sink) {
        err_sink = add_state(r, r.states[target].name + ".sink", StateKind::Output);
        r.transitions.push_back({*err_sink, target, Guard::constant(true)});
      }
      r.transitions.push_back({s, *err_sink, missing});
    }
  }
  // A freshly created error state may itself need no further completion:
  // its loop is total by construction.
  return r;
}

namespace {

struct AlphabetUnion {
  Alphabet alphabet;
  std::vector<std::size_t> in1, out1, in2, out2;  // operand index -> union index
};

AlphabetUnion unite(const Alphabet& a1, const Alphabet& a2) {
  auto merge = [](const std::vector<std::string>& l1, const std::vector<std::string>& l2,
                  const std::vector<std::string>& other1, const std::vector<std::string>& other2) {
    std::vector<std::string> out = l1;
    for (const auto& n : l2) {
      if (std::find(other1.begin(), other1.end(), n) != other1.end())
        throw SpecError("proposition '" + n + "' is an input in one operand and an output in the other");
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    for (const auto& n : l1)
      if (std::find(other2.begin(), other2.end(), n) != other2.end())
        throw SpecError("proposition '" + n + "' is an input in one operand and an output in the other");
    // Shared propositions must appear in the same relative order.
    std::vector<std::string> shared1, shared2;
    for (const auto& n : l1)
      if (std::find(l2.begin(), l2.end(), n) != l2.end()) shared1.push_back(n);
    for (const auto& n : l2)
      if (std::find(l1.begin(), l1.end(), n) != l1.end()) shared2.push_back(n);
    if (shared1 != shared2) throw SpecError("shared propositions are declared in conflicting orders");
    return out;
  };
  AlphabetUnion u;
  auto ins = merge(a1.inputs(), a2.inputs(), a1.outputs(), a2.outputs());
  auto outs = merge(a1.outputs(), a2.outputs(), a1.inputs(), a2.inputs());
  u.alphabet = Alphabet(ins, outs);
  auto index = [](const std::vector<std::string>& from, const std::vector<std::string>& to) {
    std::vector<std::size_t> idx;
    for (const auto& n : from) idx.push_back(static_cast<std::size_t>(std::find(to.begin(), to.end(), n) - to.begin()));
    return idx;
  };
  u.in1 = index(a1.inputs(), ins);
  u.out1 = index(a1.outputs(), outs);
  u.in2 = index(a2.inputs(), ins);
  u.out2 = index(a2.outputs(), outs);
  return u;
}

Guard remap(const Guard& g, const std::vector<std::size_t>& in, const std::vector<std::size_t>& out) {
  switch (g.op()) {
    case Guard::Op::Const:
      return g;
    case Guard::Op::Prop:
      return Guard::prop(g.phase(), g.phase() == Phase::Input ? in[g.index()] : out[g.index()]);
    case Guard::Op::Not:
      return Guard::negate(remap(g.lhs(), in, out));
    case Guard::Op::And:
      return Guard::conj(remap(g.lhs(), in, out), remap(g.rhs(), in, out));
    case Guard::Op::Or:
      return Guard::disj(remap(g.lhs(), in, out), remap(g.rhs(), in, out));
    case Guard::Op::Implies:
      return Guard::implies(remap(g.lhs(), in, out), remap(g.rhs(), in, out));
  }
  return g;
}

}  // namespace

SpecAutomaton product(const SpecAutomaton& a1, const SpecAutomaton& a2) {
  const AlphabetUnion u = unite(a1.alphabet, a2.alphabet);
  SpecAutomaton r;
  r.alphabet = u.alphabet;
  r.assumption = Guard::conj(remap(a1.assumption, u.in1, u.out1), remap(a2.assumption, u.in2, u.out2));
  if (a1.assumption.is_true_constant() && a2.assumption.is_true_constant()) r.assumption = Guard::constant(true);

  const auto out1 = a1.outgoing();
  const auto out2 = a2.outgoing();
  std::map<std::pair<StateId, StateId>, StateId> ids;
  std::deque<std::pair<StateId, StateId>> queue;
  auto intern = [&](StateId s1, StateId s2) {
    auto [it, fresh] = ids.emplace(std::pair{s1, s2}, static_cast<StateId>(r.states.size()));
    if (fresh) {
      const bool err = a1.states[s1].kind == StateKind::Input && (a1.states[s1].error || a2.states[s2].error);
      r.states.push_back({"(" + a1.states[s1].name + "," + a2.states[s2].name + ")", a1.states[s1].kind, err});
      queue.emplace_back(s1, s2);
    }
    return it->second;
  };
  if (a1.states[a1.initial].kind != a2.states[a2.initial].kind) throw SpecError("operands disagree on initial phase");
  r.initial = intern(a1.initial, a2.initial);
  while (!queue.empty()) {
    const auto [s1, s2] = queue.front();
    queue.pop_front();
    const StateId src = ids.at({s1, s2});
    const StateKind kind = a1.states[s1].kind;
    if (kind != a2.states[s2].kind) throw SpecError("operands do not share phase structure");
    for (std::size_t t1 : out1[s1]) {
      for (std::size_t t2 : out2[s2]) {
        Guard g = Guard::conj(remap(a1.transitions[t1].guard, u.in1, u.out1),
                              remap(a2.transitions[t2].guard, u.in2, u.out2));
        if (!satisfiable(r, kind, g)) continue;
        const StateId dst = intern(a1.transitions[t1].dst, a2.transitions[t2].dst);
        r.transitions.push_back({src, dst, std::move(g)});
      }
    }
  }

  std::set<std::string> names;
  auto lift = [&](const SpecAutomaton& src, bool first) {
    for (const auto& o : src.objectives) {
      if (!names.insert(o.name).second) continue;
      Objective lifted{o.name, {}};
      for (const auto& [pair, id] : ids) {
        const StateId own = first ? pair.first : pair.second;
        if (std::find(o.states.begin(), o.states.end(), own) != o.states.end() && r.is_input(id))
          lifted.states.push_back(id);
      }
      std::sort(lifted.states.begin(), lifted.states.end());
      r.objectives.push_back(std::move(lifted));
    }
  };
  lift(a1, true);
  lift(a2, false);
  return r;
}

RunResult run_trace(const SpecAutomaton& a, std::span<const Valuation> trace) {
  const auto out = a.outgoing();
  RunResult r;
  StateId s = a.initial;
  r.input_states.push_back(s);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const Valuation v = trace[i];
    StateId mid = kNoState;
    for (std::size_t ti : out[s]) {
      if (a.transitions[ti].guard.eval(v)) {
        mid = a.transitions[ti].dst;
        break;
      }
    }
    if (mid == kNoState)
      throw RunError("no input transition enabled at step " + std::to_string(i) + " from " + a.states[s].name, i);
    StateId next = kNoState;
    for (std::size_t ti : out[mid]) {
      if (a.transitions[ti].guard.eval(v)) {
        next = a.transitions[ti].dst;
        break;
      }
    }
    if (next == kNoState)
      throw RunError("no output transition enabled at step " + std::to_string(i) + " from " + a.states[mid].name, i);
    s = next;
    r.input_states.push_back(s);
  }
  r.end = s;
  r.fails = a.states[s].error;
  return r;
}

}  // namespace reqtest
