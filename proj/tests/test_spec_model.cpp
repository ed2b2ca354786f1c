#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>

#include "reqtest/builtin_specs.hpp"
#include "reqtest/errors.hpp"
#include "reqtest/spec_io.hpp"

using namespace reqtest;

namespace {

SpecAutomaton fig1() { return resolve_spec("fig1"); }
SpecAutomaton fig1c() { return complete(fig1(), CompletionPolicy::ToError); }

StateId sid(const SpecAutomaton& a, const char* n) { return *a.find_state(n); }

std::vector<std::string> names(const SpecAutomaton& a, const std::vector<StateId>& ids) {
  std::vector<std::string> out;
  for (StateId s : ids) out.push_back(a.states[s].name);
  return out;
}

// a=1, b=2, c=4 on fig1's alphabet.
constexpr Bits A = 1, B = 2, C = 4;

// Every trace over valid inputs and all outputs of length `len`.
void for_each_trace(const SpecAutomaton& a, int len, const std::function<void(const Trace&)>& f) {
  const auto ins = a.valid_inputs();
  Trace t;
  std::function<void()> rec = [&] {
    f(t);
    if (static_cast<int>(t.size()) == len) return;
    for (Bits in : ins)
      for (Bits o = 0; o < a.alphabet.output_space(); ++o) {
        t.push_back({in, o});
        rec();
        t.pop_back();
      }
  };
  rec();
}

}  // namespace

TEST_CASE("guard evaluation") {
  const Alphabet ab({"cargo", "bwdlimit", "fwdlimit"}, {"movefwd", "movebwd"});
  CHECK(parse_guard("cargo & bwdlimit", ab).eval({0b011, 0}));
  CHECK(parse_guard("true", ab).eval({0b101, 0b11}));
  CHECK_FALSE(parse_guard("!movefwd & !movebwd", ab).eval({0, 0b01}));
  CHECK(parse_guard("cargo -> fwdlimit", ab).eval({0b000, 0}));
  CHECK_FALSE(parse_guard("cargo -> fwdlimit", ab).eval({0b001, 0}));
  CHECK(parse_guard("!cargo | bwdlimit & fwdlimit", ab).eval({0b110, 0}));
}

TEST_CASE("guard printing round-trips") {
  const Alphabet ab({"p", "q", "r"}, {"x"});
  for (const char* text : {"p & (q | r)", "!(p & q)", "p -> q -> r", "(p -> q) -> r", "p | q & !x", "false"}) {
    const Guard g = parse_guard(text, ab);
    CHECK(parse_guard(g.to_string(ab), ab) == g);
  }
}

TEST_CASE("unknown proposition is named with its position") {
  const Alphabet ab({"a"}, {"b"});
  try {
    parse_guard("a & zz", ab, 3, 10);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
    CHECK(e.line() == 3);
  }
}

TEST_CASE("parse fig1") {
  const SpecAutomaton a = fig1();
  std::vector<std::string> ins, errs;
  for (const State& s : a.states) {
    if (s.kind == StateKind::Input) ins.push_back(s.name);
    if (s.error) errs.push_back(s.name);
  }
  CHECK(ins == std::vector<std::string>{"s0", "s1", "o", "t"});
  CHECK(errs == std::vector<std::string>{"t"});
  CHECK(a.states[a.initial].name == "s0");
  CHECK(a.valid_inputs() == std::vector<Bits>{A, B, C});
}

TEST_CASE("parse errors") {
  SUBCASE("empty transitions parse, then fail completeness") {
    const SpecAutomaton a = parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\ntransitions:\n");
    CHECK_FALSE(validate(a).complete);
  }
  SUBCASE("unknown proposition") {
    try {
      parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\n  m out\ntransitions:\n  s -> m [j]\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
      CHECK(std::string(e.what()).find("'j'") != std::string::npos);
    }
  }
  SUBCASE("dangling state") {
    CHECK_THROWS_AS(parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\ntransitions:\n  s -> nowhere [i]\n"),
                    ParseError);
  }
  SUBCASE("guard over the wrong phase") {
    CHECK_THROWS_AS(
        parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\n  m out\ntransitions:\n  s -> m [o]\n  m -> s [true]\n"),
        SpecError);
  }
  SUBCASE("syntax error has a column") {
    try {
      parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\n  m out\ntransitions:\n  s -> m [i &]\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 7);
      CHECK(e.column() > 1);
    }
  }
}

TEST_CASE("input to input transitions are desugared") {
  const SpecAutomaton a = parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\n  u in\ntransitions:\n  s -> u [i]\n");
  const auto mid = a.find_state("s>u");
  REQUIRE(mid);
  CHECK(a.states[*mid].kind == StateKind::Output);
  CHECK(post(a, sid(a, "s"), {1, 0}) == std::vector<StateId>{sid(a, "u")});
  CHECK(post(a, sid(a, "s"), {1, 1}) == std::vector<StateId>{sid(a, "u")});
}

TEST_CASE("validate") {
  const ValidationReport raw = validate(fig1());
  CHECK_FALSE(raw.complete);
  CHECK(raw.deterministic);
  bool o_named = false;
  for (const auto& c : raw.counterexamples) o_named |= c.state == "o" && c.kind == Counterexample::Kind::Incomplete;
  CHECK(o_named);

  const ValidationReport done = validate(fig1c());
  CHECK(done.complete);
  CHECK(done.deterministic);
  CHECK(done.errors_absorbing);

  const SpecAutomaton nd =
      parse_spec("inputs: i\noutputs: o\nstates:\n  s in initial\n  u in\n  m out\n  n out\ntransitions:\n"
                 "  s -> m [i]\n  s -> n [true]\n  m -> s [true]\n  n -> u [true]\n  u -> n [true]\n");
  const ValidationReport r = validate(nd);
  CHECK_FALSE(r.deterministic);
  bool witness = false;
  for (const auto& c : r.counterexamples)
    witness |= c.kind == Counterexample::Kind::Nondeterministic && c.state == "s" && c.valuation == "1";
  CHECK(witness);
}

TEST_CASE("completion") {
  SUBCASE("self-loop on fig1 loops o and t") {
    const SpecAutomaton a = complete(fig1(), CompletionPolicy::SelfLoop);
    CHECK(validate(a).ok());
    for (const char* n : {"o", "t"})
      for (Bits in : {A, B, C})
        for (Bits o : {0u, 1u}) CHECK(post(a, sid(a, n), {in, o}) == std::vector<StateId>{sid(a, n)});
  }
  SUBCASE("to-error keeps existing behaviour and is idempotent") {
    const SpecAutomaton a = fig1c();
    CHECK(complete(a, CompletionPolicy::ToError) == a);
    CHECK(post(a, sid(a, "s0"), {A, 0}) == std::vector<StateId>{sid(a, "s1")});
    CHECK(post(a, sid(a, "o"), {A, 0}) == std::vector<StateId>{sid(a, "t")});
  }
  SUBCASE("carriage gets err edges for movefwd & movebwd") {
    const SpecAutomaton raw = resolve_spec("carriage");
    CHECK(post(raw, sid(raw, "s1"), {0, 0b11}).empty());
    const SpecAutomaton a = complete(raw, CompletionPolicy::ToError);
    CHECK(validate(a).ok());
    CHECK(post(a, sid(a, "s1"), {0, 0b11}) == std::vector<StateId>{sid(a, "err")});
    CHECK(post(a, sid(a, "s0"), {0b011, 0b11}) == std::vector<StateId>{sid(a, "err")});
  }
  SUBCASE("nondeterministic input is refused") {
    const SpecAutomaton nd = parse_spec(
        "inputs: i\noutputs: o\nstates:\n  s in initial\n  m out\n  n out\ntransitions:\n  s -> m [i]\n  s -> n [true]\n");
    CHECK_THROWS_AS(complete(nd, CompletionPolicy::ToError), SpecError);
  }
}

TEST_CASE("post and pre") {
  const SpecAutomaton a = fig1();
  CHECK(names(a, post(a, sid(a, "s0"), {A, 0})) == std::vector<std::string>{"s1"});
  CHECK(names(a, post(a, sid(a, "s0"), {B, 1})) == std::vector<std::string>{"s0"});
  CHECK(names(a, post(a, sid(a, "s0"), {A, 1})) == std::vector<std::string>{"t"});
  CHECK(post(a, sid(a, "o"), {A, 0}).empty());

  const SpecAutomaton c = fig1c();
  for (StateId s = 0; s < c.states.size(); ++s) {
    if (!c.is_input(s)) continue;
    for (Bits in : c.valid_inputs())
      for (Bits o = 0; o < 2; ++o)
        for (StateId t : post(c, s, {in, o})) {
          const auto p = pre(c, t, {in, o});
          CHECK(std::find(p.begin(), p.end(), s) != p.end());
        }
  }
}

TEST_CASE("exactly one successor on complete deterministic automata") {
  for (const std::string& n : builtin_spec_names()) {
    const SpecAutomaton a = complete(resolve_spec(n), CompletionPolicy::ToError);
    INFO(n);
    std::size_t bad = 0;
    for (StateId s = 0; s < a.states.size(); ++s) {
      if (!a.is_input(s)) continue;
      for (Bits in : a.valid_inputs())
        for (Bits o = 0; o < a.alphabet.output_space(); ++o) bad += post(a, s, {in, o}).size() != 1;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("run_trace") {
  const SpecAutomaton a = fig1c();
  RunResult r = run_trace(a, Trace{{A, 0}, {B, 1}});
  CHECK(a.states[r.end].name == "o");
  CHECK_FALSE(r.fails);
  CHECK(r.input_states.size() == 3);
  r = run_trace(a, Trace{{A, 1}});
  CHECK(a.states[r.end].name == "t");
  CHECK(r.fails);
  r = run_trace(a, Trace{});
  CHECK(r.end == a.initial);
  CHECK_FALSE(r.fails);

  const SpecAutomaton raw = fig1();
  try {
    run_trace(raw, Trace{{A, 0}, {B, 1}, {A, 0}});
    FAIL("expected RunError");
  } catch (const RunError& e) {
    CHECK(e.step() == 2);
  }
}

TEST_CASE("product") {
  const SpecAutomaton req = fig1c();
  const SpecAutomaton i1 = complete(resolve_spec("i1"), CompletionPolicy::ToError);
  const SpecAutomaton p = product(req, i1);
  CHECK(validate(p).ok());
  const RunResult r = run_trace(p, Trace{{A, 0}, {B, 1}});
  CHECK(p.states[r.end].name == "(o,q0)");

  SUBCASE("unit element") {
    const SpecAutomaton u =
        parse_spec("inputs: a b c\noutputs: one\nstates:\n  u in initial\n  u.x out\ntransitions:\n  u -> u.x [true]\n  u.x -> u [true]\n");
    const SpecAutomaton q = product(req, u);
    std::size_t in_states = 0;
    for (const State& s : q.states) in_states += s.kind == StateKind::Input;
    CHECK(in_states == 4);
    for_each_trace(req, 3, [&](const Trace& t) {
      CHECK("(" + req.states[run_trace(req, t).end].name + ",u)" == q.states[run_trace(q, t).end].name);
      CHECK(run_trace(req, t).fails == run_trace(q, t).fails);
    });
  }
  SUBCASE("error set stays absorbing") { CHECK(validate(p).errors_absorbing); }
  SUBCASE("ordering conflicts are rejected") {
    const SpecAutomaton swapped = parse_spec(
        "inputs: b a c\noutputs: one\nstates:\n  u in initial\n  u.x out\ntransitions:\n  u -> u.x [true]\n  u.x -> u [true]\n");
    CHECK_THROWS_AS(product(req, swapped), SpecError);
    const SpecAutomaton roles = parse_spec(
        "inputs: one\noutputs: a\nstates:\n  u in initial\n  u.x out\ntransitions:\n  u -> u.x [true]\n  u.x -> u [true]\n");
    CHECK_THROWS_AS(product(req, roles), SpecError);
  }
}

TEST_CASE("product trace law") {
  const SpecAutomaton r1 = fig1c();
  for (const char* other : {"fig6", "i1"}) {
    const SpecAutomaton r2 = complete(resolve_spec(other), CompletionPolicy::ToError);
    const SpecAutomaton p = product(r1, r2);
    std::size_t mismatches = 0, checked = 0;
    for_each_trace(r1, 4, [&](const Trace& t) {
      ++checked;
      mismatches += run_trace(p, t).fails != (run_trace(r1, t).fails || run_trace(r2, t).fails);
    });
    CHECK(checked == 1555);  // 1 + 6 + 36 + 216 + 1296
    CHECK(mismatches == 0);
  }
}

TEST_CASE("serializer round-trip") {
  for (const std::string& n : builtin_spec_names()) {
    INFO(n);
    for (const SpecAutomaton& a : {resolve_spec(n), complete(resolve_spec(n), CompletionPolicy::ToError)}) {
      CHECK(parse_spec(serialize_spec(a)) == a);
      CHECK(parse_spec_json(serialize_spec_json(a)) == a);
    }
  }
}
