#include "reqtest/spec_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "reqtest/errors.hpp"

namespace reqtest {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_ws(std::string_view line, std::size_t base_column) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({std::string(line.substr(start, i - start)), base_column + start});
  }
  return out;
}

bool valid_state_name(std::string_view n) {
  if (n.empty() || n == "->" || n == "=") return false;
  for (char c : n)
    if (c == '[' || c == ']' || c == '#' || c == '=' || std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

bool valid_prop_name(std::string_view n) {
  if (n.empty() || n == "true" || n == "false" || std::isdigit(static_cast<unsigned char>(n[0]))) return false;
  for (char c : n)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

struct PendingTransition {
  Token src, dst;
  std::string guard;
  std::size_t line, guard_column;
};

struct PendingObjective {
  Token name;
  std::vector<Token> states;
  std::size_t line;
};

class TextParser {
 public:
  explicit TextParser(std::string_view text) : text_(text) {}

  SpecAutomaton parse() {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text_.size()) {
      std::size_t end = text_.find('\n', pos);
      if (end == std::string_view::npos) end = text_.size();
      ++line_no;
      std::string_view line = text_.substr(pos, end - pos);
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      handle_line(line, line_no);
      pos = end + 1;
    }
    return resolve();
  }

 private:
  enum class Section { None, Inputs, Outputs, Assume, States, Transitions, Objectives };

  void handle_line(std::string_view line, std::size_t line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return;
    // Section header: identifier followed by ':'.
    std::size_t i = first;
    while (i < line.size() && (std::isalpha(static_cast<unsigned char>(line[i])))) ++i;
    if (i < line.size() && line[i] == ':' && i > first) {
      const std::string_view name = line.substr(first, i - first);
      static const std::map<std::string_view, Section> sections = {
          {"inputs", Section::Inputs},           {"outputs", Section::Outputs}, {"assume", Section::Assume},
          {"states", Section::States},           {"transitions", Section::Transitions},
          {"objectives", Section::Objectives}};
      const auto it = sections.find(name);
      if (it == sections.end()) throw ParseError("unknown section '" + std::string(name) + "'", line_no, first + 1);
      section_ = it->second;
      if (section_ == Section::Inputs) seen_inputs_ = true;
      if (section_ == Section::Outputs) seen_outputs_ = true;
      const std::string_view rest = line.substr(i + 1);
      if (rest.find_first_not_of(" \t\r") != std::string_view::npos) handle_item(rest, line_no, i + 2);
      return;
    }
    handle_item(line, line_no, 1);
  }

  void handle_item(std::string_view item, std::size_t line_no, std::size_t col) {
    switch (section_) {
      case Section::None:
        throw ParseError("content outside of any section", line_no, col + item.find_first_not_of(" \t\r"));
      case Section::Inputs:
      case Section::Outputs:
        for (auto& t : split_ws(item, col)) {
          if (t.text.back() == '\r') t.text.pop_back();
          if (!valid_prop_name(t.text)) throw ParseError("invalid proposition name '" + t.text + "'", line_no, t.column);
          (section_ == Section::Inputs ? inputs_ : outputs_).push_back(t.text);
        }
        return;
      case Section::Assume:
        if (!assume_.empty()) assume_ += ' ';
        assume_ += std::string(item);
        if (assume_line_ == 0) {
          assume_line_ = line_no;
          assume_col_ = col;
        }
        return;
      case Section::States:
        parse_state(item, line_no, col);
        return;
      case Section::Transitions:
        parse_transition(item, line_no, col);
        return;
      case Section::Objectives:
        parse_objective(item, line_no, col);
        return;
    }
  }

  void parse_state(std::string_view item, std::size_t line_no, std::size_t col) {
    const auto toks = split_ws(item, col);
    if (toks.size() < 2) throw ParseError("expected '<name> in|out [initial] [error]'", line_no, toks.empty() ? col : toks[0].column);
    if (!valid_state_name(toks[0].text)) throw ParseError("invalid state name '" + toks[0].text + "'", line_no, toks[0].column);
    State s;
    s.name = toks[0].text;
    if (toks[1].text == "in")
      s.kind = StateKind::Input;
    else if (toks[1].text == "out")
      s.kind = StateKind::Output;
    else
      throw ParseError("expected state kind 'in' or 'out', got '" + toks[1].text + "'", line_no, toks[1].column);
    bool initial = false;
    for (std::size_t k = 2; k < toks.size(); ++k) {
      if (toks[k].text == "initial")
        initial = true;
      else if (toks[k].text == "error")
        s.error = true;
      else
        throw ParseError("unknown state flag '" + toks[k].text + "'", line_no, toks[k].column);
    }
    if (state_ids_.count(s.name)) throw ParseError("duplicate state '" + s.name + "'", line_no, toks[0].column);
    state_ids_[s.name] = static_cast<StateId>(states_.size());
    if (initial) {
      if (initial_) throw ParseError("more than one initial state", line_no, toks[0].column);
      initial_ = static_cast<StateId>(states_.size());
    }
    states_.push_back(std::move(s));
  }

  void parse_transition(std::string_view item, std::size_t line_no, std::size_t col) {
    std::string_view head = item;
    std::string guard = "true";
    std::size_t guard_col = col;
    if (const auto lb = item.find('['); lb != std::string_view::npos) {
      const auto rb = item.rfind(']');
      if (rb == std::string_view::npos || rb < lb) throw ParseError("missing ']'", line_no, col + lb);
      if (item.substr(rb + 1).find_first_not_of(" \t\r") != std::string_view::npos)
        throw ParseError("trailing text after guard", line_no, col + rb + 1);
      guard = std::string(item.substr(lb + 1, rb - lb - 1));
      guard_col = col + lb + 1;
      head = item.substr(0, lb);
    }
    const auto toks = split_ws(head, col);
    if (toks.size() != 3 || toks[1].text != "->")
      throw ParseError("expected '<src> -> <dst> [guard]'", line_no, toks.empty() ? col : toks[0].column);
    pending_.push_back({toks[0], toks[2], guard, line_no, guard_col});
  }

  void parse_objective(std::string_view item, std::size_t line_no, std::size_t col) {
    const auto toks = split_ws(item, col);
    if (toks.size() < 2 || toks[1].text != "=")
      throw ParseError("expected '<name> = <state> ...'", line_no, toks.empty() ? col : toks[0].column);
    objectives_.push_back({toks[0], {toks.begin() + 2, toks.end()}, line_no});
  }

  StateId lookup(const Token& t, std::size_t line_no) const {
    const auto it = state_ids_.find(t.text);
    if (it == state_ids_.end()) throw ParseError("unknown state '" + t.text + "'", line_no, t.column);
    return it->second;
  }

  SpecAutomaton resolve() {
    if (!seen_inputs_) throw ParseError("missing 'inputs:' section", 1, 1);
    if (!seen_outputs_) throw ParseError("missing 'outputs:' section", 1, 1);
    SpecAutomaton a;
    try {
      a.alphabet = Alphabet(inputs_, outputs_);
    } catch (const SpecError& e) {
      throw ParseError(e.what(), 1, 1);
    }
    if (!assume_.empty()) {
      a.assumption = parse_guard(assume_, a.alphabet, assume_line_, assume_col_);
      if (a.assumption.mentions(Phase::Output)) throw ParseError("assumption mentions output propositions", assume_line_, assume_col_);
    }
    if (states_.empty()) throw ParseError("no states declared", 1, 1);
    if (!initial_) throw ParseError("no initial state", 1, 1);
    a.states = states_;
    a.initial = *initial_;
    for (const auto& p : pending_) {
      const StateId src = lookup(p.src, p.line);
      const StateId dst = lookup(p.dst, p.line);
      Guard g = parse_guard(p.guard, a.alphabet, p.line, p.guard_column);
      const bool src_in = a.is_input(src);
      if (g.mentions(src_in ? Phase::Output : Phase::Input))
        throw ParseError(std::string("guard of a transition leaving ") + (src_in ? "an input" : "an output") +
                             "-state mentions " + (src_in ? "output" : "input") + " propositions",
                         p.line, p.guard_column);
      if (a.is_input(src) == a.is_input(dst)) {
        if (!src_in) throw ParseError("transition between two output-states", p.line, p.src.column);
        // Skipped output phase: insert an output-state that accepts anything.
        std::string base = a.states[src].name + ">" + a.states[dst].name;
        std::string name = base;
        for (int k = 1; a.find_state(name); ++k) name = base + "." + std::to_string(k);
        a.states.push_back({name, StateKind::Output, false});
        const auto mid = static_cast<StateId>(a.states.size() - 1);
        a.transitions.push_back({src, mid, std::move(g)});
        a.transitions.push_back({mid, dst, Guard::constant(true)});
        state_ids_[name] = mid;
        continue;
      }
      a.transitions.push_back({src, dst, std::move(g)});
    }
    for (const auto& o : objectives_) {
      Objective obj{o.name.text, {}};
      for (const auto& t : o.states) {
        const StateId s = lookup(t, o.line);
        if (!a.is_input(s)) throw ParseError("objective state '" + t.text + "' is not an input-state", o.line, t.column);
        obj.states.push_back(s);
      }
      a.objectives.push_back(std::move(obj));
    }
    try {
      check_well_formed(a);
    } catch (const ParseError&) {
      throw;
    } catch (const SpecError& e) {
      throw ParseError(e.what(), 1, 1);
    }
    return a;
  }

  std::string_view text_;
  Section section_ = Section::None;
  bool seen_inputs_ = false;
  bool seen_outputs_ = false;
  std::vector<std::string> inputs_, outputs_;
  std::string assume_;
  std::size_t assume_line_ = 0, assume_col_ = 1;
  std::vector<State> states_;
  std::map<std::string, StateId> state_ids_;
  std::optional<StateId> initial_;
  std::vector<PendingTransition> pending_;
  std::vector<PendingObjective> objectives_;
};

}  // namespace

SpecAutomaton parse_spec(std::string_view text) { return TextParser(text).parse(); }

std::string serialize_spec(const SpecAutomaton& a) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += " " + x;
    return s;
  };
  os << "inputs:" << join(a.alphabet.inputs()) << "\n";
  os << "outputs:" << join(a.alphabet.outputs()) << "\n";
  if (!a.assumption.is_true_constant()) os << "assume: " << a.assumption.to_string(a.alphabet) << "\n";
  os << "states:\n";
  for (StateId s = 0; s < a.states.size(); ++s) {
    os << "  " << a.states[s].name << (a.is_input(s) ? " in" : " out");
    if (s == a.initial) os << " initial";
    if (a.states[s].error) os << " error";
    os << "\n";
  }
  os << "transitions:\n";
  for (const auto& t : a.transitions)
    os << "  " << a.states[t.src].name << " -> " << a.states[t.dst].name << " [" << t.guard.to_string(a.alphabet)
       << "]\n";
  if (!a.objectives.empty()) {
    os << "objectives:\n";
    for (const auto& o : a.objectives) {
      os << "  " << o.name << " =";
      for (StateId s : o.states) os << " " << a.states[s].name;
      os << "\n";
    }
  }
  return os.str();
}

SpecAutomaton parse_spec_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), 1, e.byte);
  }
  try {
    SpecAutomaton a;
    a.alphabet = Alphabet(j.at("inputs").get<std::vector<std::string>>(), j.at("outputs").get<std::vector<std::string>>());
    if (j.contains("assume")) a.assumption = parse_guard(j["assume"].get<std::string>(), a.alphabet);
    std::map<std::string, StateId> ids;
    bool have_initial = false;
    for (const auto& js : j.at("states")) {
      State s;
      s.name = js.at("name").get<std::string>();
      const auto kind = js.at("kind").get<std::string>();
      if (kind != "in" && kind != "out") throw SpecError("state kind must be 'in' or 'out'");
      s.kind = kind == "in" ? StateKind::Input : StateKind::Output;
      s.error = js.value("error", false);
      if (js.value("initial", false)) {
        if (have_initial) throw SpecError("more than one initial state");
        a.initial = static_cast<StateId>(a.states.size());
        have_initial = true;
      }
      ids[s.name] = static_cast<StateId>(a.states.size());
      a.states.push_back(std::move(s));
    }
    if (!have_initial) throw SpecError("no initial state");
    auto lookup = [&](const std::string& n) {
      const auto it = ids.find(n);
      if (it == ids.end()) throw SpecError("unknown state '" + n + "'");
      return it->second;
    };
    for (const auto& jt : j.at("transitions")) {
      a.transitions.push_back({lookup(jt.at("src").get<std::string>()), lookup(jt.at("dst").get<std::string>()),
                               parse_guard(jt.value("guard", std::string("true")), a.alphabet)});
    }
    if (j.contains("objectives")) {
      for (const auto& jo : j["objectives"]) {
        Objective o{jo.at("name").get<std::string>(), {}};
        for (const auto& n : jo.at("states")) o.states.push_back(lookup(n.get<std::string>()));
        a.objectives.push_back(std::move(o));
      }
    }
    check_well_formed(a);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed JSON spec: ") + e.what());
  }
}

std::string serialize_spec_json(const SpecAutomaton& a) {
  nlohmann::ordered_json j;
  j["inputs"] = a.alphabet.inputs();
  j["outputs"] = a.alphabet.outputs();
  if (!a.assumption.is_true_constant()) j["assume"] = a.assumption.to_string(a.alphabet);
  j["states"] = nlohmann::ordered_json::array();
  for (StateId s = 0; s < a.states.size(); ++s) {
    nlohmann::ordered_json js;
    js["name"] = a.states[s].name;
    js["kind"] = a.is_input(s) ? "in" : "out";
    js["initial"] = s == a.initial;
    js["error"] = a.states[s].error;
    j["states"].push_back(js);
  }
  j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : a.transitions)
    j["transitions"].push_back(
        {{"src", a.states[t.src].name}, {"dst", a.states[t.dst].name}, {"guard", t.guard.to_string(a.alphabet)}});
  j["objectives"] = nlohmann::ordered_json::array();
  for (const auto& o : a.objectives) {
    nlohmann::ordered_json jo;
    jo["name"] = o.name;
    jo["states"] = nlohmann::ordered_json::array();
    for (StateId s : o.states) jo["states"].push_back(a.states[s].name);
    j["objectives"].push_back(jo);
  }
  return j.dump(2) + "\n";
}

SpecAutomaton load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open spec file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.extension() == ".json") return parse_spec_json(buf.str());
  return parse_spec(buf.str());
}

}  // namespace reqtest
