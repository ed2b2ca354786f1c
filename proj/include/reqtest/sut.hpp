#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "reqtest/alphabet.hpp"
#include "reqtest/automaton.hpp"

namespace reqtest {

/// Black-box system under test: resettable, input-complete, one synchronous
/// output valuation per input valuation.
class SutSession {
 public:
  virtual ~SutSession() = default;
  virtual const Alphabet& alphabet() const = 0;
  virtual void reset() = 0;
  virtual Bits step(Bits input) = 0;
};

using SutFactory = std::function<std::unique_ptr<SutSession>()>;

/// Drives an output-deterministic implementation automaton. At each
/// output-state the first enabled transition is taken and the smallest
/// output valuation satisfying its guard is emitted. Inputs with no enabled
/// transition leave the state unchanged and emit the all-false valuation.
class AutomatonSut : public SutSession {
 public:
  explicit AutomatonSut(SpecAutomaton model);
  const Alphabet& alphabet() const override { return model_.alphabet; }
  void reset() override { state_ = model_.initial; }
  Bits step(Bits input) override;
  StateId state() const { return state_; }

 private:
  SpecAutomaton model_;
  struct Move {
    StateId next = kNoState;
    Bits output = 0;
  };
  std::vector<Move> moves_;  // [state * input_space + input]
  StateId state_;
};

/// Serves a session over the line protocol until QUIT or end of input:
/// handshake `INPUTS ...`, `OUTPUTS ...`, `READY`; then `RESET` -> `OK`,
/// `STEP <bits>` -> `OUT <bits>`, anything else -> `ERR <message>`.
/// Returns the process exit status to use.
int serve_sut(SutSession& sut, std::istream& in, std::ostream& out);

/// Child process speaking the line protocol on its stdin/stdout. The
/// handshake must declare exactly the expected alphabet, in order.
class ProcessSut : public SutSession {
 public:
  ProcessSut(const std::string& command, const Alphabet& expected, int timeout_ms = 5000);
  ~ProcessSut() override;
  ProcessSut(const ProcessSut&) = delete;
  ProcessSut& operator=(const ProcessSut&) = delete;

  const Alphabet& alphabet() const override { return alphabet_; }
  void reset() override;
  Bits step(Bits input) override;
  /// Sends QUIT and waits for the child; returns its exit status (-1 if it
  /// had to be killed).
  int quit();

 private:
  std::string read_line();
  void write_line(const std::string& line);

  Alphabet alphabet_;
  int timeout_ms_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  bool closed_ = false;
};

/// Factory for a SUT URI: `builtin:<name>` or `exec:<shell command>`.
/// Builtins: passageway, passageway-bug, passageway3, passageway3-bug,
/// carriage, carriage-bug, i1, fig6. Throws SpecError on unknown URIs.
SutFactory make_sut_factory(const std::string& uri, const Alphabet& expected, int timeout_ms = 5000);

/// In-process session for a builtin name (without the `builtin:` prefix).
std::unique_ptr<SutSession> make_builtin_sut(const std::string& name);

}  // namespace reqtest
