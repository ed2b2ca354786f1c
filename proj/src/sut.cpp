#include "reqtest/sut.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "reqtest/builtin_specs.hpp"
#include "reqtest/errors.hpp"
#include "reqtest/passageway.hpp"
#include "reqtest/spec_io.hpp"

namespace reqtest {

AutomatonSut::AutomatonSut(SpecAutomaton model) : model_(std::move(model)), state_(model_.initial) {
  const Bits in_space = model_.alphabet.input_space();
  const Bits out_space = model_.alphabet.output_space();
  const auto outgoing = model_.outgoing();
  moves_.resize(model_.states.size() * in_space);
  for (StateId s = 0; s < model_.states.size(); ++s) {
    if (!model_.is_input(s)) continue;
    for (Bits in = 0; in < in_space; ++in) {
      Move& mv = moves_[s * in_space + in];
      StateId mid = kNoState;
      for (std::size_t t : outgoing[s])
        if (model_.transitions[t].guard.eval({in, 0})) {
          mid = model_.transitions[t].dst;
          break;
        }
      if (mid == kNoState) continue;
      for (std::size_t t : outgoing[mid]) {
        const Transition& tr = model_.transitions[t];
        for (Bits w = 0; w < out_space && mv.next == kNoState; ++w)
          if (tr.guard.eval({in, w})) mv = {tr.dst, w};
        if (mv.next != kNoState) break;
      }
    }
  }
}

Bits AutomatonSut::step(Bits input) {
  const Move& mv = moves_[state_ * model_.alphabet.input_space() + input];
  if (mv.next == kNoState) return 0;
  state_ = mv.next;
  return mv.output;
}

int serve_sut(SutSession& sut, std::istream& in, std::ostream& out) {
  const Alphabet& ab = sut.alphabet();
  out << "INPUTS";
  for (const auto& n : ab.inputs()) out << ' ' << n;
  out << "\nOUTPUTS";
  for (const auto& n : ab.outputs()) out << ' ' << n;
  out << "\nREADY" << std::endl;
  sut.reset();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "QUIT") return 0;
    if (line == "RESET") {
      sut.reset();
      out << "OK" << std::endl;
    } else if (line.rfind("STEP ", 0) == 0) {
      const auto bits = ab.parse_input_bits(std::string_view(line).substr(5));
      if (!bits) {
        out << "ERR bad input valuation '" << line.substr(5) << "'" << std::endl;
        continue;
      }
      out << "OUT " << ab.output_bits(sut.step(*bits)) << std::endl;
    } else {
      out << "ERR unknown command" << std::endl;
    }
  }
  return 0;
}

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> words;
  for (std::string w; is >> w;) words.push_back(w);
  return words;
}

}  // namespace

ProcessSut::ProcessSut(const std::string& command, const Alphabet& expected, int timeout_ms)
    : alphabet_(expected), timeout_ms_(timeout_ms) {
  ignore_sigpipe();
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw TransportError(TransportError::Kind::Launch, "pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw TransportError(TransportError::Kind::Launch, "pipe failed");
  }
  const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
  pid_ = ::fork();
  if (pid_ < 0) throw TransportError(TransportError::Kind::Launch, std::string("fork failed: ") + std::strerror(errno));
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execv("/bin/sh", const_cast<char* const*>(argv));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  auto expect = [&](const char* tag, const std::vector<std::string>& names) {
    std::string line;
    try {
      line = read_line();
    } catch (const TransportError& e) {
      quit();
      throw TransportError(TransportError::Kind::Handshake, std::string("handshake: ") + e.what());
    }
    std::vector<std::string> words = split_words(line);
    std::vector<std::string> want{tag};
    want.insert(want.end(), names.begin(), names.end());
    if (words != want) {
      quit();
      throw TransportError(TransportError::Kind::Handshake,
                           "handshake: expected '" + want.front() + " ...' matching the spec, got '" + line + "'");
    }
  };
  expect("INPUTS", expected.inputs());
  expect("OUTPUTS", expected.outputs());
  expect("READY", {});
}

ProcessSut::~ProcessSut() {
  if (!closed_) quit();
}

std::string ProcessSut::read_line() {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) throw TransportError(TransportError::Kind::Timeout, "no reply within " + std::to_string(timeout_ms_) + " ms");
    pollfd pfd{from_child_, POLLIN, 0};
    const int r = ::poll(&pfd, 1, static_cast<int>(left));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw TransportError(TransportError::Kind::BrokenPipe, std::string("poll: ") + std::strerror(errno));
    }
    if (r == 0) continue;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      throw TransportError(TransportError::Kind::BrokenPipe, std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) throw TransportError(TransportError::Kind::BrokenPipe, "SUT closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ProcessSut::write_line(const std::string& line) {
  const std::string data = line + "\n";
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(TransportError::Kind::BrokenPipe, std::string("write: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(n);
  }
}

void ProcessSut::reset() {
  write_line("RESET");
  const std::string reply = read_line();
  if (reply == "OK") return;
  if (reply.rfind("ERR", 0) == 0) throw TransportError(TransportError::Kind::Rejected, "RESET rejected: " + reply);
  throw TransportError(TransportError::Kind::Malformed, "malformed reply to RESET: '" + reply + "'");
}

Bits ProcessSut::step(Bits input) {
  write_line("STEP " + alphabet_.input_bits(input));
  const std::string reply = read_line();
  if (reply.rfind("OUT ", 0) == 0)
    if (auto bits = alphabet_.parse_output_bits(std::string_view(reply).substr(4))) return *bits;
  if (reply.rfind("ERR", 0) == 0) throw TransportError(TransportError::Kind::Rejected, "STEP rejected: " + reply);
  throw TransportError(TransportError::Kind::Malformed, "malformed reply to STEP: '" + reply + "'");
}

int ProcessSut::quit() {
  if (closed_) return -1;
  closed_ = true;
  try {
    write_line("QUIT");
  } catch (const TransportError&) {
  }
  ::close(to_child_);
  ::close(from_child_);
  int status = 0;
  for (int i = 0; i < 200; ++i) {
    const pid_t r = ::waitpid(pid_, &status, WNOHANG);
    if (r == pid_) return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    if (r < 0) return -1;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, &status, 0);
  return -1;
}

std::unique_ptr<SutSession> make_builtin_sut(const std::string& name) {
  if (name == "passageway") return std::make_unique<PassagewaySut>(10, false);
  if (name == "passageway-bug") return std::make_unique<PassagewaySut>(10, true);
  if (name == "passageway3") return std::make_unique<PassagewaySut>(3, false);
  if (name == "passageway3-bug") return std::make_unique<PassagewaySut>(3, true);
  if (name == "carriage") return std::make_unique<CarriageSut>(false);
  if (name == "carriage-bug") return std::make_unique<CarriageSut>(true);
  if (name == "i1" || name == "fig6") return std::make_unique<AutomatonSut>(parse_spec(*builtin_spec_text(name)));
  throw SpecError("unknown builtin SUT '" + name + "'");
}

SutFactory make_sut_factory(const std::string& uri, const Alphabet& expected, int timeout_ms) {
  if (uri.rfind("builtin:", 0) == 0) {
    const std::string name = uri.substr(8);
    if (!(make_builtin_sut(name)->alphabet() == expected))
      throw SpecError("builtin SUT '" + name + "' does not match the spec alphabet");
    return [name] { return make_builtin_sut(name); };
  }
  if (uri.rfind("exec:", 0) == 0) {
    const std::string command = uri.substr(5);
    return [command, expected, timeout_ms] { return std::make_unique<ProcessSut>(command, expected, timeout_ms); };
  }
  throw SpecError("SUT URI must start with 'builtin:' or 'exec:', got '" + uri + "'");
}

}  // namespace reqtest
