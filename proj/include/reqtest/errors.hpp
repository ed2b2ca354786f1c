#pragma once

#include <stdexcept>
#include <string>

namespace reqtest {

/// Malformed or inconsistent requirement specification.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// Syntax error in a spec file, with 1-based position.
class ParseError : public SpecError {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : SpecError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A trace could not be run (incomplete automaton, bad valuation).
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& msg, std::size_t step) : std::runtime_error(msg), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// The system under test broke the session contract or the transport failed.
class TransportError : public std::runtime_error {
 public:
  enum class Kind { Handshake, Timeout, BrokenPipe, Malformed, Rejected, Launch };
  TransportError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace reqtest
