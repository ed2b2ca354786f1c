#pragma once

#include <string>

#include "reqtest/sut.hpp"

namespace reqtest {

/// Robot crossing `rooms` rooms of 4x4 cells placed left to right. It starts
/// in room 1 at column 0, row 3.
///
/// Inputs `right up` pick one of the four diagonal moves. Outputs are
/// `room_1 .. room_N open doorstep collision`. The open area is row 0 in odd
/// rooms and row 3 in even rooms; the doorstep is column 3 of every room but
/// the last. A room's right door is open iff the robot is in that room's open
/// area. Moving right from open∧doorstep enters the next room at column 0 in
/// the same row. Any other move leaving the grid is a collision and leaves the
/// robot in place. With `bug`, the transit out of room N-1 (room 9 of 10) is
/// suppressed.
class PassagewaySut : public SutSession {
 public:
  static constexpr int kSide = 4;

  explicit PassagewaySut(int rooms = 10, bool bug = false);

  const Alphabet& alphabet() const override { return alphabet_; }
  void reset() override;
  Bits step(Bits input) override;

  struct Position {
    int room;  // 1-based
    int x;     // column, 0 = left
    int y;     // row, 0 = bottom
    friend bool operator==(const Position&, const Position&) = default;
  };
  Position position() const { return pos_; }
  void set_position(Position p) { pos_ = p; }
  int rooms() const { return rooms_; }

  bool in_open(Position p) const;
  bool at_doorstep(Position p) const;
  Bits observe(Position p, bool collision) const;

 private:
  int rooms_;
  bool bug_;
  Alphabet alphabet_;
  Position pos_{1, 0, 3};
};

Alphabet passageway_alphabet(int rooms);

/// Requirement automaton for the passageway: per room i < N the states
/// m0_i (not in open), m1_i (open, not at doorstep), m2_i (open and doorstep);
/// `goal` for the last room, an absorbing `collision` state and `err`.
/// Objective `room<N>` = {goal}.
std::string passageway_spec_text(int rooms);

/// Bundled carriage controller. The buggy variant keeps `movefwd` asserted
/// for one step after reaching the forward limit.
class CarriageSut : public SutSession {
 public:
  explicit CarriageSut(bool buggy = false);
  const Alphabet& alphabet() const override { return alphabet_; }
  void reset() override { moving_ = false; }
  Bits step(Bits input) override;

 private:
  bool buggy_;
  bool moving_ = false;
  Alphabet alphabet_;
};

}  // namespace reqtest
