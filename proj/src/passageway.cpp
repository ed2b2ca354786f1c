#include "reqtest/passageway.hpp"

#include <sstream>
#include <utility>
#include <vector>

namespace reqtest {

namespace {
constexpr Bits kRight = 1u << 0;
constexpr Bits kUp = 1u << 1;
}  // namespace

Alphabet passageway_alphabet(int rooms) {
  std::vector<std::string> outputs;
  for (int i = 1; i <= rooms; ++i) outputs.push_back("room_" + std::to_string(i));
  outputs.insert(outputs.end(), {"open", "doorstep", "collision"});
  return Alphabet({"right", "up"}, std::move(outputs));
}

PassagewaySut::PassagewaySut(int rooms, bool bug) : rooms_(rooms), bug_(bug), alphabet_(passageway_alphabet(rooms)) {}

void PassagewaySut::reset() { pos_ = {1, 0, kSide - 1}; }

bool PassagewaySut::in_open(Position p) const { return p.room % 2 == 1 ? p.y == 0 : p.y == kSide - 1; }

bool PassagewaySut::at_doorstep(Position p) const { return p.room < rooms_ && p.x == kSide - 1; }

Bits PassagewaySut::observe(Position p, bool collision) const {
  Bits out = Bits{1} << (p.room - 1);
  if (in_open(p)) out |= Bits{1} << rooms_;
  if (at_doorstep(p)) out |= Bits{1} << (rooms_ + 1);
  if (collision) out |= Bits{1} << (rooms_ + 2);
  return out;
}

Bits PassagewaySut::step(Bits input) {
  const bool right = input & kRight;
  const bool up = input & kUp;
  if (right && in_open(pos_) && at_doorstep(pos_)) {
    // The door is open: walk through, keeping the row.
    if (!(bug_ && pos_.room == rooms_ - 1)) pos_ = {pos_.room + 1, 0, pos_.y};
    return observe(pos_, false);
  }
  const int nx = pos_.x + (right ? 1 : -1);
  const int ny = pos_.y + (up ? 1 : -1);
  if (nx < 0 || nx >= kSide || ny < 0 || ny >= kSide) return observe(pos_, true);
  pos_.x = nx;
  pos_.y = ny;
  return observe(pos_, false);
}

std::string passageway_spec_text(int rooms) {
  std::ostringstream os;
  const Alphabet ab = passageway_alphabet(rooms);
  auto exact = [&](int i) {
    std::string g = "room_" + std::to_string(i);
    for (int j = 1; j <= rooms; ++j)
      if (j != i) g += " & !room_" + std::to_string(j);
    return g;
  };
  auto m = [](int k, int i) { return "m" + std::to_string(k) + "_" + std::to_string(i); };

  os << "# Passageway requirement, " << rooms << " rooms.\n";
  os << "# m0_i: not in the open area of room i; m1_i: open, not at doorstep;\n";
  os << "# m2_i: open and at doorstep. Collisions are absorbing but not errors.\n";
  os << "inputs:";
  for (const auto& n : ab.inputs()) os << ' ' << n;
  os << "\noutputs:";
  for (const auto& n : ab.outputs()) os << ' ' << n;
  os << "\nstates:\n";
  os << "  " << m(0, 1) << " in initial\n";
  for (int i = 1; i < rooms; ++i)
    for (int k = 0; k < 3; ++k)
      if (!(i == 1 && k == 0)) os << "  " << m(k, i) << " in\n";
  os << "  goal in\n  collision in\n  err in error\n";

  struct Out {
    std::string name;
    std::vector<std::pair<std::string, std::string>> within;  // (open/doorstep guard, target)
    bool transit = false;
  };
  std::ostringstream trans;
  for (int i = 1; i < rooms; ++i) {
    const bool odd = i % 2 == 1;
    const std::string toward = odd ? "!up" : "up";
    const std::string away = odd ? "up" : "!up";
    const std::string m0 = m(0, i), m1 = m(1, i), m2 = m(2, i);
    const std::vector<std::pair<std::string, Out>> outs = {
        {m0 + " -> " + m0 + ".away [" + away + "]", {m0 + ".away", {{"open", "err"}, {"!open", m0}}}},
        {m0 + " -> " + m0 + ".toward [" + toward + "]",
         {m0 + ".toward", {{"!open", m0}, {"open & !doorstep", m1}, {"open & doorstep", m2}}}},
        {m1 + " -> " + m1 + ".left [!right]",
         {m1 + ".left", {{"open & !doorstep", m1}, {"doorstep", "err"}, {"!open & !doorstep", m0}}}},
        {m1 + " -> " + m1 + ".right [right]",
         {m1 + ".right", {{"open & !doorstep", m1}, {"open & doorstep", m2}, {"!open", m0}}}},
        {m2 + " -> " + m2 + ".left [!right]",
         {m2 + ".left", {{"open & !doorstep", m1}, {"open & doorstep", m2}, {"!open", m0}}}},
        {m2 + " -> " + m2 + ".right [right]", {m2 + ".right", {{"true", "err"}}, true}},
    };
    for (const auto& [input_edge, out] : outs) {
      os << "  " << out.name << " out\n";
      trans << "  " << input_edge << "\n";
      trans << "  " << out.name << " -> collision [collision]\n";
      std::string known = exact(i);
      for (const auto& [g, target] : out.within)
        trans << "  " << out.name << " -> " << target << " [!collision & " << exact(i) << " & (" << g << ")]\n";
      if (out.transit) {
        known += " | " + exact(i + 1);
        if (i + 1 == rooms) {
          trans << "  " << out.name << " -> goal [!collision & " << exact(i + 1) << "]\n";
        } else {
          trans << "  " << out.name << " -> " << m(0, i + 1) << " [!collision & " << exact(i + 1) << " & !open]\n";
          trans << "  " << out.name << " -> " << m(1, i + 1) << " [!collision & " << exact(i + 1)
                << " & open & !doorstep]\n";
          trans << "  " << out.name << " -> " << m(2, i + 1) << " [!collision & " << exact(i + 1)
                << " & open & doorstep]\n";
        }
      }
      if (i > 1) {
        known += " | " + exact(i - 1);
        trans << "  " << out.name << " -> " << m(0, i - 1) << " [!collision & " << exact(i - 1) << " & !open]\n";
        trans << "  " << out.name << " -> " << m(1, i - 1) << " [!collision & " << exact(i - 1)
              << " & open & !doorstep]\n";
        trans << "  " << out.name << " -> " << m(2, i - 1) << " [!collision & " << exact(i - 1)
              << " & open & doorstep]\n";
      }
      trans << "  " << out.name << " -> err [!collision & !(" << known << ")]\n";
    }
  }
  trans << "  goal -> goal [true]\n  collision -> collision [true]\n  err -> err [true]\n";
  os << "transitions:\n" << trans.str();
  os << "objectives:\n  room" << rooms << " = goal\n";
  return os.str();
}

CarriageSut::CarriageSut(bool buggy)
    : buggy_(buggy), alphabet_({"cargo", "bwdlimit", "fwdlimit"}, {"movefwd", "movebwd"}) {}

Bits CarriageSut::step(Bits input) {
  constexpr Bits kCargo = 1u << 0, kBwd = 1u << 1, kFwd = 1u << 2;
  constexpr Bits kMoveFwd = 1u << 0;
  if (!moving_) {
    if ((input & kCargo) && (input & kBwd)) {
      moving_ = true;
      return kMoveFwd;
    }
    return 0;
  }
  if (input & kFwd) {
    moving_ = false;
    // The faulty controller reacts to the limit switch one step late.
    return buggy_ ? kMoveFwd : 0;
  }
  return kMoveFwd;
}

}  // namespace reqtest
