#pragma once

#include <cstdint>
#include <vector>

#include "reqtest/automaton.hpp"

namespace reqtest {

/// Dense set of input-state indices of a GameGraph.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : bits_(universe, false) {}
  StateSet(std::size_t universe, const std::vector<StateId>& members) : bits_(universe, false) {
    for (StateId s : members) bits_.at(s) = true;
  }

  std::size_t universe() const { return bits_.size(); }
  bool contains(StateId s) const { return s < bits_.size() && bits_[s]; }
  void insert(StateId s) { bits_.at(s) = true; }
  void erase(StateId s) { bits_.at(s) = false; }

  std::size_t count() const {
    std::size_t n = 0;
    for (bool b : bits_) n += b;
    return n;
  }
  bool empty() const { return count() == 0; }

  std::vector<StateId> members() const {
    std::vector<StateId> out;
    for (StateId s = 0; s < bits_.size(); ++s)
      if (bits_[s]) out.push_back(s);
    return out;
  }

  StateSet& operator|=(const StateSet& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] || o.bits_[i];
    return *this;
  }
  StateSet& operator&=(const StateSet& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] && o.bits_[i];
    return *this;
  }
  /// Set difference.
  StateSet& operator-=(const StateSet& o) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] && !o.bits_[i];
    return *this;
  }
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

  bool subset_of(const StateSet& o) const {
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !o.bits_[i]) return false;
    return true;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

 private:
  std::vector<bool> bits_;
};

}  // namespace reqtest
