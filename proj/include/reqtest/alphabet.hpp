#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace reqtest {

/// Bit vector over one phase of the alphabet. Bit j is proposition j of that
/// phase, in declaration order.
using Bits = std::uint32_t;

/// Hard limit of the explicit-state engine on the total number of
/// propositions (inputs + outputs).
inline constexpr std::size_t kMaxProps = 20;

enum class Phase { Input, Output };

/// A full valuation: one input part and one output part.
struct Valuation {
  Bits input = 0;
  Bits output = 0;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// Ordered, disjoint lists of input and output proposition names.
class Alphabet {
 public:
  Alphabet() = default;
  Alphabet(std::vector<std::string> inputs, std::vector<std::string> outputs);

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_outputs() const { return outputs_.size(); }
  std::size_t num_props() const { return inputs_.size() + outputs_.size(); }

  /// Number of valuations of one phase (2^|props of phase|).
  Bits input_space() const { return Bits{1} << inputs_.size(); }
  Bits output_space() const { return Bits{1} << outputs_.size(); }

  struct PropRef {
    Phase phase;
    std::size_t index;
  };
  std::optional<PropRef> find(std::string_view name) const;

  /// Wire/trace form of a phase valuation: one '0'/'1' per proposition in
  /// declaration order.
  std::string input_bits(Bits v) const;
  std::string output_bits(Bits v) const;
  std::string valuation_bits(Valuation v) const { return input_bits(v.input) + output_bits(v.output); }

  /// Inverse of input_bits/output_bits; nullopt on wrong length or bad char.
  std::optional<Bits> parse_input_bits(std::string_view s) const;
  std::optional<Bits> parse_output_bits(std::string_view s) const;

  /// Human-readable set of true propositions, e.g. "{cargo,bwdlimit}".
  std::string describe_input(Bits v) const;
  std::string describe_output(Bits v) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

std::string bits_to_string(Bits v, std::size_t width);
std::optional<Bits> bits_from_string(std::string_view s, std::size_t width);

}  // namespace reqtest
