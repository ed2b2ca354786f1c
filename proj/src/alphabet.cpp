#include "reqtest/alphabet.hpp"

#include <set>
#include <stdexcept>

#include "reqtest/errors.hpp"

namespace reqtest {

namespace {

std::string describe(const std::vector<std::string>& names, Bits v) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (v & (Bits{1} << i)) {
      if (!first) out += ',';
      out += names[i];
      first = false;
    }
  }
  return out + "}";
}

}  // namespace

Alphabet::Alphabet(std::vector<std::string> inputs, std::vector<std::string> outputs)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)) {
  std::set<std::string> seen;
  for (const auto* list : {&inputs_, &outputs_}) {
    for (const auto& name : *list) {
      if (!seen.insert(name).second) throw SpecError("duplicate proposition '" + name + "'");
    }
  }
  if (num_props() > kMaxProps) {
    throw SpecError("alphabet has " + std::to_string(num_props()) + " propositions; the explicit engine supports at most " +
                    std::to_string(kMaxProps));
  }
}

std::optional<Alphabet::PropRef> Alphabet::find(std::string_view name) const {
  for (std::size_t i = 0; i < inputs_.size(); ++i)
    if (inputs_[i] == name) return PropRef{Phase::Input, i};
  for (std::size_t i = 0; i < outputs_.size(); ++i)
    if (outputs_[i] == name) return PropRef{Phase::Output, i};
  return std::nullopt;
}

std::string bits_to_string(Bits v, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i)
    if (v & (Bits{1} << i)) s[i] = '1';
  return s;
}

std::optional<Bits> bits_from_string(std::string_view s, std::size_t width) {
  if (s.size() != width) return std::nullopt;
  Bits v = 0;
  for (std::size_t i = 0; i < width; ++i) {
    if (s[i] == '1')
      v |= Bits{1} << i;
    else if (s[i] != '0')
      return std::nullopt;
  }
  return v;
}

std::string Alphabet::input_bits(Bits v) const { return bits_to_string(v, inputs_.size()); }
std::string Alphabet::output_bits(Bits v) const { return bits_to_string(v, outputs_.size()); }
std::optional<Bits> Alphabet::parse_input_bits(std::string_view s) const { return bits_from_string(s, inputs_.size()); }
std::optional<Bits> Alphabet::parse_output_bits(std::string_view s) const { return bits_from_string(s, outputs_.size()); }
std::string Alphabet::describe_input(Bits v) const { return describe(inputs_, v); }
std::string Alphabet::describe_output(Bits v) const { return describe(outputs_, v); }

}  // namespace reqtest
