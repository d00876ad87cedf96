#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "actomega/syntax.hpp"

namespace actomega::detail {

// Binary relations on one and two points. Every rule of the calculus is sound there once
// !A is read as 1 when 1 <= A and as 0 otherwise, so a falsifying valuation refutes a sequent.
class SmallModels {
 public:
  // valuations of `vars`; the two-point family is skipped when it would exceed max_valuations.
  // `wide` adds three-point valuations: all of them for one variable, reflexive or irreflexive
  // relations for two.
  explicit SmallModels(const std::vector<std::string>& vars, bool wide = false, std::size_t max_valuations = 4096);
  bool refutes(const Sequent& s);

 private:
  struct Val {
    std::uint8_t n;
    std::unordered_map<std::string, std::uint16_t> env;
  };
  const std::vector<std::uint16_t>& eval(const Formula& f);

  std::vector<Val> vals_;
  std::unordered_map<Formula, std::vector<std::uint16_t>, FormulaHash> cache_;
};

std::vector<std::string> variables_of(const Sequent& s);

}  // namespace actomega::detail
