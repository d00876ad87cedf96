#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "actomega/derivation.hpp"

namespace actomega {

// Cut of left (Pi |- A) into right (Gamma, A, Delta |- B) at antecedent index `position`.
struct CutConfiguration {
  Derivation left;
  Derivation right;
  std::size_t position = 0;
};

// Mix of left (Pi |- !c A, root bang-r) into the occurrences of !c A at `positions` of the right
// goal; Pi takes the place of occurrence number target_slot.
struct MixConfiguration {
  Derivation left;
  Derivation right;
  std::vector<std::size_t> positions;
  std::size_t target_slot = 0;
};

class CutElimError : public std::runtime_error {
 public:
  enum class Kind { NonUniformTemplate, InvariantViolation, BadConfiguration };
  CutElimError(Kind k, const std::string& msg, std::vector<std::size_t> path = {})
      : std::runtime_error(msg), kind_(k), path_(std::move(path)) {}
  Kind kind() const { return kind_; }
  // premise indices from the root of the input to eliminate_all
  const std::vector<std::size_t>& path() const { return path_; }

 private:
  Kind kind_;
  std::vector<std::size_t> path_;
};

// Induction measure of one elimination call: cut formula complexity, then left and right rank.
struct ElimMeasure {
  std::size_t complexity = 0;
  std::size_t left_rank = 0;
  std::size_t right_rank = 0;
  friend auto operator<=>(const ElimMeasure&, const ElimMeasure&) = default;
};

struct CutElimStats {
  std::vector<std::string> trace;    // one line per elimination step
  std::size_t calls = 0;
  std::size_t measure_checks = 0;    // recursive calls compared against their caller
  std::size_t measure_violations = 0;
  std::size_t partial_nodes = 0;     // omega nodes left without a template
};

struct CutElimOptions {
  // omega nodes are transformed pointwise on n = 0..omega_bound+1 and then generalized again
  std::size_t omega_bound = 5;
  // throw NonUniformTemplate instead of emitting a partial omega node
  bool strict_templates = false;
  CutElimStats* stats = nullptr;
};

Derivation eliminate_one_cut(const CutConfiguration& cfg, const SubexpSignature& sig, const CutElimOptions& opts = {});
Derivation eliminate_mix(const MixConfiguration& cfg, const SubexpSignature& sig, const CutElimOptions& opts = {});
// Removes every cut and mix, innermost first.
Derivation eliminate_all(const Derivation& d, const SubexpSignature& sig, const CutElimOptions& opts = {});

}  // namespace actomega
