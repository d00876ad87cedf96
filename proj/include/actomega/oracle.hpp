#pragma once

#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "actomega/syntax.hpp"

namespace actomega {

class UniverseTooLarge : public std::runtime_error {
 public:
  UniverseTooLarge(std::size_t size, std::size_t cap);
  std::size_t size() const { return size_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t size_, cap_;
};

struct OracleEntry {
  bool derivable = false;
  std::size_t rank = 0;  // stage at which the sequent first appears; 0 when not derivable
};

struct OracleReport {
  std::unordered_map<Sequent, OracleEntry, SequentHash> table;
  // True when the universe is closed under cut-free premises, no cut or extra axioms
  // are involved, and the signature is contraction-free: derivability is then exact.
  bool exact = false;
  std::size_t stages = 0;

  const OracleEntry* find(const Sequent& s) const;
  bool derivable(const Sequent& s) const;
};

struct OracleOptions {
  std::size_t universe_cap = 2'000'000;
};

// Least fixed point of the one-step derivability operator restricted to `universe`:
// a rule instance counts when its conclusion and all premises lie in the universe.
// The omega rule is never used; extra_axioms act as premise-free rules.
OracleReport fixpoint_oracle(const std::vector<Sequent>& universe, const SubexpSignature& sig,
                             const std::vector<Sequent>& extra_axioms, bool allow_cut, OracleOptions opts = {});

// Every sequent over the given formulas with antecedent length <= max_len.
std::vector<Sequent> sequents_over(const std::vector<Formula>& formulas, std::size_t max_len);

// Subformula closure (including the formulas themselves), deduplicated, sorted.
std::vector<Formula> subformula_closure(const std::vector<Formula>& roots);

}  // namespace actomega
