#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actomega/derivation.hpp"
#include "actomega/syntax.hpp"

namespace actomega {

struct SearchBudget {
  std::size_t omega_bound = 5;        // omega premises n = 0..omega_bound are sampled
  std::optional<std::size_t> depth;   // generalized applications per branch; required when C is nonempty
  std::size_t perm_window = 4;        // longest permutation suffix tried per step
  // Count an omega node as proved when a template generalizing the samples validates.
  // Off by default: such results are reported as Unknown(OmegaSampled) with the candidate attached.
  bool accept_templates = false;
  unsigned jobs = 1;                  // root branches explored concurrently
  // Refute sequents falsified by a valuation in binary relations on one or two points.
  bool model_filter = true;
};

enum class Verdict { Derivable, NotDerivable, Unknown };
enum class UnknownReason { None, OmegaSampled, BudgetExhausted, PermWindow };

const char* verdict_name(Verdict v);
const char* reason_name(UnknownReason r);

struct SearchResult {
  Verdict verdict = Verdict::Unknown;
  UnknownReason reason = UnknownReason::None;
  // The derivation for Derivable; for Unknown(OmegaSampled) the candidate whose omega
  // nodes carry the sampled instances (and a template when one was found).
  std::optional<Derivation> derivation;

  bool derivable() const { return verdict == Verdict::Derivable; }
  std::string to_string() const;
};

class SearchError : public std::runtime_error {
 public:
  enum class Kind { MissingDepthBudget, StarPresent, ContractionPresent };
  SearchError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A core rule with the permutations applied below it.
struct GeneralizedApplication {
  RuleInstance core;
  std::vector<RuleInstance> perm_suffix;  // from the conclusion upward
  Sequent core_conclusion;                // the conclusion after the permutations
  std::vector<Sequent> premises;          // empty for axioms and for the omega rule
  bool omega = false;

  // Premise n of the omega rule.
  Sequent omega_premise(std::size_t n) const;
};

std::vector<GeneralizedApplication> applicable_rules(const Sequent& s, const SubexpSignature& sig, std::size_t window);

// Throws SignatureError(UnknownLabel) and SearchError(MissingDepthBudget).
SearchResult prove(const Sequent& s, const SubexpSignature& sig, const SearchBudget& budget = {});

// Complete decision for star-free sequents under a contraction-free signature.
// Throws SearchError(StarPresent / ContractionPresent).
bool decide_starfree(const Sequent& s, const SubexpSignature& sig);

}  // namespace actomega
