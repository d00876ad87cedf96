#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "actomega/derivation.hpp"
#include "actomega/syntax.hpp"

namespace actomega {

class KleeneError : public std::runtime_error {
 public:
  enum class Kind { LanguageViolation, LabelNotContractible, LabelNotWC, NotAnEncoding, MalformedFile };
  KleeneError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// U |- V with single formulas on both sides.
struct Hypothesis {
  Formula u, v;
  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
  Sequent as_sequent() const { return Sequent{{u}, v}; }
};
using HypothesisSet = std::vector<Hypothesis>;

// Only variables, 1, 0, product, plus and star.
bool check_ka_language(const Formula& f);
bool check_ka_language(const Sequent& s);

// U1, ..., Uk |- V becomes U1 . ... . Uk |- V (1 |- V when k = 0). Throws LanguageViolation.
Hypothesis normalize_hypothesis(const Sequent& s);
// One "U |- V" per line; blank lines and '#' comments are skipped. Throws MalformedFile.
HypothesisSet parse_hypotheses(const std::string& text);
HypothesisSet load_hypotheses(const std::string& path);

// !c(1 / !c(V_i / U_i)), !c(V_i / U_i) for each hypothesis, in order, before the goal's antecedent.
Sequent encode_unit_cancellers(const Sequent& goal, const HypothesisSet& hyps, const std::string& c,
                               const SubexpSignature& sig);
// !s(V_i / U_i) for each hypothesis, in order, before the goal's antecedent.
Sequent encode_weakening(const Sequent& goal, const HypothesisSet& hyps, const std::string& s,
                         const SubexpSignature& sig);

// Derivability in KA-omega with the hypotheses as axioms, decided by saturation over the sequents
// built from the subformulas of goal and hypotheses with antecedents of length <= universe_cap
// (raised to the goal's own length). nullopt when a star occurs. Throws UniverseTooLarge.
std::optional<bool> ka_entails_oracle(const Sequent& goal, const HypothesisSet& hyps, std::size_t universe_cap = 3);

// Maps a cut-free derivation of encode_weakening(goal, hyps, s) to a derivation of goal that uses
// hypothesis leaves and cuts instead of the encoded prefix. Throws NotAnEncoding.
Derivation erase_translation(const Derivation& d, const HypothesisSet& hyps);

// Rewrites a cut-free, omega-free derivation of encode_weakening(goal, hyps, s) into a derivation of
// encode_unit_cancellers(goal, hyps, c): every weakening, exchange or final discard of a hypothesis
// bang is replaced by a canceller step. Throws NotAnEncoding.
Derivation weakening_to_cancellers(const Derivation& d, const HypothesisSet& hyps, const std::string& c);

// Checker for KA-omega plus hypothesis leaves and cut. Omega nodes are checked on their
// explicit instances and on template instances up to mode.bound.
CheckReport check_ka(const Derivation& d, const HypothesisSet& hyps, CheckMode mode = CheckMode::Full());

}  // namespace actomega
