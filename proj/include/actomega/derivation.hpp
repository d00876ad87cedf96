#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "actomega/syntax.hpp"

namespace actomega {

enum class RuleId : std::uint8_t {
  Id, LimpL, LimpR, RimpL, RimpR, TensorL, TensorR, OneL, OneR, ZeroL,
  PlusL, PlusR, WithL, WithR, StarL, StarR, BangL, BangR,
  Weak, Perm1, Perm2, NContr1, NContr2, Cut, Mix,
  Hyp  // hypothesis leaf; only meaningful relative to a hypothesis set
};

// Exchange-format name, e.g. "limp-l", "star-l-omega".
const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);

// One rule application, read bottom-up. Antecedent indices refer to the conclusion unless noted.
//   ZeroL, TensorL, OneL, PlusL, BangL, Weak, StarL: pos = principal formula
//   LimpL:  pos = A\B, Pi = [aux, pos)
//   RimpL:  pos = B/A, Pi = (pos, aux)
//   TensorR: left premise gets [0, pos)
//   PlusR: choice 1|2.  WithL: pos, choice 1|2
//   StarR: parts = lengths of Pi_1..Pi_n (empty for the axiom)
//   Perm1/Perm2: the bang at pos moves to index aux of the premise (Perm1 iff aux > pos)
//   NContr1/NContr2: a copy of the bang at pos is inserted at premise index aux (NContr1 iff aux > pos)
//   Cut: Pi = [pos, pos + aux), formula = cut formula
//   Mix: formula = !cA, aux = |Pi|, parts = occurrence indices in the right premise,
//        choice = which occurrence's place Pi takes in the conclusion
struct RuleInstance {
  RuleId rule = RuleId::Id;
  std::size_t pos = 0;
  std::size_t aux = 0;
  int choice = 0;
  std::vector<std::size_t> parts;
  std::optional<Formula> formula;

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;

  static RuleInstance simple(RuleId r, std::size_t pos = 0, std::size_t aux = 0, int choice = 0);
  static RuleInstance star_r(std::vector<std::size_t> parts);
  static RuleInstance cut(std::size_t start, std::size_t len, Formula a);
  static RuleInstance mix(Formula bang, std::size_t pi_len, std::vector<std::size_t> positions, int target);
};

std::string describe(const RuleInstance& r);

struct Backward {
  bool ok = false;
  std::string reason;
  std::vector<Sequent> premises;
};

// Premises of r read backward from concl; ok=false with a reason if r does not apply.
// StarL yields ok with no premises; use omega_premise for its instances.
// Passing sig=nullptr skips the signature conditions.
Backward backward(const Sequent& concl, const RuleInstance& r, const SubexpSignature* sig);

// Gamma, A^n, Delta |- C for the star at antecedent index pos.
Sequent omega_premise(const Sequent& concl, std::size_t pos, std::size_t n);

// ------------------------------------------------------------------ templates

// Linear expression b + sum_l coef[l] * level_l + j_coef * j.
// Level 0 is the parameter of the outermost enclosing template, j the counter of the enclosing Iter.
struct Lin {
  std::int64_t constant = 0;
  std::vector<std::int64_t> coef;
  std::int64_t j_coef = 0;

  static Lin of(std::int64_t c) { return Lin{c, {}, 0}; }
  std::int64_t eval(std::span<const std::int64_t> env, std::int64_t j = 0) const;
  bool is_constant() const;
  friend bool operator==(const Lin& a, const Lin& b);
};

struct Schema;
using SchemaPtr = std::shared_ptr<const Schema>;

struct RuleSchema {
  RuleId rule = RuleId::Id;
  Lin pos, aux;
  int choice = 0;
  std::vector<Lin> parts;  // Mix occurrence indices; unused for StarR (see StarGroup)
  std::optional<Formula> formula;
  friend bool operator==(const RuleSchema&, const RuleSchema&) = default;
};

struct StarGroup {
  Lin count;
  Lin length;
  SchemaPtr premise;
};

struct OmegaTemplate;

struct Schema {
  enum class Kind { Step, Iter, StarSplit, Omega };
  Kind kind = Kind::Step;
  RuleSchema rule;                       // Step; Iter (per-step params, may use j); Omega (pos)
  Lin count;                             // Iter: number of stacked applications
  std::vector<SchemaPtr> premises;       // Step premises; Iter: the single body above the stack
  std::vector<StarGroup> groups;         // StarSplit
  std::shared_ptr<const OmegaTemplate> nested;  // Omega: its own parameter is one level deeper
};

// Premise family of an omega node: body is a schema over level 0 = n.
struct OmegaTemplate {
  std::string param = "n";
  SchemaPtr body;
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Derivation;

// Builds the plain derivation of `concl` described by `s` under the level values env.
// Throws TemplateError (including NegativeCount) when a step does not apply.
Derivation build_schema(const Schema& s, const Sequent& concl, std::span<const std::int64_t> env);

// Substitutes v for level 0 and shifts the remaining levels down.
SchemaPtr bind_outer(const SchemaPtr& s, std::int64_t v);
// Shifts all levels up by one (level 0 becomes unused).
SchemaPtr shift_levels(const SchemaPtr& s);

// ------------------------------------------------------------------ derivations

class Derivation {
 public:
  Derivation();  // an Id leaf on "1 |- 1"; only useful as a placeholder

  static Derivation make(Sequent concl, RuleInstance r, std::vector<Derivation> premises = {});
  // Omega node for the star at antecedent index pos. instances[n] is the explicit premise for n.
  // A null template marks a partial family known only through the explicit instances.
  static Derivation omega(Sequent concl, std::size_t pos, std::shared_ptr<const OmegaTemplate> tmpl,
                          std::vector<Derivation> instances);

  const Sequent& conclusion() const;
  const RuleInstance& rule() const;
  // Finite premises; for omega nodes the explicit instances.
  const std::vector<Derivation>& premises() const;
  bool is_omega() const;
  bool is_partial() const { return is_omega() && !omega_template(); }
  const std::shared_ptr<const OmegaTemplate>& omega_template() const;
  // Premise n of an omega node: explicit if present, else the template instance.
  Derivation instance(std::size_t n) const;

  bool same_node(const Derivation& o) const { return node_ == o.node_; }
  const void* identity() const { return node_.get(); }

 private:
  struct Node;
  explicit Derivation(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Derivation instantiate_template(const OmegaTemplate& t, const Sequent& omega_conclusion, std::size_t pos, std::int64_t k);

inline const Sequent& goal(const Derivation& d) { return d.conclusion(); }

bool is_cut_free(const Derivation& d);
bool is_cut_free(const Schema& s);

// Finite height (a leaf has height 1). Omega nodes count the explicit instances only.
std::size_t height(const Derivation& d);
std::size_t node_count(const Derivation& d);

// Same rule instances everywhere (conclusions ignored).
bool same_shape(const Derivation& a, const Derivation& b);
bool same_schema(const Schema& a, const Schema& b);

// ------------------------------------------------------------------ checking

struct CheckMode {
  bool full = true;
  std::size_t bound = 5;  // omega instances 0..bound are checked
  static CheckMode Full() { return {true, 5}; }
  static CheckMode Bounded(std::size_t k) { return {false, k}; }
};

struct CheckReport {
  enum class Status { Valid, ValidUpTo, Invalid };
  Status status = Status::Valid;
  std::size_t bound = 0;         // ValidUpTo
  std::vector<std::size_t> path; // Invalid: premise indices from the root (omega instance n counts as index n)
  std::string reason;

  bool ok() const { return status != Status::Invalid; }
  std::string to_string() const;
};

CheckReport check(const Derivation& d, const SubexpSignature& sig, CheckMode mode = CheckMode::Full());

// Template synthesis: generalizes the proofs of the last two instances to a schema and validates it
// on every n in [0, validate_upto]. Returns nullptr when no uniform schema fits.
std::shared_ptr<const OmegaTemplate> synthesize_template(const Sequent& omega_conclusion, std::size_t pos,
                                                         const std::vector<Derivation>& instances,
                                                         const SubexpSignature& sig, std::size_t validate_upto);

}  // namespace actomega
