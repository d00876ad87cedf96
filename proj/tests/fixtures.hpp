#pragma once

// Shared builders for cut and mix elimination tests.

#include <functional>
#include <string>
#include <vector>

#include "actomega/cutelim.hpp"
#include "actomega/search.hpp"
#include "support.hpp"

namespace fixtures {

using namespace actomega;

inline Derivation found(const Sequent& s, const SubexpSignature& sig, std::size_t depth = 8) {
  SearchBudget b;
  b.depth = depth;
  b.accept_templates = true;
  auto r = prove(s, sig, b);
  if (r.verdict != Verdict::Derivable) throw std::runtime_error("fixture not derivable: " + print_sequent(s));
  return *r.derivation;
}

inline Derivation found(const char* s, const SubexpSignature& sig, std::size_t depth = 8) {
  return found(parse_sequent(s), sig, depth);
}

inline Derivation node(const char* concl, RuleInstance r, std::vector<Derivation> prem = {}) {
  return Derivation::make(parse_sequent(concl), std::move(r), std::move(prem));
}

// Cut node whose right premise has the cut formula at antecedent index pos.
inline Derivation cut_node(const Derivation& l, const Derivation& r, std::size_t pos) {
  const Sequent& rs = r.conclusion();
  Sequent s{{}, rs.succedent};
  s.antecedent.assign(rs.antecedent.begin(), rs.antecedent.begin() + pos);
  const auto& pi = l.conclusion().antecedent;
  s.antecedent.insert(s.antecedent.end(), pi.begin(), pi.end());
  s.antecedent.insert(s.antecedent.end(), rs.antecedent.begin() + pos + 1, rs.antecedent.end());
  return Derivation::make(s, RuleInstance::cut(pos, pi.size(), l.conclusion().succedent), {l, r});
}

// ------------------------------------------------------------------ mix

// X = !{c}(p . q) with Pi = !{c}p, !{c}q, so every Pi move takes two structural steps.
inline const char* kX = "!{c}(p . q)";

inline Derivation mix_left() {
  auto pq = node("!{c}p, !{c}q |- p . q", RuleInstance::simple(RuleId::TensorR, 1),
                 {node("!{c}p |- p", RuleInstance::simple(RuleId::BangL, 0), {node("p |- p", RuleInstance::simple(RuleId::Id))}),
                  node("!{c}q |- q", RuleInstance::simple(RuleId::BangL, 0), {node("q |- q", RuleInstance::simple(RuleId::Id))})});
  return node("!{c}p, !{c}q |- !{c}(p . q)", RuleInstance::simple(RuleId::BangR), {pq});
}

inline std::vector<Formula> pi_formulas() { return {parse_formula("!{c}p"), parse_formula("!{c}q")}; }

struct MixCase {
  std::string name;
  SubexpSignature sig;
  MixConfiguration cfg;
  std::string trace_tag;  // expected first trace line prefix
  // checks the root of the output against the expected shape; returns "" or a complaint
  std::function<std::string(const Derivation&)> shape;
};

// Follows `count` nodes of rule r (or r2) from the root; returns the node below them.
inline std::optional<Derivation> skip_chain(const Derivation& d, std::size_t count, RuleId r, RuleId r2) {
  Derivation cur = d;
  for (std::size_t i = 0; i < count; ++i) {
    if (cur.is_omega() || (cur.rule().rule != r && cur.rule().rule != r2) || cur.premises().size() != 1) return std::nullopt;
    cur = cur.premises()[0];
  }
  return cur;
}

inline std::vector<MixCase> mix_cases() {
  const auto sig_c = parse_signature("labels: c\nC: c\n");
  const auto sig_wce = parse_signature("labels: c\nW: c\nC: c\nE: c\n");
  const std::string X = kX;
  std::vector<MixCase> out;

  {  // right axiom: the mix is a cut against an identity
    MixCase m{"right axiom", sig_c, {mix_left(), node("!{c}(p . q) |- !{c}(p . q)", RuleInstance::simple(RuleId::Id)), {0}, 0},
              "mix case1", nullptr};
    Derivation left = m.cfg.left;
    m.shape = [left](const Derivation& d) { return same_shape(d, left) ? "" : "output is not the left derivation"; };
    out.push_back(m);
  }
  {  // branching star-r: five occurrences split 2 / 0 / 3 over three segments
    Sequent b1 = parse_sequent((X + ", " + X + " |- (p . q)*").c_str());
    Sequent b3 = parse_sequent((X + ", " + X + ", " + X + " |- (p . q)*").c_str());
    Derivation d1 = found(b1, sig_c), d2 = node("(p . q)* |- (p . q)*", RuleInstance::simple(RuleId::Id));
    Derivation d3 = found(b3, sig_c);
    Sequent concl = parse_sequent((X + ", " + X + ", (p . q)*, " + X + ", " + X + ", " + X + " |- (p . q)**").c_str());
    Derivation right = Derivation::make(concl, RuleInstance::star_r({2, 1, 3}), {d1, d2, d3});
    MixCase m{"branching star-r", sig_c, {mix_left(), right, {0, 1, 3, 4, 5}, 3}, "mix case2", nullptr};
    m.shape = [d2](const Derivation& d) -> std::string {
      // contraction of the extra Pi copy, one step per formula of Pi, then the star-r itself
      auto below = skip_chain(d, 2, RuleId::NContr1, RuleId::NContr2);
      if (!below) return "root is not two ncontr steps";
      if (below->is_omega() || below->rule().rule != RuleId::StarR) return "no star-r below the contractions";
      if (below->premises().size() != 3) return "star-r does not have three premises";
      if (!same_shape(below->premises()[1], d2)) return "middle segment was touched";
      auto pi = pi_formulas();
      std::vector<Formula> want{pi[0], pi[1], parse_formula("(p . q)*"), pi[0], pi[1]};
      if (below->conclusion().antecedent != want) return "two Pi copies expected above the contraction";
      if (below->premises()[0].conclusion().antecedent != std::vector<Formula>{pi[0], pi[1]})
        return "first branch does not carry its own Pi";
      return "";
    };
    out.push_back(m);
  }
  {  // principal: three occurrences, the middle one derelicted, Pi into the first
    const std::string A = "p . q";
    const std::string B = " |- (((p . q) . r) . (p . q)) . (p . q)";
    Sequent up = parse_sequent((X + ", r, " + A + ", " + X + B).c_str());
    Sequent concl = parse_sequent((X + ", r, " + X + ", " + X + B).c_str());
    Derivation right = Derivation::make(concl, RuleInstance::simple(RuleId::BangL, 2), {found(up, sig_c)});
    MixCase m{"principal dereliction", sig_c, {mix_left(), right, {0, 2, 3}, 0}, "mix case3", nullptr};
    m.shape = [](const Derivation& d) -> std::string {
      auto below = skip_chain(d, 2, RuleId::NContr1, RuleId::NContr2);
      if (!below) return "root is not two ncontr steps";
      auto pi = pi_formulas();
      std::vector<Formula> want{pi[0], pi[1], parse_formula("r"), pi[0], pi[1]};
      if (below->conclusion().antecedent != want) return "cut conclusion with two Pi copies expected";
      return "";
    };
    out.push_back(m);
  }
  {  // weakened active instance with another instance present
    Sequent up = parse_sequent(("r, " + X + ", " + X + " |- (r . (p . q)) . (p . q)").c_str());
    Sequent concl = parse_sequent((X + ", r, " + X + ", " + X + " |- (r . (p . q)) . (p . q)").c_str());
    Derivation right = Derivation::make(concl, RuleInstance::simple(RuleId::Weak, 0), {found(up, sig_wce)});
    MixCase m{"weakened active instance", sig_wce, {mix_left(), right, {0, 2, 3}, 0}, "mix case4", nullptr};
    m.shape = [](const Derivation& d) -> std::string {
      auto below = skip_chain(d, 2, RuleId::Perm1, RuleId::Perm2);
      if (!below) return "root is not two perm steps";
      auto pi = pi_formulas();
      std::vector<Formula> want{parse_formula("r"), pi[0], pi[1]};
      if (below->conclusion().antecedent != want) return "Pi after Delta_1 expected above the perms";
      return "";
    };
    out.push_back(m);
  }
  return out;
}

// ------------------------------------------------------------------ random cuts

// Antecedents that prove A by its right rule, used as a principal left premise.
inline std::vector<std::vector<Formula>> right_intro_contexts(const Formula& a) {
  switch (a.kind()) {
    case Connective::Tensor: return {{a.left(), a.right()}};
    case Connective::Plus: return {{a.left()}, {a.right()}};
    case Connective::Star: return {{}, {a.operand()}, {a.operand(), a.operand()}};
    case Connective::One: return {{}};
    case Connective::With: return {{Formula::with(a.right(), a.left())}};
    case Connective::Limp: return {{Formula::limp(Formula::one(), Formula::one()), a}};
    case Connective::Bang: return {{a}};
    default: return {{a}};
  }
}

struct CutCase {
  CutConfiguration cfg;
  Sequent goal;  // Gamma, Pi, Delta |- B
};

// Pairs search-found derivations: a right goal Gamma, A, Delta |- B and a left goal Pi |- A.
inline std::vector<CutCase> random_cuts(std::uint64_t seed, std::size_t count, const SubexpSignature& sig,
                                        const std::vector<std::string>& labels, bool stars) {
  test_support::FormulaGen g(seed);
  g.labels = labels;
  g.stars = stars;
  std::vector<CutCase> out;
  SearchBudget b;
  b.depth = 5;
  b.accept_templates = true;
  for (int tries = 0; out.size() < count && tries < 200000; ++tries) {
    Sequent rs = g.sequent(3, 5);
    if (rs.antecedent.empty()) continue;
    auto rr = prove(rs, sig, b);
    if (rr.verdict != Verdict::Derivable) continue;
    std::size_t pos = g.pick(rs.antecedent.size());
    const Formula& a = rs.antecedent[pos];
    std::vector<std::vector<Formula>> pis = right_intro_contexts(a);
    pis.push_back({g.gen(3), g.gen(2)});
    pis.push_back({g.gen(4)});
    const auto& pi = pis[g.pick(pis.size())];
    auto lr = prove(Sequent{pi, a}, sig, b);
    if (lr.verdict != Verdict::Derivable) continue;
    Sequent goal{{}, rs.succedent};
    goal.antecedent.assign(rs.antecedent.begin(), rs.antecedent.begin() + pos);
    goal.antecedent.insert(goal.antecedent.end(), pi.begin(), pi.end());
    goal.antecedent.insert(goal.antecedent.end(), rs.antecedent.begin() + pos + 1, rs.antecedent.end());
    out.push_back({CutConfiguration{*lr.derivation, *rr.derivation, pos}, goal});
  }
  return out;
}

// Cuts whose premises carry 1* omega templates.
inline std::vector<CutCase> one_star_cuts(const SubexpSignature& sig) {
  std::vector<CutCase> out;
  auto add = [&](const char* left, const char* right, std::size_t pos, const char* goal) {
    out.push_back({CutConfiguration{found(left, sig), found(right, sig), pos}, parse_sequent(goal)});
  };
  add("|- 1*", "1* |- 1", 0, "|- 1");
  add("1, 1 |- 1*", "1* |- 1", 0, "1, 1 |- 1");
  add("1* |- 1", "p, 1, q |- p . q", 1, "p, 1*, q |- p . q");
  add("1*, p |- p", "q, p |- q . p", 1, "q, 1*, p |- q . p");
  add("1* |- 1*", "1*, p |- p", 0, "1*, p |- p");
  add("1 |- 1*", "1*, p |- p", 0, "1, p |- p");
  return out;
}

}  // namespace fixtures
