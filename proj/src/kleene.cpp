#include "actomega/kleene.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "actomega/oracle.hpp"
#include "bank.hpp"

namespace actomega {

namespace {

const SubexpSignature& empty_signature() {
  static const SubexpSignature sig = SubexpSignature::make({}, {}, {}, {}, {});
  return sig;
}

void require_ka(const Sequent& s, const char* what) {
  if (!check_ka_language(s))
    throw KleeneError(KleeneError::Kind::LanguageViolation,
                      std::string(what) + " is outside the Kleene algebra language: " + print_sequent(s));
}

void require_ka(const HypothesisSet& hyps) {
  for (const auto& h : hyps) require_ka(h.as_sequent(), "hypothesis");
}

Sequent with_prefix(std::vector<Formula> prefix, const Sequent& goal) {
  prefix.insert(prefix.end(), goal.antecedent.begin(), goal.antecedent.end());
  return Sequent{std::move(prefix), goal.succedent};
}

}  // namespace

bool check_ka_language(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var:
    case Connective::One:
    case Connective::Zero: return true;
    case Connective::Tensor:
    case Connective::Plus: return check_ka_language(f.left()) && check_ka_language(f.right());
    case Connective::Star: return check_ka_language(f.operand());
    default: return false;
  }
}

bool check_ka_language(const Sequent& s) {
  return check_ka_language(s.succedent) &&
         std::all_of(s.antecedent.begin(), s.antecedent.end(), [](const Formula& f) { return check_ka_language(f); });
}

Hypothesis normalize_hypothesis(const Sequent& s) {
  require_ka(s, "hypothesis");
  if (s.antecedent.empty()) return {Formula::one(), s.succedent};
  Formula u = s.antecedent[0];
  for (std::size_t i = 1; i < s.antecedent.size(); ++i) u = Formula::tensor(u, s.antecedent[i]);
  return {u, s.succedent};
}

HypothesisSet parse_hypotheses(const std::string& text) {
  HypothesisSet out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(normalize_hypothesis(parse_sequent(line)));
    } catch (const ParseError& e) {
      throw KleeneError(KleeneError::Kind::MalformedFile, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

HypothesisSet load_hypotheses(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open hypothesis file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_hypotheses(ss.str());
}

Sequent encode_unit_cancellers(const Sequent& goal, const HypothesisSet& hyps, const std::string& c,
                               const SubexpSignature& sig) {
  require_ka(goal, "goal");
  require_ka(hyps);
  if (!sig.has_label(c) || !sig.contractible(c))
    throw KleeneError(KleeneError::Kind::LabelNotContractible, "label " + c + " is not contractible");
  std::vector<Formula> prefix;
  for (const auto& h : hyps) {
    Formula inner = Formula::bang(c, Formula::rimp(h.v, h.u));
    prefix.push_back(Formula::bang(c, Formula::rimp(Formula::one(), inner)));
    prefix.push_back(inner);
  }
  return with_prefix(std::move(prefix), goal);
}

Sequent encode_weakening(const Sequent& goal, const HypothesisSet& hyps, const std::string& s,
                         const SubexpSignature& sig) {
  require_ka(goal, "goal");
  require_ka(hyps);
  if (!sig.has_label(s) || !sig.weakenable(s) || !sig.contractible(s))
    throw KleeneError(KleeneError::Kind::LabelNotWC, "label " + s + " must allow weakening and contraction");
  std::vector<Formula> prefix;
  for (const auto& h : hyps) prefix.push_back(Formula::bang(s, Formula::rimp(h.v, h.u)));
  return with_prefix(std::move(prefix), goal);
}

std::optional<bool> ka_entails_oracle(const Sequent& goal, const HypothesisSet& hyps, std::size_t universe_cap) {
  require_ka(goal, "goal");
  require_ka(hyps);
  std::vector<Formula> roots(goal.antecedent);
  roots.push_back(goal.succedent);
  std::vector<Sequent> axioms;
  for (const auto& h : hyps) {
    roots.push_back(h.u);
    roots.push_back(h.v);
    axioms.push_back(h.as_sequent());
  }
  if (!std::all_of(roots.begin(), roots.end(), [](const Formula& f) { return f.star_free(); })) return std::nullopt;
  auto closure = subformula_closure(roots);
  auto universe = sequents_over(closure, std::max(universe_cap, goal.antecedent.size()));
  auto rep = fixpoint_oracle(universe, empty_signature(), axioms, true);
  return rep.derivable(goal);
}

// ------------------------------------------------------------------ erasure

namespace {

bool erased(const Formula& f) { return !check_ka_language(f); }

Sequent erase_sequent(const Sequent& s) {
  Sequent out;
  out.succedent = s.succedent;
  for (const auto& f : s.antecedent)
    if (!erased(f)) out.antecedent.push_back(f);
  return out;
}

std::size_t erased_index(const Sequent& s, std::size_t i) {
  std::size_t k = 0;
  for (std::size_t j = 0; j < i; ++j)
    if (!erased(s.antecedent[j])) ++k;
  return k;
}

class Eraser {
 public:
  explicit Eraser(const HypothesisSet& hyps) : hyps_(hyps) {}

  Derivation run(const Derivation& d) {
    const Sequent& c = d.conclusion();
    const Sequent ec = erase_sequent(c);
    if (!check_ka_language(c.succedent))
      throw KleeneError(KleeneError::Kind::NotAnEncoding, "succedent outside the Kleene language: " + print_sequent(c));
    const RuleInstance& r = d.rule();
    if (d.is_omega()) {
      std::size_t count = d.premises().size();
      if (d.omega_template()) count = std::max<std::size_t>(count, 7);
      std::vector<Derivation> inst;
      for (std::size_t n = 0; n < count; ++n) inst.push_back(run(d.instance(n)));
      return Derivation::omega(ec, erased_index(c, r.pos), nullptr, std::move(inst));
    }
    switch (r.rule) {
      case RuleId::Weak:
      case RuleId::Perm1:
      case RuleId::Perm2:
      case RuleId::NContr1:
      case RuleId::NContr2:
      case RuleId::BangL:
        return run(d.premises()[0]);
      case RuleId::RimpL: {
        // V / U against Pi |- U and Gamma, V, Delta |- C: a hypothesis leaf between two cuts
        const Formula& f = c.antecedent[r.pos];
        auto h = std::find_if(hyps_.begin(), hyps_.end(),
                              [&](const Hypothesis& x) { return Formula::rimp(x.v, x.u) == f; });
        if (h == hyps_.end())
          throw KleeneError(KleeneError::Kind::NotAnEncoding, "division that is not a hypothesis: " + print_formula(f));
        Derivation e0 = run(d.premises()[0]);
        Derivation e1 = run(d.premises()[1]);
        const std::size_t pi = e0.conclusion().antecedent.size();
        Derivation leaf = Derivation::make(h->as_sequent(), RuleInstance::simple(RuleId::Hyp));
        Sequent mid{e0.conclusion().antecedent, h->v};
        Derivation c1 = Derivation::make(mid, RuleInstance::cut(0, pi, h->u), {e0, leaf});
        std::size_t at = erased_index(d.premises()[1].conclusion(), r.pos);
        return Derivation::make(ec, RuleInstance::cut(at, pi, h->v), {c1, e1});
      }
      case RuleId::BangR:
      case RuleId::LimpL:
      case RuleId::LimpR:
      case RuleId::RimpR:
      case RuleId::WithL:
      case RuleId::WithR:
      case RuleId::Cut:
      case RuleId::Mix:
      case RuleId::Hyp:
        throw KleeneError(KleeneError::Kind::NotAnEncoding, std::string("unexpected rule ") + rule_name(r.rule));
      default:
        break;
    }
    std::vector<Derivation> prem;
    std::vector<Sequent> goals;
    for (const auto& p : d.premises()) {
      prem.push_back(run(p));
      goals.push_back(prem.back().conclusion());
    }
    std::vector<RuleInstance> cands;
    detail::core_rules(ec, empty_signature(), cands);
    for (const auto& cand : cands) {
      if (cand.rule != r.rule || cand.choice != r.choice) continue;
      Backward b = backward(ec, cand, nullptr);
      if (b.ok && b.premises == goals) return Derivation::make(ec, cand, std::move(prem));
    }
    throw KleeneError(KleeneError::Kind::NotAnEncoding,
                      std::string("cannot erase ") + rule_name(r.rule) + " at " + print_sequent(c));
  }

 private:
  const HypothesisSet& hyps_;
};

}  // namespace

Derivation erase_translation(const Derivation& d, const HypothesisSet& hyps) {
  const Sequent& g = d.conclusion();
  if (g.antecedent.size() < hyps.size())
    throw KleeneError(KleeneError::Kind::NotAnEncoding, "goal is shorter than the hypothesis prefix");
  std::optional<std::string> label;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const Formula& f = g.antecedent[i];
    if (!f.is(Connective::Bang) || !(f.operand() == Formula::rimp(hyps[i].v, hyps[i].u)) ||
        (label && *label != f.name()))
      throw KleeneError(KleeneError::Kind::NotAnEncoding, "prefix does not match hypothesis " + std::to_string(i + 1));
    label = f.name();
  }
  Sequent rest{std::vector<Formula>(g.antecedent.begin() + hyps.size(), g.antecedent.end()), g.succedent};
  if (!check_ka_language(rest)) throw KleeneError(KleeneError::Kind::NotAnEncoding, "goal is not a Kleene sequent");
  return Eraser(hyps).run(d);
}

// ------------------------------------------------------------------ cancellers

namespace {

using detail::Chain;
using RI = RuleInstance;

// Keeps the pairs K_i, H_i as a prefix of every sequent; a hypothesis bang !s X becomes H_i = !c X.
struct CancellerRewriter {
  std::vector<Formula> bodies;  // V_i / U_i
  std::vector<Formula> prefix;  // K_1, H_1, ..., K_k, H_k
  std::string s, c;

  std::size_t z() const { return prefix.size(); }

  [[noreturn]] static void fail(const std::string& why) { throw KleeneError(KleeneError::Kind::NotAnEncoding, why); }

  static bool has_bang(const Formula& f) {
    switch (f.kind()) {
      case Connective::Var:
      case Connective::One:
      case Connective::Zero: return false;
      case Connective::Bang: return true;
      case Connective::Star: return has_bang(f.operand());
      default: return has_bang(f.left()) || has_bang(f.right());
    }
  }

  Formula map(const Formula& f) const {
    if (f.is(Connective::Bang) && f.name() == s) {
      auto it = std::find(bodies.begin(), bodies.end(), f.operand());
      if (it != bodies.end()) return prefix[2 * std::size_t(it - bodies.begin()) + 1];
    }
    if (has_bang(f)) fail("bang outside the hypothesis prefix: " + print_formula(f));
    return f;
  }

  Sequent map(const Sequent& q) const {
    std::vector<Formula> a = prefix;
    for (const auto& f : q.antecedent) a.push_back(map(f));
    return Sequent{std::move(a), q.succedent};
  }

  // H_i at index j >= z: a copy of K_i in front of it cancels it
  void drop_h(Chain& ch, std::size_t j) const {
    const Formula& f = ch.current().antecedent[j];
    std::size_t i = 0;
    while (i < bodies.size() && !(prefix[2 * i + 1] == f)) ++i;
    if (i == bodies.size()) fail("no canceller for " + print_formula(f));
    ch.apply(RI::simple(RuleId::NContr1, 2 * i, j));
    ch.apply(RI::simple(RuleId::BangL, j));
    ch.apply(RI::simple(RuleId::RimpL, j, j + 2), 1);
    ch.apply(RI::simple(RuleId::OneL, j));
  }

  // removes the pairs at [at, at + z)
  void drop_block(Chain& ch, std::size_t at) const {
    for (std::size_t i = 0; i < bodies.size(); ++i) {
      ch.apply(RI::simple(RuleId::BangL, at));
      ch.apply(RI::simple(RuleId::RimpL, at, at + 2), 1);
      ch.apply(RI::simple(RuleId::OneL, at));
    }
  }

  // copies the prefix to index at >= z
  void copy_block(Chain& ch, std::size_t at) const {
    for (std::size_t m = 0; m < z(); ++m) ch.apply(RI::simple(RuleId::NContr1, m, at + m));
  }

  Derivation finish(Chain& ch, const RI& r, std::vector<Derivation> kids) const {
    Backward b = backward(ch.current(), r, nullptr);
    if (!b.ok || b.premises.size() != kids.size()) fail("cannot replay " + describe(r) + " on " + print_sequent(ch.current()));
    for (std::size_t k = 0; k < kids.size(); ++k)
      if (!(b.premises[k] == kids[k].conclusion())) fail("premise mismatch replaying " + describe(r));
    return ch.close(Derivation::make(ch.current(), r, std::move(kids)));
  }

  // the chain has already reached map(premise); continue with its translation
  Derivation join(Chain& ch, const Derivation& prem) const {
    Derivation up = run(prem);
    if (!(up.conclusion() == ch.current())) fail("structural replay went astray at " + print_sequent(ch.current()));
    return ch.close(up);
  }

  Derivation run(const Derivation& d) const {
    if (d.is_omega()) fail("omega nodes are not rewritten");
    Chain ch(map(d.conclusion()));
    const RI& r = d.rule();
    const auto& ps = d.premises();
    const std::size_t p = r.pos + z();
    auto kids = [&] {
      std::vector<Derivation> out;
      for (const auto& q : ps) out.push_back(run(q));
      return out;
    };
    switch (r.rule) {
      case RuleId::Id:
      case RuleId::OneR:
        drop_block(ch, 0);
        return finish(ch, r, {});
      case RuleId::StarR: {
        if (r.parts.empty()) {
          drop_block(ch, 0);
          return finish(ch, r, {});
        }
        std::vector<std::size_t> starts;
        std::size_t at = z();
        for (auto n : r.parts) {
          starts.push_back(at);
          at += n;
        }
        for (std::size_t k = r.parts.size(); k-- > 1;) copy_block(ch, starts[k]);
        std::vector<std::size_t> parts = r.parts;
        for (auto& n : parts) n += z();
        return finish(ch, RI::star_r(std::move(parts)), kids());
      }
      case RuleId::ZeroL:
      case RuleId::BangL:
      case RuleId::OneL:
      case RuleId::TensorL:
      case RuleId::PlusL:
      case RuleId::WithL: {
        RI q = r;
        q.pos = p;
        return finish(ch, q, kids());
      }
      case RuleId::NContr1:
      case RuleId::NContr2: {
        RI q = r;
        q.pos = p;
        q.aux = r.aux + z();
        return finish(ch, q, kids());
      }
      case RuleId::RimpR:
      case RuleId::WithR:
      case RuleId::PlusR: return finish(ch, r, kids());
      case RuleId::LimpR: {
        // the argument lands in front of the prefix: move the prefix back to the front
        Derivation up = run(ps[0]);
        Chain top(backward(ch.current(), r, nullptr).premises.at(0));
        for (std::size_t m = 0; m < z(); ++m) top.apply(RI::simple(RuleId::NContr2, 2 * m + 1, m));
        drop_block(top, z() + 1);
        if (!(up.conclusion() == top.current())) fail("prefix move went astray");
        return finish(ch, r, {top.close(up)});
      }
      case RuleId::TensorR:
        copy_block(ch, p);
        return finish(ch, RI::simple(RuleId::TensorR, p), kids());
      case RuleId::LimpL:
        copy_block(ch, r.aux + z());
        return finish(ch, RI::simple(RuleId::LimpL, r.pos + 2 * z(), r.aux + z()), kids());
      case RuleId::RimpL:
        copy_block(ch, p + 1);
        return finish(ch, RI::simple(RuleId::RimpL, p, r.aux + 2 * z()), kids());
      case RuleId::Weak:
        drop_h(ch, p);
        return join(ch, ps.at(0));
      case RuleId::Perm1:
        ch.apply(RI::simple(RuleId::NContr1, p, r.aux + z() + 1));
        drop_h(ch, p);
        return join(ch, ps.at(0));
      case RuleId::Perm2:
        ch.apply(RI::simple(RuleId::NContr2, p, r.aux + z()));
        drop_h(ch, p + 1);
        return join(ch, ps.at(0));
      default: fail(std::string("rule not rewritten: ") + rule_name(r.rule));
    }
  }
};

}  // namespace

Derivation weakening_to_cancellers(const Derivation& d, const HypothesisSet& hyps, const std::string& c) {
  const Sequent& g = d.conclusion();
  if (g.antecedent.size() < hyps.size())
    throw KleeneError(KleeneError::Kind::NotAnEncoding, "goal is shorter than the hypothesis prefix");
  CancellerRewriter rw;
  rw.c = c;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    const Formula& f = g.antecedent[i];
    Formula body = Formula::rimp(hyps[i].v, hyps[i].u);
    if (!f.is(Connective::Bang) || !(f.operand() == body) || (i > 0 && rw.s != f.name()))
      throw KleeneError(KleeneError::Kind::NotAnEncoding, "prefix does not match hypothesis " + std::to_string(i + 1));
    rw.s = f.name();
    Formula inner = Formula::bang(c, body);
    rw.bodies.push_back(body);
    rw.prefix.push_back(Formula::bang(c, Formula::rimp(Formula::one(), inner)));
    rw.prefix.push_back(inner);
  }
  Sequent rest{std::vector<Formula>(g.antecedent.begin() + hyps.size(), g.antecedent.end()), g.succedent};
  if (!check_ka_language(rest)) throw KleeneError(KleeneError::Kind::NotAnEncoding, "goal is not a Kleene sequent");
  if (!rw.s.empty() && rw.s == c) throw KleeneError(KleeneError::Kind::NotAnEncoding, "canceller label equals the hypothesis label");
  // the hypothesis bangs H_1..H_k sit right after the pairs at the root
  detail::Chain ch(Sequent{[&] {
                             std::vector<Formula> a = rw.prefix;
                             a.insert(a.end(), rest.antecedent.begin(), rest.antecedent.end());
                             return a;
                           }(),
                           g.succedent});
  for (std::size_t i = 0; i < hyps.size(); ++i) ch.apply(RI::simple(RuleId::NContr1, 2 * i + 1, rw.z() + i));
  Derivation up = rw.run(d);
  if (!(up.conclusion() == ch.current())) throw std::logic_error("canceller rewrite: root mismatch");
  return ch.close(up);
}

// ------------------------------------------------------------------ checker

namespace {

struct KaChecker {
  const HypothesisSet& hyps;
  CheckMode mode;
  bool saw_omega = false;
  std::vector<std::size_t> path;

  std::optional<std::string> visit(const Derivation& d) {
    const Sequent& c = d.conclusion();
    if (!check_ka_language(c)) return "sequent outside the Kleene language: " + print_sequent(c);
    const RuleInstance& r = d.rule();
    if (d.is_omega()) {
      saw_omega = true;
      std::size_t count = d.premises().size();
      if (d.omega_template()) count = std::max(count, mode.bound + 1);
      for (std::size_t n = 0; n < count; ++n) {
        Derivation in = d.instance(n);
        if (!(in.conclusion() == omega_premise(c, r.pos, n))) {
          path.push_back(n);
          return "omega instance " + std::to_string(n) + " has the wrong conclusion";
        }
        path.push_back(n);
        if (auto e = visit(in)) return e;
        path.pop_back();
      }
      return std::nullopt;
    }
    if (r.rule == RuleId::Hyp) {
      if (!d.premises().empty()) return std::string("hypothesis leaf with premises");
      for (const auto& h : hyps)
        if (h.as_sequent() == c) return std::nullopt;
      return "not a hypothesis: " + print_sequent(c);
    }
    switch (r.rule) {
      case RuleId::BangL: case RuleId::BangR: case RuleId::Weak: case RuleId::Perm1: case RuleId::Perm2:
      case RuleId::NContr1: case RuleId::NContr2: case RuleId::Mix:
        return std::string("rule outside the Kleene fragment: ") + rule_name(r.rule);
      default: break;
    }
    Backward b = backward(c, r, nullptr);
    if (!b.ok) return std::string(rule_name(r.rule)) + ": " + b.reason;
    if (b.premises.size() != d.premises().size()) return std::string(rule_name(r.rule)) + ": wrong premise count";
    for (std::size_t k = 0; k < b.premises.size(); ++k) {
      if (!(b.premises[k] == d.premises()[k].conclusion())) {
        path.push_back(k);
        return std::string(rule_name(r.rule)) + ": premise " + std::to_string(k) + " mismatch";
      }
      path.push_back(k);
      if (auto e = visit(d.premises()[k])) return e;
      path.pop_back();
    }
    return std::nullopt;
  }
};

}  // namespace

CheckReport check_ka(const Derivation& d, const HypothesisSet& hyps, CheckMode mode) {
  KaChecker ck{hyps, mode, false, {}};
  CheckReport rep;
  if (auto err = ck.visit(d)) {
    rep.status = CheckReport::Status::Invalid;
    rep.reason = *err;
    rep.path = ck.path;
    return rep;
  }
  if (ck.saw_omega) {
    rep.status = CheckReport::Status::ValidUpTo;
    rep.bound = mode.bound;
  }
  return rep;
}

}  // namespace actomega
