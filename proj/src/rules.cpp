#include <algorithm>
#include <array>

#include "actomega/derivation.hpp"

namespace actomega {

namespace {
struct NameEntry {
  RuleId id;
  const char* name;
};
constexpr std::array<NameEntry, 26> kNames{{
    {RuleId::Id, "id"},          {RuleId::LimpL, "limp-l"},    {RuleId::LimpR, "limp-r"},
    {RuleId::RimpL, "rimp-l"},   {RuleId::RimpR, "rimp-r"},    {RuleId::TensorL, "tensor-l"},
    {RuleId::TensorR, "tensor-r"}, {RuleId::OneL, "one-l"},    {RuleId::OneR, "one-r"},
    {RuleId::ZeroL, "zero-l"},   {RuleId::PlusL, "plus-l"},    {RuleId::PlusR, "plus-r"},
    {RuleId::WithL, "with-l"},   {RuleId::WithR, "with-r"},    {RuleId::StarL, "star-l-omega"},
    {RuleId::StarR, "star-r"},   {RuleId::BangL, "bang-l"},    {RuleId::BangR, "bang-r"},
    {RuleId::Weak, "weak"},      {RuleId::Perm1, "perm1"},     {RuleId::Perm2, "perm2"},
    {RuleId::NContr1, "ncontr1"}, {RuleId::NContr2, "ncontr2"}, {RuleId::Cut, "cut"},
    {RuleId::Mix, "mix"},
    {RuleId::Hyp, "hyp"},
}};
}  // namespace

const char* rule_name(RuleId r) {
  for (const auto& e : kNames)
    if (e.id == r) return e.name;
  return "?";
}

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (const auto& e : kNames)
    if (name == e.name) return e.id;
  return std::nullopt;
}

RuleInstance RuleInstance::simple(RuleId r, std::size_t pos, std::size_t aux, int choice) {
  RuleInstance ri;
  ri.rule = r;
  ri.pos = pos;
  ri.aux = aux;
  ri.choice = choice;
  return ri;
}

RuleInstance RuleInstance::star_r(std::vector<std::size_t> parts) {
  RuleInstance ri;
  ri.rule = RuleId::StarR;
  ri.parts = std::move(parts);
  return ri;
}

RuleInstance RuleInstance::cut(std::size_t start, std::size_t len, Formula a) {
  RuleInstance ri;
  ri.rule = RuleId::Cut;
  ri.pos = start;
  ri.aux = len;
  ri.formula = std::move(a);
  return ri;
}

RuleInstance RuleInstance::mix(Formula bang, std::size_t pi_len, std::vector<std::size_t> positions, int target) {
  RuleInstance ri;
  ri.rule = RuleId::Mix;
  ri.aux = pi_len;
  ri.parts = std::move(positions);
  ri.choice = target;
  ri.formula = std::move(bang);
  return ri;
}

std::string describe(const RuleInstance& r) {
  std::string out = rule_name(r.rule);
  out += "(pos=" + std::to_string(r.pos) + " aux=" + std::to_string(r.aux);
  if (r.choice) out += " choice=" + std::to_string(r.choice);
  if (!r.parts.empty()) {
    out += " parts=";
    for (std::size_t i = 0; i < r.parts.size(); ++i) out += (i ? "," : "") + std::to_string(r.parts[i]);
  }
  if (r.formula) out += " formula=" + print_formula(*r.formula);
  return out + ")";
}

Sequent omega_premise(const Sequent& concl, std::size_t pos, std::size_t n) {
  Sequent p;
  const auto& ant = concl.antecedent;
  p.antecedent.reserve(ant.size() + n);
  p.antecedent.insert(p.antecedent.end(), ant.begin(), ant.begin() + pos);
  for (std::size_t i = 0; i < n; ++i) p.antecedent.push_back(ant[pos].operand());
  p.antecedent.insert(p.antecedent.end(), ant.begin() + pos + 1, ant.end());
  p.succedent = concl.succedent;
  return p;
}

namespace {

using Ant = std::vector<Formula>;

Ant slice(const Ant& a, std::size_t from, std::size_t to) { return Ant(a.begin() + from, a.begin() + to); }

Backward fail(std::string why) {
  Backward b;
  b.reason = std::move(why);
  return b;
}

Backward ok(std::vector<Sequent> ps) {
  Backward b;
  b.ok = true;
  b.premises = std::move(ps);
  return b;
}

Sequent seq(Ant a, Formula c) { return Sequent{std::move(a), std::move(c)}; }

// Replace antecedent[pos] by the given formulas.
Sequent replace_at(const Sequent& s, std::size_t pos, std::initializer_list<Formula> with) {
  Ant a;
  a.reserve(s.antecedent.size() + with.size());
  a.insert(a.end(), s.antecedent.begin(), s.antecedent.begin() + pos);
  a.insert(a.end(), with.begin(), with.end());
  a.insert(a.end(), s.antecedent.begin() + pos + 1, s.antecedent.end());
  return seq(std::move(a), s.succedent);
}

bool label_in(const SubexpSignature* sig, const Formula& f, bool (SubexpSignature::*pred)(std::string_view) const) {
  return !sig || (sig->*pred)(f.name());
}

}  // namespace

Backward backward(const Sequent& concl, const RuleInstance& r, const SubexpSignature* sig) {
  const Ant& ant = concl.antecedent;
  const Formula& c = concl.succedent;
  const std::size_t n = ant.size();
  auto principal = [&](Connective k) -> bool { return r.pos < n && ant[r.pos].is(k); };
  const char* nm = rule_name(r.rule);
  auto bad = [&](const std::string& what) { return fail(std::string(nm) + ": " + what); };

  switch (r.rule) {
    case RuleId::Hyp: return bad("hypothesis leaf outside a hypothesis set");
    case RuleId::Id:
      if (n == 1 && ant[0] == c) return ok({});
      return bad("not of the form A |- A");
    case RuleId::OneR:
      if (n == 0 && c.is(Connective::One)) return ok({});
      return bad("not of the form |- 1");
    case RuleId::ZeroL:
      if (principal(Connective::Zero)) return ok({});
      return bad("no 0 at the given position");
    case RuleId::LimpR:
      if (!c.is(Connective::Limp)) return bad("succedent is not a left division");
      {
        Ant a;
        a.reserve(n + 1);
        a.push_back(c.left());
        a.insert(a.end(), ant.begin(), ant.end());
        return ok({seq(std::move(a), c.right())});
      }
    case RuleId::RimpR:
      if (!c.is(Connective::Rimp)) return bad("succedent is not a right division");
      {
        Ant a = ant;
        a.push_back(c.right());
        return ok({seq(std::move(a), c.left())});
      }
    case RuleId::WithR:
      if (!c.is(Connective::With)) return bad("succedent is not &");
      return ok({seq(ant, c.left()), seq(ant, c.right())});
    case RuleId::PlusR:
      if (!c.is(Connective::Plus)) return bad("succedent is not +");
      if (r.choice != 1 && r.choice != 2) return bad("choice must be 1 or 2");
      return ok({seq(ant, r.choice == 1 ? c.left() : c.right())});
    case RuleId::TensorR:
      if (!c.is(Connective::Tensor)) return bad("succedent is not a product");
      if (r.pos > n) return bad("split point out of range");
      return ok({seq(slice(ant, 0, r.pos), c.left()), seq(slice(ant, r.pos, n), c.right())});
    case RuleId::StarR: {
      if (!c.is(Connective::Star)) return bad("succedent is not a star");
      std::size_t total = 0;
      for (auto p : r.parts) {
        if (p == 0) return bad("empty segment");
        total += p;
      }
      if (total != n) return bad("segments do not cover the antecedent");
      std::vector<Sequent> ps;
      std::size_t at = 0;
      for (auto p : r.parts) {
        ps.push_back(seq(slice(ant, at, at + p), c.operand()));
        at += p;
      }
      return ok(std::move(ps));
    }
    case RuleId::BangR:
      if (!c.is(Connective::Bang)) return bad("succedent is not a bang");
      for (const auto& f : ant) {
        if (!f.is(Connective::Bang)) return bad("antecedent formula " + print_formula(f) + " is not a bang");
        if (sig && !sig->leq(c.name(), f.name()))
          return bad("label " + f.name() + " is not above " + c.name());
      }
      return ok({seq(ant, c.operand())});
    case RuleId::LimpL: {
      if (!principal(Connective::Limp)) return bad("no left division at the given position");
      if (r.aux > r.pos) return bad("argument segment must end at the principal formula");
      const Formula& f = ant[r.pos];
      Ant rest = slice(ant, 0, r.aux);
      rest.push_back(f.right());
      rest.insert(rest.end(), ant.begin() + r.pos + 1, ant.end());
      return ok({seq(slice(ant, r.aux, r.pos), f.left()), seq(std::move(rest), c)});
    }
    case RuleId::RimpL: {
      if (!principal(Connective::Rimp)) return bad("no right division at the given position");
      if (r.aux <= r.pos || r.aux > n) return bad("argument segment out of range");
      const Formula& f = ant[r.pos];
      Ant rest = slice(ant, 0, r.pos);
      rest.push_back(f.left());
      rest.insert(rest.end(), ant.begin() + r.aux, ant.end());
      return ok({seq(slice(ant, r.pos + 1, r.aux), f.right()), seq(std::move(rest), c)});
    }
    case RuleId::TensorL:
      if (!principal(Connective::Tensor)) return bad("no product at the given position");
      return ok({replace_at(concl, r.pos, {ant[r.pos].left(), ant[r.pos].right()})});
    case RuleId::OneL:
      if (!principal(Connective::One)) return bad("no 1 at the given position");
      return ok({replace_at(concl, r.pos, {})});
    case RuleId::PlusL:
      if (!principal(Connective::Plus)) return bad("no + at the given position");
      return ok({replace_at(concl, r.pos, {ant[r.pos].left()}), replace_at(concl, r.pos, {ant[r.pos].right()})});
    case RuleId::WithL:
      if (!principal(Connective::With)) return bad("no & at the given position");
      if (r.choice != 1 && r.choice != 2) return bad("choice must be 1 or 2");
      return ok({replace_at(concl, r.pos, {r.choice == 1 ? ant[r.pos].left() : ant[r.pos].right()})});
    case RuleId::StarL:
      if (!principal(Connective::Star)) return bad("no star at the given position");
      return ok({});
    case RuleId::BangL:
      if (!principal(Connective::Bang)) return bad("no bang at the given position");
      return ok({replace_at(concl, r.pos, {ant[r.pos].operand()})});
    case RuleId::Weak:
      if (!principal(Connective::Bang)) return bad("no bang at the given position");
      if (!label_in(sig, ant[r.pos], &SubexpSignature::weakenable)) return bad("label " + ant[r.pos].name() + " not in W");
      return ok({replace_at(concl, r.pos, {})});
    case RuleId::Perm1:
    case RuleId::Perm2: {
      if (!principal(Connective::Bang)) return bad("no bang at the given position");
      if (!label_in(sig, ant[r.pos], &SubexpSignature::exchangeable)) return bad("label " + ant[r.pos].name() + " not in E");
      if (r.aux >= n) return bad("target out of range");
      if (r.rule == RuleId::Perm1 ? r.aux <= r.pos : r.aux >= r.pos) return bad("target on the wrong side");
      Ant a = ant;
      Formula f = a[r.pos];
      a.erase(a.begin() + r.pos);
      a.insert(a.begin() + r.aux, f);
      return ok({seq(std::move(a), c)});
    }
    case RuleId::NContr1:
    case RuleId::NContr2: {
      if (!principal(Connective::Bang)) return bad("no bang at the given position");
      if (!label_in(sig, ant[r.pos], &SubexpSignature::contractible)) return bad("label " + ant[r.pos].name() + " not in C");
      if (r.aux > n) return bad("target out of range");
      if (r.rule == RuleId::NContr1 ? r.aux <= r.pos : r.aux > r.pos) return bad("copy on the wrong side");
      Ant a = ant;
      a.insert(a.begin() + r.aux, ant[r.pos]);
      return ok({seq(std::move(a), c)});
    }
    case RuleId::Cut: {
      if (!r.formula) return bad("missing cut formula");
      if (r.pos + r.aux > n) return bad("segment out of range");
      Ant rest = slice(ant, 0, r.pos);
      rest.push_back(*r.formula);
      rest.insert(rest.end(), ant.begin() + r.pos + r.aux, ant.end());
      return ok({seq(slice(ant, r.pos, r.pos + r.aux), *r.formula), seq(std::move(rest), c)});
    }
    case RuleId::Mix: {
      if (!r.formula || !r.formula->is(Connective::Bang)) return bad("mix formula must be a bang");
      if (!label_in(sig, *r.formula, &SubexpSignature::contractible)) return bad("label " + r.formula->name() + " not in C");
      const auto& occ = r.parts;
      if (occ.empty()) return bad("no occurrences");
      for (std::size_t i = 1; i < occ.size(); ++i)
        if (occ[i] <= occ[i - 1]) return bad("occurrences must be increasing");
      if (r.choice < 0 || static_cast<std::size_t>(r.choice) >= occ.size()) return bad("target out of range");
      std::size_t start = occ[r.choice] - static_cast<std::size_t>(r.choice);
      if (start + r.aux > n) return bad("segment out of range");
      std::size_t right_len = n - r.aux + occ.size();
      if (occ.back() >= right_len) return bad("occurrence out of range");
      Ant rest;
      rest.reserve(right_len);
      std::size_t k = 0, d = 0;
      for (std::size_t i = 0; i < right_len; ++i) {
        if (k < occ.size() && occ[k] == i) {
          rest.push_back(*r.formula);
          ++k;
        } else {
          if (d == start) d += r.aux;
          rest.push_back(ant[d++]);
        }
      }
      return ok({seq(slice(ant, start, start + r.aux), *r.formula), seq(std::move(rest), c)});
    }
  }
  return bad("unknown rule");
}

}  // namespace actomega
