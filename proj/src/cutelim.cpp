#include "actomega/cutelim.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "bank.hpp"

namespace actomega {

namespace {

using detail::Chain;
using Map = std::vector<std::optional<std::size_t>>;

bool is_left_rule(RuleId r) {
  switch (r) {
    case RuleId::LimpL: case RuleId::RimpL: case RuleId::TensorL: case RuleId::OneL: case RuleId::ZeroL:
    case RuleId::PlusL: case RuleId::WithL: case RuleId::StarL: case RuleId::BangL: case RuleId::Weak:
    case RuleId::Perm1: case RuleId::Perm2: case RuleId::NContr1: case RuleId::NContr2:
      return true;
    default:
      return false;
  }
}

// For each premise, where each conclusion antecedent index ends up (nullopt: consumed).
std::vector<Map> premise_maps(const Sequent& concl, const RuleInstance& r, std::size_t nprem) {
  const std::size_t n = concl.antecedent.size();
  std::vector<Map> maps(nprem, Map(n));
  auto ident = [&](Map& m) {
    for (std::size_t i = 0; i < n; ++i) m[i] = i;
  };
  const std::size_t p = r.pos, a = r.aux;
  switch (r.rule) {
    case RuleId::LimpL:
      for (std::size_t i = a; i < p; ++i) maps[0][i] = i - a;
      for (std::size_t i = 0; i < n; ++i) {
        if (i < a) maps[1][i] = i;
        else if (i > p) maps[1][i] = i - (p - a);
      }
      maps[1][p] = a;
      break;
    case RuleId::RimpL:
      for (std::size_t i = p + 1; i < a; ++i) maps[0][i] = i - p - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (i < p) maps[1][i] = i;
        else if (i >= a) maps[1][i] = i - (a - p - 1);
      }
      maps[1][p] = p;
      break;
    case RuleId::TensorR:
      for (std::size_t i = 0; i < n; ++i) {
        if (i < p) maps[0][i] = i;
        else maps[1][i] = i - p;
      }
      break;
    case RuleId::StarR: {
      std::size_t start = 0;
      for (std::size_t k = 0; k < r.parts.size(); ++k) {
        for (std::size_t i = start; i < start + r.parts[k]; ++i) maps[k][i] = i - start;
        start += r.parts[k];
      }
      break;
    }
    case RuleId::LimpR:
      for (std::size_t i = 0; i < n; ++i) maps[0][i] = i + 1;
      break;
    case RuleId::RimpR: case RuleId::WithR: case RuleId::PlusR: case RuleId::BangR:
    case RuleId::PlusL: case RuleId::WithL: case RuleId::BangL:
      for (auto& m : maps) ident(m);
      break;
    case RuleId::TensorL:
      for (std::size_t i = 0; i < n; ++i) maps[0][i] = i > p ? i + 1 : i;
      break;
    case RuleId::OneL: case RuleId::Weak:
      for (std::size_t i = 0; i < n; ++i)
        if (i != p) maps[0][i] = i > p ? i - 1 : i;
      break;
    case RuleId::Perm1: case RuleId::Perm2:
      for (std::size_t i = 0; i < n; ++i) {
        if (i == p) {
          maps[0][i] = a;
          continue;
        }
        std::size_t j = i > p ? i - 1 : i;
        maps[0][i] = j >= a ? j + 1 : j;
      }
      break;
    case RuleId::NContr1: case RuleId::NContr2:
      for (std::size_t i = 0; i < n; ++i) maps[0][i] = i >= a ? i + 1 : i;
      break;
    default:
      throw CutElimError(CutElimError::Kind::InvariantViolation, std::string("no premise map for ") + rule_name(r.rule));
  }
  // principal formulas of logical left rules are not context
  switch (r.rule) {
    case RuleId::LimpL: case RuleId::RimpL: maps[1][p] = std::nullopt; break;
    case RuleId::PlusL: case RuleId::WithL: case RuleId::BangL:
      for (auto& m : maps) m[p] = std::nullopt;
      break;
    default: break;
  }
  return maps;
}

// Antecedent index of the rule's principal formula, if it is on the left.
std::optional<std::size_t> left_principal(const Derivation& d) {
  if (d.is_omega()) return d.rule().pos;
  if (!is_left_rule(d.rule().rule)) return std::nullopt;
  return d.rule().pos;
}

class Eliminator {
 public:
  Eliminator(const SubexpSignature& sig, const CutElimOptions& opts) : sig_(sig), opts_(opts) {}

  Derivation cut(const Derivation& L, const Derivation& R, std::size_t pos) {
    return elim(L, R, {pos}, 0, nullptr, false);
  }
  Derivation mix(const Derivation& L, const Derivation& R, std::vector<std::size_t> occ, std::size_t t) {
    return elim(L, R, std::move(occ), t, nullptr, true);
  }

  std::size_t family_size(const Derivation& d) const {
    std::size_t k = d.premises().size();
    if (!d.omega_template()) return k;
    return std::max(k, opts_.omega_bound + 2);
  }

  const std::vector<Derivation>& instances(const Derivation& d) {
    auto it = inst_.find(d.identity());
    if (it != inst_.end()) return it->second.second;
    std::vector<Derivation> v;
    for (std::size_t n = 0; n < family_size(d); ++n) v.push_back(d.instance(n));
    return inst_.emplace(d.identity(), std::make_pair(d, std::move(v))).first->second.second;
  }

  std::size_t rank(const Derivation& d) {
    if (auto it = rank_.find(d.identity()); it != rank_.end()) return it->second.second;
    std::size_t h = 0;
    if (d.is_omega()) {
      for (const auto& i : instances(d)) h = std::max(h, rank(i));
    } else {
      for (const auto& p : d.premises()) h = std::max(h, rank(p));
    }
    rank_.emplace(d.identity(), std::make_pair(d, h + 1));
    return h + 1;
  }

  Derivation make_omega(const Sequent& concl, std::size_t pos, std::vector<Derivation> inst) {
    auto tmpl = synthesize_template(concl, pos, inst, sig_, opts_.omega_bound + 2);
    if (!tmpl) {
      if (opts_.strict_templates)
        throw CutElimError(CutElimError::Kind::NonUniformTemplate,
                           "no uniform template for the transformed omega family at " + print_sequent(concl));
      if (opts_.stats) ++opts_.stats->partial_nodes;
    }
    return Derivation::omega(concl, pos, std::move(tmpl), std::move(inst));
  }

 private:
  void note(const std::string& s) {
    if (opts_.stats) opts_.stats->trace.push_back(s);
  }

  // Some instance of rule `id` on s whose premises are exactly `goals`.
  RuleInstance match_rule(const Sequent& s, const RuleInstance& like, const std::vector<Sequent>& goals) {
    std::vector<RuleInstance> cands;
    detail::core_rules(s, sig_, cands);
    if (like.rule == RuleId::Perm1 || like.rule == RuleId::Perm2) {
      for (std::size_t p = 0; p < s.antecedent.size(); ++p)
        for (std::size_t t = 0; t < s.antecedent.size(); ++t)
          if (t != p) cands.push_back(RuleInstance::simple(t > p ? RuleId::Perm1 : RuleId::Perm2, p, t));
    }
    for (const auto& c : cands) {
      if (c.rule != like.rule || c.choice != like.choice) continue;
      Backward b = backward(s, c, &sig_);
      if (b.ok && b.premises == goals) return c;
    }
    throw CutElimError(CutElimError::Kind::InvariantViolation,
                       std::string("cannot rebuild ") + rule_name(like.rule) + " at " + print_sequent(s));
  }

  Derivation rebuild(const Sequent& s, const RuleInstance& like, std::vector<Derivation> prem) {
    std::vector<Sequent> goals;
    for (const auto& p : prem) goals.push_back(p.conclusion());
    return Derivation::make(s, match_rule(s, like, goals), std::move(prem));
  }

  // S has Pi at [a, a+m); D concludes the same sequent with the block elsewhere.
  Derivation bridge_perm(const Sequent& S, std::size_t a, std::size_t m, Derivation D) {
    const Sequent& T = D.conclusion();
    if (T == S) return D;
    std::vector<Formula> rest(S.antecedent);
    rest.erase(rest.begin() + a, rest.begin() + a + m);
    std::optional<std::size_t> b;
    for (std::size_t k = 0; k + m <= T.antecedent.size() && !b; ++k) {
      if (!std::equal(S.antecedent.begin() + a, S.antecedent.begin() + a + m, T.antecedent.begin() + k)) continue;
      std::vector<Formula> r2(T.antecedent);
      r2.erase(r2.begin() + k, r2.begin() + k + m);
      if (r2 == rest) b = k;
    }
    if (!b) throw CutElimError(CutElimError::Kind::InvariantViolation, "block move: sequents do not match");
    Chain ch(S);
    if (*b > a) {
      for (std::size_t i = m; i-- > 0;) ch.apply(RuleInstance::simple(RuleId::Perm1, a + i, *b + i));
    } else {
      for (std::size_t i = 0; i < m; ++i) ch.apply(RuleInstance::simple(RuleId::Perm2, a + i, *b + i));
    }
    if (!(ch.current() == T)) throw CutElimError(CutElimError::Kind::InvariantViolation, "block move mismatch");
    return ch.close(std::move(D));
  }

  // D concludes T, which is S with extra copies of the Pi block at `copies` (T indices);
  // the copy kept in S starts at `keep` (T index). Contract the extras away.
  Derivation bridge_merge(const Sequent& S, std::vector<std::size_t> copies, std::size_t keep, std::size_t m,
                          Derivation D) {
    if (copies.empty() || m == 0) return D;
    std::sort(copies.begin(), copies.end());
    std::size_t left_of_keep = std::count_if(copies.begin(), copies.end(), [&](std::size_t q) { return q < keep; });
    std::size_t kept = keep - m * left_of_keep;
    Chain ch(S);
    for (std::size_t q : copies) {
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t src = kept + i;
        std::size_t dst = q + i;
        ch.apply(RuleInstance::simple(dst > src ? RuleId::NContr1 : RuleId::NContr2, src, dst));
        if (q < keep) ++kept;
      }
    }
    if (!(ch.current() == D.conclusion()))
      throw CutElimError(CutElimError::Kind::InvariantViolation,
                         "contraction of Pi copies mismatch: " + print_sequent(ch.current()) + " vs " +
                             print_sequent(D.conclusion()));
    return ch.close(std::move(D));
  }

  Derivation elim(const Derivation& L, const Derivation& R, std::vector<std::size_t> occ, std::size_t t,
                  const ElimMeasure* parent, bool as_mix) {
    const Sequent& RS = R.conclusion();
    const auto& Pi = L.conclusion().antecedent;
    const std::size_t m = Pi.size();
    const Formula X = L.conclusion().succedent;
    for (auto o : occ)
      if (o >= RS.antecedent.size() || !(RS.antecedent[o] == X))
        throw CutElimError(CutElimError::Kind::InvariantViolation, "cut formula not found in right premise");
    as_mix = as_mix || occ.size() > 1;
    const std::string tag = as_mix ? "mix " : "";

    ElimMeasure me{complexity(X), rank(L), rank(R)};
    if (opts_.stats) {
      ++opts_.stats->calls;
      if (parent) {
        ++opts_.stats->measure_checks;
        if (!(me < *parent)) ++opts_.stats->measure_violations;
      }
    }

    // result sequent and index bookkeeping
    const std::size_t target = occ[t];
    auto is_occ = [&](std::size_t i) { return std::binary_search(occ.begin(), occ.end(), i); };
    Sequent S;
    S.succedent = RS.succedent;
    std::size_t pi_start = 0;
    for (std::size_t i = 0; i < RS.antecedent.size(); ++i) {
      if (i == target) {
        pi_start = S.antecedent.size();
        S.antecedent.insert(S.antecedent.end(), Pi.begin(), Pi.end());
      } else if (!is_occ(i)) {
        S.antecedent.push_back(RS.antecedent[i]);
      }
    }
    auto s_index = [&](std::size_t i) {
      std::size_t before = std::count_if(occ.begin(), occ.end(), [&](std::size_t o) { return o < i; });
      return i - before + (target < i ? m : 0);
    };

    // axiom on the left
    if (!L.is_omega() && L.rule().rule == RuleId::Id) {
      if (occ.size() == 1) {
        note(tag + "case1 axiom-left");
        return R;
      }
      note(tag + "case4 axiom-left merge");
      std::vector<std::size_t> copies;
      for (auto o : occ)
        if (o != target) copies.push_back(o);
      return bridge_merge(S, copies, target, 1, R);
    }
    // axiom on the right
    if (!R.is_omega() && R.rule().rule == RuleId::Id) {
      note(tag + (as_mix ? "case1 axiom-right" : "case3.1 axiom-right"));
      return L;
    }
    // left premise not principal: push the cut into it
    if (occ.size() == 1 && (L.is_omega() || is_left_rule(L.rule().rule))) {
      const RuleInstance& lr = L.rule();
      const std::size_t off = pi_start;
      if (L.is_omega()) {
        note(tag + "case2 left-commute star-l-omega");
        std::vector<Derivation> inst;
        for (const auto& li : instances(L)) inst.push_back(elim(li, R, occ, 0, &me, as_mix));
        return make_omega(S, lr.pos + off, std::move(inst));
      }
      note(tag + "case2 left-commute " + rule_name(lr.rule));
      if (lr.rule == RuleId::ZeroL) return Derivation::make(S, RuleInstance::simple(RuleId::ZeroL, lr.pos + off));
      std::vector<Derivation> prem;
      for (std::size_t k = 0; k < L.premises().size(); ++k) {
        bool main = !((lr.rule == RuleId::LimpL || lr.rule == RuleId::RimpL) && k == 0);
        prem.push_back(main ? elim(L.premises()[k], R, occ, 0, &me, as_mix) : L.premises()[k]);
      }
      return rebuild(S, lr, std::move(prem));
    }

    auto lp = left_principal(R);
    auto hit = lp ? std::find(occ.begin(), occ.end(), *lp) : occ.end();
    if (hit == occ.end()) return right_commute(L, R, occ, t, S, s_index, me, as_mix, tag);
    return principal(L, R, occ, t, std::size_t(hit - occ.begin()), S, pi_start, me, as_mix, tag);
  }

  template <typename SIndex>
  Derivation right_commute(const Derivation& L, const Derivation& R, const std::vector<std::size_t>& occ,
                           std::size_t t, const Sequent& S, SIndex s_index, const ElimMeasure& me,
                           bool as_mix, const std::string& tag) {
    const Sequent& RS = R.conclusion();
    const RuleInstance& rr = R.rule();
    const std::size_t m = L.conclusion().antecedent.size();
    if (R.is_omega()) {
      note(tag + "case3.2 right-commute star-l-omega");
      std::vector<Derivation> inst;
      const auto& ri = instances(R);
      for (std::size_t n = 0; n < ri.size(); ++n) {
        std::vector<std::size_t> o2;
        for (auto o : occ) o2.push_back(o < rr.pos ? o : o + n - 1);
        inst.push_back(elim(L, ri[n], o2, t, &me, as_mix));
      }
      return make_omega(S, s_index(rr.pos), std::move(inst));
    }
    note(tag + (as_mix ? "case2 " : "case3.2 ") + "right-commute " + rule_name(rr.rule));
    if (rr.rule == RuleId::ZeroL) return Derivation::make(S, RuleInstance::simple(RuleId::ZeroL, s_index(rr.pos)));
    if (rr.rule == RuleId::Cut || rr.rule == RuleId::Mix)
      throw CutElimError(CutElimError::Kind::InvariantViolation, "right premise is not cut-free");

    const auto& prem = R.premises();
    auto maps = premise_maps(RS, rr, prem.size());
    std::vector<Derivation> out;
    // placement occurrence per branch (in conclusion indices) for the Pi copy it produces
    std::vector<std::size_t> placed;
    for (std::size_t k = 0; k < prem.size(); ++k) {
      std::vector<std::pair<std::size_t, std::size_t>> here;  // (premise index, conclusion index)
      for (auto o : occ)
        if (maps[k][o]) here.push_back({*maps[k][o], o});
      if (here.empty()) {
        out.push_back(prem[k]);
        continue;
      }
      std::sort(here.begin(), here.end());
      std::vector<std::size_t> o2;
      std::size_t t2 = here.size() - 1;  // branches without the target keep Pi at their last occurrence
      for (std::size_t q = 0; q < here.size(); ++q) {
        o2.push_back(here[q].first);
        if (here[q].second == occ[t]) t2 = q;
      }
      placed.push_back(here[t2].second);
      out.push_back(elim(L, prem[k], o2, t2, &me, as_mix));
    }
    std::sort(placed.begin(), placed.end());
    placed.erase(std::unique(placed.begin(), placed.end()), placed.end());
    if (placed.size() <= 1 && (placed.empty() || placed[0] == occ[t])) return rebuild(S, rr, std::move(out));

    // several branches produced a copy of Pi: conclude with all copies, then contract
    Sequent T;
    T.succedent = RS.succedent;
    std::vector<std::size_t> starts;
    std::size_t keep = 0;
    for (std::size_t i = 0; i < RS.antecedent.size(); ++i) {
      if (std::binary_search(placed.begin(), placed.end(), i)) {
        if (i == occ[t]) keep = T.antecedent.size();
        else starts.push_back(T.antecedent.size());
        const auto& Pi = L.conclusion().antecedent;
        T.antecedent.insert(T.antecedent.end(), Pi.begin(), Pi.end());
      } else if (!std::binary_search(occ.begin(), occ.end(), i)) {
        T.antecedent.push_back(RS.antecedent[i]);
      }
    }
    if (!std::binary_search(placed.begin(), placed.end(), occ[t]))
      throw CutElimError(CutElimError::Kind::InvariantViolation, "target occurrence lost in a branch");
    return bridge_merge(S, starts, keep, m, rebuild(T, rr, std::move(out)));
  }

  Derivation principal(const Derivation& L, const Derivation& R, const std::vector<std::size_t>& occ, std::size_t t,
                       std::size_t j, const Sequent& S, std::size_t pi_start, const ElimMeasure& me, bool as_mix,
                       const std::string& tag) {
    const std::size_t x = occ[j];
    const Formula X = L.conclusion().succedent;
    const std::size_t m = L.conclusion().antecedent.size();
    const RuleInstance& rr = R.rule();
    const RuleInstance& lr = L.rule();
    auto need_left = [&](RuleId id) {
      if (L.is_omega() || lr.rule != id)
        throw CutElimError(CutElimError::Kind::InvariantViolation,
                           std::string("expected ") + rule_name(id) + " on the left, found " + rule_name(lr.rule));
    };

    if (X.is(Connective::Bang)) {
      need_left(RuleId::BangR);
      const Derivation& L1 = L.premises()[0];
      const Derivation& P = R.premises()[0];
      auto maps = premise_maps(R.conclusion(), rr, 1);
      std::vector<std::size_t> others;
      std::optional<std::size_t> t_other;
      for (std::size_t q = 0; q < occ.size(); ++q) {
        if (q == j) continue;
        if (q == t) t_other = others.size();
        others.push_back(occ[q]);
      }
      switch (rr.rule) {
        case RuleId::BangL: {
          if (others.empty()) {
            note(tag + "case3.3 principal bang");
            return elim(L1, P, {x}, 0, &me, false);
          }
          note(tag + "case3 dereliction");
          std::size_t t2 = t_other ? *t_other : 0;
          Derivation M1 = elim(L, P, others, t2, &me, true);
          // positions in the mix result: A stays at x (shifted), Pi sits at others[t2]
          std::size_t before_x = std::count_if(others.begin(), others.end(), [&](std::size_t o) { return o < x; });
          std::size_t a = x - before_x + (others[t2] < x ? m : 0);
          std::size_t before_p =
              std::count_if(others.begin(), others.end(), [&](std::size_t o) { return o < others[t2]; });
          std::size_t p1 = others[t2] - before_p;  // index in M1's conclusion
          Derivation C = elim(L1, M1, {a}, 0, &me, false);
          std::size_t pA = a;
          std::size_t pM = p1 > a ? p1 + m - 1 : p1;
          if (t == j) return bridge_merge(S, {pM}, pA, m, C);
          return bridge_merge(S, {pA}, pM, m, C);
        }
        case RuleId::Weak: {
          if (others.empty()) {
            note(tag + "case3.4 weak");
            Chain ch(S);
            for (std::size_t i = 0; i < m; ++i) ch.apply(RuleInstance::simple(RuleId::Weak, pi_start));
            if (!(ch.current() == P.conclusion()))
              throw CutElimError(CutElimError::Kind::InvariantViolation, "weakening expansion mismatch");
            return ch.close(P);
          }
          std::vector<std::size_t> o2;
          for (auto o : others) o2.push_back(*maps[0][o]);
          if (t != j) {
            note(tag + "case4 weak (inactive instance)");
            return elim(L, P, o2, *t_other, &me, true);
          }
          note(tag + "case4 weak (active instance)");
          std::size_t t2 = 0;
          while (t2 + 1 < others.size() && others[t2] < x) ++t2;
          if (others[t2] < x) t2 = others.size() - 1;
          return bridge_perm(S, pi_start, m, elim(L, P, o2, t2, &me, true));
        }
        case RuleId::Perm1:
        case RuleId::Perm2: {
          std::vector<std::pair<std::size_t, std::size_t>> moved;  // (premise index, original slot)
          for (std::size_t q = 0; q < occ.size(); ++q) moved.push_back({*maps[0][occ[q]], q});
          std::sort(moved.begin(), moved.end());
          std::vector<std::size_t> o2;
          std::size_t t2 = 0;
          for (std::size_t q = 0; q < moved.size(); ++q) {
            o2.push_back(moved[q].first);
            if (moved[q].second == t) t2 = q;
          }
          note(tag + (as_mix ? "case4 perm" : "case3.4 perm"));
          Derivation D = elim(L, P, o2, t2, &me, as_mix);
          return bridge_perm(S, pi_start, m, D);
        }
        case RuleId::NContr1:
        case RuleId::NContr2: {
          std::vector<std::pair<std::size_t, std::size_t>> moved;
          for (std::size_t q = 0; q < occ.size(); ++q) moved.push_back({*maps[0][occ[q]], q});
          moved.push_back({rr.aux, occ.size()});
          std::sort(moved.begin(), moved.end());
          std::vector<std::size_t> o2;
          std::size_t t2 = 0;
          for (std::size_t q = 0; q < moved.size(); ++q) {
            o2.push_back(moved[q].first);
            if (moved[q].second == t) t2 = q;
          }
          note(tag + (as_mix ? "case4 ncontr merge" : "case3.4 ncontr -> mix"));
          return elim(L, P, o2, t2, &me, true);
        }
        default:
          throw CutElimError(CutElimError::Kind::InvariantViolation,
                             std::string("unexpected rule on a bang: ") + rule_name(rr.rule));
      }
    }

    if (occ.size() != 1) throw CutElimError(CutElimError::Kind::InvariantViolation, "mix on a formula without a bang");
    switch (X.kind()) {
      case Connective::Limp: {
        // L: A, Pi |- B ; R: Pi_R |- A and Gamma, B, Delta |- C
        need_left(RuleId::LimpR);
        note(tag + "case3.3 principal limp");
        Derivation c1 = elim(R.premises()[0], L.premises()[0], {0}, 0, &me, false);
        return elim(c1, R.premises()[1], {rr.aux}, 0, &me, false);
      }
      case Connective::Rimp: {
        need_left(RuleId::RimpR);
        note(tag + "case3.3 principal rimp");
        Derivation c1 = elim(R.premises()[0], L.premises()[0], {m}, 0, &me, false);
        return elim(c1, R.premises()[1], {x}, 0, &me, false);
      }
      case Connective::Tensor: {
        need_left(RuleId::TensorR);
        note(tag + "case3.3 principal tensor");
        const Derivation& La = L.premises()[0];
        const Derivation& Lb = L.premises()[1];
        Derivation c1 = elim(La, R.premises()[0], {x}, 0, &me, false);
        return elim(Lb, c1, {x + La.conclusion().antecedent.size()}, 0, &me, false);
      }
      case Connective::One:
        need_left(RuleId::OneR);
        note(tag + "case3.3 principal one");
        return R.premises()[0];
      case Connective::Plus: {
        need_left(RuleId::PlusR);
        note(tag + "case3.3 principal plus");
        return elim(L.premises()[0], R.premises()[std::size_t(lr.choice - 1)], {x}, 0, &me, false);
      }
      case Connective::With: {
        need_left(RuleId::WithR);
        note(tag + "case3.3 principal with");
        return elim(L.premises()[std::size_t(rr.choice - 1)], R.premises()[0], {x}, 0, &me, false);
      }
      case Connective::Star: {
        need_left(RuleId::StarR);
        note(tag + "case3.3 principal star");
        std::size_t n = lr.parts.size();
        Derivation cur = n < instances(R).size() ? instances(R)[n] : R.instance(n);
        std::size_t at = x;
        for (std::size_t k = 0; k < n; ++k) {
          const Derivation& Lk = L.premises()[k];
          cur = elim(Lk, cur, {at}, 0, &me, false);
          at += Lk.conclusion().antecedent.size();
        }
        return cur;
      }
      default:
        throw CutElimError(CutElimError::Kind::InvariantViolation, "no principal reduction for " + print_formula(X));
    }
  }

  const SubexpSignature& sig_;
  const CutElimOptions& opts_;
  std::unordered_map<const void*, std::pair<Derivation, std::vector<Derivation>>> inst_;
  std::unordered_map<const void*, std::pair<Derivation, std::size_t>> rank_;
};

void require_cut_free(const Derivation& d, const char* which) {
  if (!is_cut_free(d))
    throw CutElimError(CutElimError::Kind::BadConfiguration, std::string(which) + " premise is not cut-free");
}

Derivation all(Eliminator& e, const Derivation& d, const SubexpSignature& sig, std::vector<std::size_t>& path) {
  if (is_cut_free(d)) return d;
  try {
    if (d.is_omega()) {
      std::vector<Derivation> inst;
      std::size_t n = e.family_size(d);
      for (std::size_t k = 0; k < n; ++k) {
        path.push_back(k);
        inst.push_back(all(e, d.instance(k), sig, path));
        path.pop_back();
      }
      return e.make_omega(d.conclusion(), d.rule().pos, std::move(inst));
    }
    std::vector<Derivation> prem;
    for (std::size_t k = 0; k < d.premises().size(); ++k) {
      path.push_back(k);
      prem.push_back(all(e, d.premises()[k], sig, path));
      path.pop_back();
    }
    const RuleInstance& r = d.rule();
    if (r.rule == RuleId::Cut) return e.cut(prem[0], prem[1], r.pos);
    if (r.rule == RuleId::Mix) {
      if (prem[0].is_omega() || prem[0].rule().rule != RuleId::BangR)
        throw CutElimError(CutElimError::Kind::InvariantViolation, "mix whose left premise is not bang-r", path);
      return e.mix(prem[0], prem[1], r.parts, std::size_t(r.choice));
    }
    return Derivation::make(d.conclusion(), r, std::move(prem));
  } catch (const CutElimError& err) {
    if (!err.path().empty()) throw;
    throw CutElimError(err.kind(), err.what(), path);
  }
}

}  // namespace

Derivation eliminate_one_cut(const CutConfiguration& cfg, const SubexpSignature& sig, const CutElimOptions& opts) {
  require_cut_free(cfg.left, "left");
  require_cut_free(cfg.right, "right");
  const auto& ra = cfg.right.conclusion().antecedent;
  if (cfg.position >= ra.size() || !(ra[cfg.position] == cfg.left.conclusion().succedent))
    throw CutElimError(CutElimError::Kind::BadConfiguration, "cut formula does not occur at the given position");
  Eliminator e(sig, opts);
  return e.cut(cfg.left, cfg.right, cfg.position);
}

Derivation eliminate_mix(const MixConfiguration& cfg, const SubexpSignature& sig, const CutElimOptions& opts) {
  if (cfg.left.is_omega() || cfg.left.rule().rule != RuleId::BangR)
    throw CutElimError(CutElimError::Kind::InvariantViolation, "the left premise of mix must end with bang-r");
  require_cut_free(cfg.left, "left");
  require_cut_free(cfg.right, "right");
  const Formula& x = cfg.left.conclusion().succedent;
  if (!sig.contractible(x.name()))
    throw CutElimError(CutElimError::Kind::BadConfiguration, "mix label " + x.name() + " is not contractible");
  auto pos = cfg.positions;
  if (pos.empty() || cfg.target_slot >= pos.size())
    throw CutElimError(CutElimError::Kind::BadConfiguration, "mix needs a nonempty position list and a valid target");
  const auto& ra = cfg.right.conclusion().antecedent;
  for (auto p : pos)
    if (p >= ra.size() || !(ra[p] == x))
      throw CutElimError(CutElimError::Kind::BadConfiguration, "mix formula missing at position " + std::to_string(p));
  std::size_t target = pos[cfg.target_slot];
  std::sort(pos.begin(), pos.end());
  pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
  std::size_t t = std::size_t(std::find(pos.begin(), pos.end(), target) - pos.begin());
  Eliminator e(sig, opts);
  return e.mix(cfg.left, cfg.right, pos, t);
}

Derivation eliminate_all(const Derivation& d, const SubexpSignature& sig, const CutElimOptions& opts) {
  Eliminator e(sig, opts);
  std::vector<std::size_t> path;
  return all(e, d, sig, path);
}

}  // namespace actomega
