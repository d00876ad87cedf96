#include "actomega/search.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <deque>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "bank.hpp"
#include "countermodel.hpp"

namespace actomega {

using detail::Bank;
using detail::Chain;

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Derivable: return "Derivable";
    case Verdict::NotDerivable: return "NotDerivable";
    case Verdict::Unknown: return "Unknown";
  }
  return "?";
}

const char* reason_name(UnknownReason r) {
  switch (r) {
    case UnknownReason::None: return "None";
    case UnknownReason::OmegaSampled: return "OmegaSampled";
    case UnknownReason::BudgetExhausted: return "BudgetExhausted";
    case UnknownReason::PermWindow: return "PermWindow";
  }
  return "?";
}

std::string SearchResult::to_string() const {
  if (verdict == Verdict::Unknown) return std::string("Unknown(") + reason_name(reason) + ")";
  return verdict_name(verdict);
}

Sequent GeneralizedApplication::omega_premise(std::size_t n) const {
  return actomega::omega_premise(core_conclusion, core.pos, n);
}

namespace detail {

void compositions(std::size_t total, std::vector<std::size_t>& cur, std::vector<std::vector<std::size_t>>& out) {
  if (total == 0) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = 1; k <= total; ++k) {
    cur.push_back(k);
    compositions(total - k, cur, out);
    cur.pop_back();
  }
}

void core_rules(const Sequent& s, const SubexpSignature& sig, std::vector<RuleInstance>& out) {
  const auto& ant = s.antecedent;
  const Formula& c = s.succedent;
  const std::size_t n = ant.size();
  if (n == 1 && ant[0] == c) out.push_back(RuleInstance::simple(RuleId::Id));
  if (n == 0 && c.is(Connective::One)) out.push_back(RuleInstance::simple(RuleId::OneR));
  if (n == 0 && c.is(Connective::Star)) out.push_back(RuleInstance::star_r({}));
  switch (c.kind()) {
    case Connective::Limp: out.push_back(RuleInstance::simple(RuleId::LimpR)); break;
    case Connective::Rimp: out.push_back(RuleInstance::simple(RuleId::RimpR)); break;
    case Connective::With: out.push_back(RuleInstance::simple(RuleId::WithR)); break;
    case Connective::Plus:
      out.push_back(RuleInstance::simple(RuleId::PlusR, 0, 0, 1));
      out.push_back(RuleInstance::simple(RuleId::PlusR, 0, 0, 2));
      break;
    case Connective::Tensor:
      for (std::size_t q = 0; q <= n; ++q) out.push_back(RuleInstance::simple(RuleId::TensorR, q));
      break;
    case Connective::Star:
      if (n > 0) {
        std::vector<std::vector<std::size_t>> comps;
        std::vector<std::size_t> cur;
        compositions(n, cur, comps);
        for (auto& p : comps) out.push_back(RuleInstance::star_r(std::move(p)));
      }
      break;
    case Connective::Bang: {
      bool ok = std::all_of(ant.begin(), ant.end(),
                            [&](const Formula& f) { return f.is(Connective::Bang) && sig.leq(c.name(), f.name()); });
      if (ok) out.push_back(RuleInstance::simple(RuleId::BangR));
      break;
    }
    default: break;
  }
  for (std::size_t p = 0; p < n; ++p) {
    const Formula& f = ant[p];
    switch (f.kind()) {
      case Connective::Zero: out.push_back(RuleInstance::simple(RuleId::ZeroL, p)); break;
      case Connective::One: out.push_back(RuleInstance::simple(RuleId::OneL, p)); break;
      case Connective::Tensor: out.push_back(RuleInstance::simple(RuleId::TensorL, p)); break;
      case Connective::Plus: out.push_back(RuleInstance::simple(RuleId::PlusL, p)); break;
      case Connective::With:
        out.push_back(RuleInstance::simple(RuleId::WithL, p, 0, 1));
        out.push_back(RuleInstance::simple(RuleId::WithL, p, 0, 2));
        break;
      case Connective::Limp:
        for (std::size_t q = 0; q <= p; ++q) out.push_back(RuleInstance::simple(RuleId::LimpL, p, q));
        break;
      case Connective::Rimp:
        for (std::size_t a = p + 1; a <= n; ++a) out.push_back(RuleInstance::simple(RuleId::RimpL, p, a));
        break;
      case Connective::Star: out.push_back(RuleInstance::simple(RuleId::StarL, p)); break;
      case Connective::Bang:
        out.push_back(RuleInstance::simple(RuleId::BangL, p));
        if (sig.weakenable(f.name())) out.push_back(RuleInstance::simple(RuleId::Weak, p));
        if (sig.contractible(f.name()))
          for (std::size_t t = 0; t <= n; ++t) out.push_back(RuleInstance::simple(t > p ? RuleId::NContr1 : RuleId::NContr2, p, t));
        break;
      default: break;
    }
  }
}

}  // namespace detail

using detail::compositions;

namespace {

constexpr std::size_t kUnlimited = SIZE_MAX;

using RI = RuleInstance;

struct PermVariant {
  Chain chain;  // permutation steps from the original sequent
  std::vector<RI> perms;
};

// Breadth-first permutation variants of s moving exchangeable bangs at indices >= from,
// at most `window` moves; the first entry is s itself.
std::vector<PermVariant> perm_variants(const Sequent& s, const SubexpSignature& sig, std::size_t window, std::size_t from,
                                       const std::vector<bool>* skip) {
  std::vector<PermVariant> out;
  out.push_back({Chain(s), {}});
  bool any = false;
  for (std::size_t i = from; i < s.antecedent.size(); ++i)
    if (s.antecedent[i].is(Connective::Bang) && sig.exchangeable(s.antecedent[i].name()) && !(skip && (*skip)[i])) any = true;
  if (!any || window == 0) return out;
  std::unordered_set<Sequent, SequentHash> seen{s};
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < window; ++depth) {
    std::size_t level_end = out.size();
    for (std::size_t v = level_begin; v < level_end; ++v) {
      const Sequent cur = out[v].chain.current();
      const auto& ant = cur.antecedent;
      for (std::size_t p = from; p < ant.size(); ++p) {
        if (!ant[p].is(Connective::Bang) || !sig.exchangeable(ant[p].name())) continue;
        for (std::size_t t = from; t < ant.size(); ++t) {
          if (t == p) continue;
          RI r = RI::simple(t > p ? RuleId::Perm1 : RuleId::Perm2, p, t);
          Chain ch = out[v].chain;
          ch.apply(r);
          if (!seen.insert(ch.current()).second) continue;
          auto perms = out[v].perms;
          perms.push_back(r);
          out.push_back({std::move(ch), std::move(perms)});
        }
      }
    }
    level_begin = level_end;
    if (level_begin == out.size()) break;
  }
  return out;
}

std::size_t exchangeable_bangs(const std::vector<Formula>& ant, const SubexpSignature& sig, std::size_t from,
                               const std::vector<bool>* skip) {
  std::size_t k = 0;
  for (std::size_t i = from; i < ant.size(); ++i)
    if (ant[i].is(Connective::Bang) && sig.exchangeable(ant[i].name()) && !(skip && (*skip)[i])) ++k;
  return k;
}

struct PremiseListHash {
  std::size_t operator()(const std::vector<Sequent>& v) const {
    std::size_t h = v.size();
    for (const auto& s : v) h = h * 1000003u ^ s.hash();
    return h;
  }
};

// ------------------------------------------------------------------ engine

struct Res {
  Verdict v = Verdict::Unknown;
  UnknownReason why = UnknownReason::None;
  std::optional<Derivation> d;
};

Res derivable(Derivation d) { return {Verdict::Derivable, UnknownReason::None, std::move(d)}; }
Res refuted() { return {Verdict::NotDerivable, UnknownReason::None, std::nullopt}; }
Res unknown(UnknownReason r, std::optional<Derivation> d = std::nullopt) { return {Verdict::Unknown, r, std::move(d)}; }

int reason_priority(UnknownReason r) {
  switch (r) {
    case UnknownReason::BudgetExhausted: return 3;
    case UnknownReason::PermWindow: return 2;
    case UnknownReason::OmegaSampled: return 1;
    default: return 0;
  }
}

// Keeps the most informative Unknown: a complete witness first, then the strongest reason.
void merge_unknown(std::optional<Res>& acc, const Res& r) {
  if (!acc) {
    acc = r;
    return;
  }
  bool acc_w = acc->d.has_value(), r_w = r.d.has_value();
  if (acc_w) return;
  if (r_w || reason_priority(r.why) > reason_priority(acc->why)) acc = r;
}

struct App {
  Chain chain;
  RI core;
  std::vector<Sequent> premises;
  bool omega = false;
};

// What is known about one canonical sequent. Refutation holds at every depth, a derivation found
// at depth d holds above it, an Unknown at depth d holds below it.
struct MemoEntry {
  bool refuted = false;
  std::optional<std::pair<std::size_t, Res>> derivable;  // smallest depth seen
  std::optional<std::pair<std::size_t, Res>> unknown;    // largest depth seen
};

class Engine {
 public:
  Engine(const SubexpSignature& sig, const SearchBudget& b, const Sequent& root) : sig_(sig), b_(b), bank_(sig) {
    if (b.model_filter) models_.emplace(detail::variables_of(root));
  }

  // The wider three-point family is tried once per goal.
  bool root_refuted(const Sequent& s) const {
    return b_.model_filter && detail::SmallModels(detail::variables_of(s), true).refutes(s);
  }

  Res solve(const Sequent& s, std::size_t depth) {
    if (!bank_.enabled()) return solve_canonical(s, 0, depth);
    auto [c, zc] = bank_.normalize(s);
    Res r = solve_canonical(c, zc, depth);
    if (r.d && !(c == s)) r.d = bank_.canonical_chain(s).close(*r.d);
    return r;
  }

  // Root helpers so that branches can be spread over threads.
  struct Plan {
    Sequent canon;
    std::size_t zc = 0;
    std::optional<Res> settled;  // axiom or invertible step decided it
    std::vector<App> apps;       // otherwise: the branches, in order
    bool window_complete = true;
  };

  Plan plan(const Sequent& s, std::size_t depth) {
    Plan p;
    std::tie(p.canon, p.zc) = bank_.enabled() ? bank_.normalize(s) : std::make_pair(s, std::size_t{0});
    if (models_ && models_->refutes(p.canon)) {
      p.settled = refuted();
      return p;
    }
    if (depth == 0) {
      p.settled = unknown(UnknownReason::BudgetExhausted);
      return p;
    }
    std::size_t sub = depth == kUnlimited ? kUnlimited : depth - 1;
    if (auto ax = axiom_app(p.canon, p.zc)) {
      p.settled = run_app(*ax, sub);
      return p;
    }
    if (auto inv = invertible_app(p.canon, p.zc)) {
      p.settled = run_app(*inv, sub);
      return p;
    }
    p.apps = other_apps(p.canon, p.zc, p.window_complete);
    return p;
  }

  Res run_app(const App& a, std::size_t sub) {
    if (a.omega) return run_omega(a, sub);
    std::vector<Derivation> kids;
    std::optional<Res> unk;
    bool witness = true;
    for (const auto& p : a.premises) {
      Res r = solve(p, sub);
      if (r.v == Verdict::NotDerivable) return refuted();
      if (r.v == Verdict::Unknown) {
        if (!r.d) witness = false;
        if (!unk || reason_priority(r.why) > reason_priority(unk->why)) unk = r;
      }
      kids.push_back(r.d ? *r.d : Derivation());
    }
    if (!unk) return derivable(a.chain.close(Derivation::make(a.chain.current(), a.core, std::move(kids))));
    if (witness && unk->why == UnknownReason::OmegaSampled)
      return unknown(UnknownReason::OmegaSampled, a.chain.close(Derivation::make(a.chain.current(), a.core, std::move(kids))));
    return unknown(unk->why);
  }

  // Combines branch results in order; `results[i]` is computed on demand by `get(i)`.
  template <typename Get>
  static Res aggregate(std::size_t count, bool window_complete, Get get, const std::vector<App>& apps) {
    std::optional<Res> unk;
    for (std::size_t i = 0; i < count; ++i) {
      Res r = get(i);
      if (r.v == Verdict::Derivable) return r;
      if (r.v == Verdict::NotDerivable) {
        // the omega rule is invertible: one refuted instance refutes the sequent
        if (apps[i].omega) return refuted();
        continue;
      }
      merge_unknown(unk, r);
    }
    if (unk) return *unk;
    if (!window_complete) return unknown(UnknownReason::PermWindow);
    return refuted();
  }

 private:
  Res solve_canonical(const Sequent& c, std::size_t zc, std::size_t depth) {
    MemoEntry& e = memo_[c];
    if (e.refuted) return refuted();
    if (e.derivable && e.derivable->first <= depth) return e.derivable->second;
    if (e.unknown && e.unknown->first >= depth) return e.unknown->second;
    Plan p;
    p.canon = c;
    p.zc = zc;
    Res r;
    if (models_ && models_->refutes(c)) {
      r = refuted();
    } else if (depth == 0) {
      r = unknown(UnknownReason::BudgetExhausted);
    } else {
      std::size_t sub = depth == kUnlimited ? kUnlimited : depth - 1;
      if (auto ax = axiom_app(c, zc)) r = run_app(*ax, sub);
      else if (auto inv = invertible_app(c, zc)) r = run_app(*inv, sub);
      else {
        bool complete = true;
        auto apps = other_apps(c, zc, complete);
        r = aggregate(apps.size(), complete, [&](std::size_t i) { return run_app(apps[i], sub); }, apps);
      }
    }
    MemoEntry& slot = memo_[c];  // the recursive calls may have rehashed
    if (r.v == Verdict::NotDerivable) slot.refuted = true;
    else if (r.v == Verdict::Derivable) {
      if (!slot.derivable || depth < slot.derivable->first) slot.derivable.emplace(depth, r);
    } else if (!slot.unknown || depth > slot.unknown->first) slot.unknown.emplace(depth, r);
    return r;
  }

  std::optional<App> make_app(Chain ch, RI core) {
    Backward b = backward(ch.current(), core, &sig_);
    if (!b.ok) return std::nullopt;
    App a{std::move(ch), std::move(core), std::move(b.premises), false};
    a.omega = a.core.rule == RuleId::StarL;
    return a;
  }

  std::optional<App> axiom_app(const Sequent& c, std::size_t zc) {
    const auto& ant = c.antecedent;
    const std::size_t n = ant.size();
    for (std::size_t p = zc; p < n; ++p)
      if (ant[p].is(Connective::Zero)) return make_app(Chain(c), RI::simple(RuleId::ZeroL, p));
    auto drop_all_but = [&](std::optional<std::size_t> keep) {
      Chain ch(c);
      std::vector<bool> drop(zc, true);
      if (keep) drop[*keep] = false;
      bank_.drop_members(ch, zc, drop);
      return ch;
    };
    // a lone 1 goes through one-l instead, which keeps 1^n |- 1 proofs uniform in n
    if (n == zc + 1 && ant[zc] == c.succedent && !ant[zc].is(Connective::One))
      return make_app(drop_all_but(std::nullopt), RI::simple(RuleId::Id));
    if (n == zc) {
      if (c.succedent.is(Connective::One)) return make_app(drop_all_but(std::nullopt), RI::simple(RuleId::OneR));
      if (c.succedent.is(Connective::Star)) return make_app(drop_all_but(std::nullopt), RI::star_r({}));
      for (std::size_t t = 0; t < zc; ++t)
        if (ant[t] == c.succedent) return make_app(drop_all_but(t), RI::simple(RuleId::Id));
    }
    return std::nullopt;
  }

  std::optional<App> invertible_app(const Sequent& c, std::size_t zc) {
    switch (c.succedent.kind()) {
      case Connective::Limp: return make_app(Chain(c), RI::simple(RuleId::LimpR));
      case Connective::Rimp: return make_app(Chain(c), RI::simple(RuleId::RimpR));
      case Connective::With: return make_app(Chain(c), RI::simple(RuleId::WithR));
      default: break;
    }
    for (std::size_t p = zc; p < c.antecedent.size(); ++p) {
      switch (c.antecedent[p].kind()) {
        case Connective::Tensor: return make_app(Chain(c), RI::simple(RuleId::TensorL, p));
        case Connective::One: return make_app(Chain(c), RI::simple(RuleId::OneL, p));
        case Connective::Plus: return make_app(Chain(c), RI::simple(RuleId::PlusL, p));
        default: break;
      }
    }
    return std::nullopt;
  }

  std::vector<App> other_apps(const Sequent& c, std::size_t zc, bool& window_complete) {
    std::vector<App> apps;
    std::unordered_set<std::vector<Sequent>, PremiseListHash> seen;
    auto add = [&](std::optional<App> a) {
      if (!a) return;
      if (!a->omega && !seen.insert(a->premises).second) return;
      apps.push_back(std::move(*a));
    };
    window_complete = exchangeable_bangs(c.antecedent, sig_, zc, nullptr) <= b_.perm_window;
    auto variants = perm_variants(c, sig_, b_.perm_window, zc, nullptr);

    // position-sensitive rules, on every permutation variant
    for (auto& var : variants) {
      const Sequent& v = var.chain.current();
      const auto& ant = v.antecedent;
      const std::size_t n = ant.size();
      for (std::size_t p = zc; p < n; ++p) {
        const Formula& f = ant[p];
        if (f.is(Connective::Limp)) {
          for (std::size_t q = zc; q <= p; ++q) {
            Chain ch = var.chain;
            bank_.copy_block(ch, zc, q);
            add(make_app(std::move(ch), RI::simple(RuleId::LimpL, p + zc, q)));
          }
        } else if (f.is(Connective::Rimp)) {
          for (std::size_t a = p + 1; a <= n; ++a) {
            Chain ch = var.chain;
            bank_.copy_block(ch, zc, p + 1);
            add(make_app(std::move(ch), RI::simple(RuleId::RimpL, p, a + zc)));
          }
        } else if (f.is(Connective::Bang) && var.perms.size() > 0 && sig_.exchangeable(f.name())) {
          add(make_app(var.chain, RI::simple(RuleId::BangL, p)));
        }
      }
      if (v.succedent.is(Connective::Tensor)) {
        for (std::size_t q = zc; q <= n; ++q) {
          Chain ch = var.chain;
          bank_.copy_block(ch, zc, q);
          add(make_app(std::move(ch), RI::simple(RuleId::TensorR, q)));
        }
      }
      if (v.succedent.is(Connective::Star) && n > zc) {
        std::vector<std::vector<std::size_t>> comps;
        std::vector<std::size_t> cur;
        compositions(n - zc, cur, comps);
        for (const auto& comp : comps) {
          Chain ch = var.chain;
          std::vector<std::size_t> parts;
          std::size_t at = 0;
          for (std::size_t k = 0; k < comp.size(); ++k) {
            if (k > 0) bank_.copy_block(ch, zc, at);
            parts.push_back(zc + comp[k]);
            at += zc + comp[k];
          }
          add(make_app(std::move(ch), RI::star_r(std::move(parts))));
        }
      }
    }

    // local rules on the sequent itself
    const auto& ant = c.antecedent;
    const std::size_t n = ant.size();
    if (c.succedent.is(Connective::Plus)) {
      add(make_app(Chain(c), RI::simple(RuleId::PlusR, 0, 0, 1)));
      add(make_app(Chain(c), RI::simple(RuleId::PlusR, 0, 0, 2)));
    }
    for (std::size_t p = zc; p < n; ++p) {
      if (ant[p].is(Connective::With)) {
        add(make_app(Chain(c), RI::simple(RuleId::WithL, p, 0, 1)));
        add(make_app(Chain(c), RI::simple(RuleId::WithL, p, 0, 2)));
      }
    }
    for (std::size_t p = zc; p < n; ++p)
      if (ant[p].is(Connective::Bang)) add(make_app(Chain(c), RI::simple(RuleId::BangL, p)));
    for (std::size_t t = 0; t < zc; ++t) {
      for (std::size_t i = 0; i + zc <= n; ++i) {
        Chain ch(c);
        ch.apply(RI::simple(RuleId::NContr1, t, zc + i));
        add(make_app(std::move(ch), RI::simple(RuleId::BangL, zc + i)));
      }
    }
    if (c.succedent.is(Connective::Bang)) {
      const std::string& lab = c.succedent.name();
      bool ok = true;
      for (std::size_t p = zc; p < n; ++p)
        if (!ant[p].is(Connective::Bang) || !sig_.leq(lab, ant[p].name())) ok = false;
      if (ok) {
        Chain ch(c);
        std::vector<bool> drop(zc);
        for (std::size_t t = 0; t < zc; ++t) drop[t] = !sig_.leq(lab, ant[t].name());
        bank_.drop_members(ch, zc, drop);
        add(make_app(std::move(ch), RI::simple(RuleId::BangR)));
      }
    }
    for (std::size_t p = zc; p < n; ++p)
      if (ant[p].is(Connective::Bang) && sig_.weakenable(ant[p].name()))
        add(make_app(Chain(c), RI::simple(RuleId::Weak, p)));
    for (std::size_t p = zc; p < n; ++p) {
      if (!ant[p].is(Connective::Bang) || !sig_.contractible(ant[p].name())) continue;
      for (std::size_t t = zc; t <= n; ++t)
        add(make_app(Chain(c), RI::simple(t > p ? RuleId::NContr1 : RuleId::NContr2, p, t)));
    }
    for (std::size_t p = zc; p < n; ++p)
      if (ant[p].is(Connective::Star)) add(make_app(Chain(c), RI::simple(RuleId::StarL, p)));
    return apps;
  }

  Res run_omega(const App& a, std::size_t sub) {
    const Sequent& concl = a.chain.current();
    std::size_t pos = a.core.pos;
    std::vector<Derivation> inst;
    bool all_derivable = true, witness = true;
    UnknownReason why = UnknownReason::None;
    for (std::size_t n = 0; n <= b_.omega_bound; ++n) {
      Res r = solve(omega_premise(concl, pos, n), sub);
      if (r.v == Verdict::NotDerivable) return refuted();
      if (r.v == Verdict::Unknown) {
        all_derivable = false;
        if (!r.d) witness = false;
        if (reason_priority(r.why) > reason_priority(why)) why = r.why;
      }
      inst.push_back(r.d ? *r.d : Derivation());
    }
    if (!witness) return unknown(why);
    auto tmpl = synthesize_template(concl, pos, inst, sig_, b_.omega_bound + 2);
    Derivation d = a.chain.close(Derivation::omega(concl, pos, tmpl, std::move(inst)));
    if (all_derivable && tmpl && b_.accept_templates) return derivable(std::move(d));
    return unknown(UnknownReason::OmegaSampled, std::move(d));
  }

  const SubexpSignature& sig_;
  SearchBudget b_;
  Bank bank_;
  std::unordered_map<Sequent, MemoEntry, SequentHash> memo_;
  std::optional<detail::SmallModels> models_;
};

SearchResult to_result(Res r) {
  SearchResult out;
  out.verdict = r.v;
  out.reason = r.v == Verdict::Unknown ? r.why : UnknownReason::None;
  out.derivation = std::move(r.d);
  return out;
}

}  // namespace

std::vector<GeneralizedApplication> applicable_rules(const Sequent& s, const SubexpSignature& sig, std::size_t window) {
  std::vector<GeneralizedApplication> out;
  auto variants = perm_variants(s, sig, window, 0, nullptr);
  for (const auto& var : variants) {
    std::vector<RI> cores;
    detail::core_rules(var.chain.current(), sig, cores);
    for (auto& core : cores) {
      GeneralizedApplication g;
      Backward b = backward(var.chain.current(), core, &sig);
      if (!b.ok) continue;
      g.core = std::move(core);
      g.perm_suffix = var.perms;
      g.core_conclusion = var.chain.current();
      g.premises = std::move(b.premises);
      g.omega = g.core.rule == RuleId::StarL;
      out.push_back(std::move(g));
    }
  }
  return out;
}

SearchResult prove(const Sequent& s, const SubexpSignature& sig, const SearchBudget& budget) {
  sig.require_labels(s);
  if (!sig.contraction_free() && !budget.depth)
    throw SearchError(SearchError::Kind::MissingDepthBudget, "a depth budget is required when some label allows contraction");
  if (budget.depth && *budget.depth == 0)
    return SearchResult{Verdict::Unknown, UnknownReason::BudgetExhausted, std::nullopt};
  std::size_t depth = budget.depth ? *budget.depth : kUnlimited;

  Engine root(sig, budget, s);
  if (root.root_refuted(s)) return SearchResult{Verdict::NotDerivable, UnknownReason::None, std::nullopt};
  if (budget.jobs <= 1) return to_result(root.solve(s, depth));

  auto plan = root.plan(s, depth);
  Res r;
  if (plan.settled) {
    r = *plan.settled;
  } else {
    std::size_t sub = depth == kUnlimited ? kUnlimited : depth - 1;
    std::vector<std::optional<Res>> results(plan.apps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      Engine e(sig, budget, s);
      for (std::size_t i; (i = next.fetch_add(1)) < plan.apps.size();) results[i] = e.run_app(plan.apps[i], sub);
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < budget.jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    r = Engine::aggregate(plan.apps.size(), plan.window_complete, [&](std::size_t i) { return *results[i]; }, plan.apps);
  }
  if (r.d && !(plan.canon == s)) r.d = detail::Bank(sig).canonical_chain(s).close(*r.d);
  return to_result(std::move(r));
}

bool decide_starfree(const Sequent& s, const SubexpSignature& sig) {
  auto star_free = s.succedent.star_free() &&
                   std::all_of(s.antecedent.begin(), s.antecedent.end(), [](const Formula& f) { return f.star_free(); });
  if (!star_free) throw SearchError(SearchError::Kind::StarPresent, "decide_starfree: the sequent contains a star");
  if (!sig.contraction_free())
    throw SearchError(SearchError::Kind::ContractionPresent, "decide_starfree: the signature allows contraction");
  // a window as large as the number of bang occurrences makes permutation handling complete
  std::vector<std::string> labels;
  for (const auto& f : s.antecedent) collect_labels(f, labels);
  collect_labels(s.succedent, labels);
  SearchBudget b;
  b.perm_window = std::max<std::size_t>(1, labels.size());
  // the search is finite here, so countermodels would only add work
  b.model_filter = false;
  SearchResult r = prove(s, sig, b);
  if (r.verdict == Verdict::Unknown) throw std::logic_error("decide_starfree: search returned " + r.to_string());
  return r.derivable();
}

}  // namespace actomega
