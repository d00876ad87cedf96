#include "bank.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace actomega::detail {

void Chain::apply(const RuleInstance& r, std::size_t main) {
  Backward b = backward(cur_, r, nullptr);
  if (!b.ok) throw std::logic_error("structural step failed: " + b.reason + " at " + print_sequent(cur_));
  Step st{cur_, r, main, {}};
  for (std::size_t k = 0; k < b.premises.size(); ++k) {
    if (k == main) continue;
    const Sequent& side = b.premises[k];
    if (side.antecedent.size() != 1 || !(side.antecedent[0] == side.succedent))
      throw std::logic_error("side premise is not an axiom: " + print_sequent(side));
    st.side.push_back(side);
  }
  cur_ = std::move(b.premises[main]);
  steps_.push_back(std::move(st));
}

Derivation Chain::close(Derivation top) const {
  Derivation d = std::move(top);
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    std::vector<Derivation> kids;
    std::size_t s = 0;
    for (std::size_t k = 0; k < it->side.size() + 1; ++k) {
      if (k == it->main) kids.push_back(d);
      else kids.push_back(Derivation::make(it->side[s++], RuleInstance::simple(RuleId::Id)));
    }
    d = Derivation::make(it->concl, it->rule, std::move(kids));
  }
  return d;
}

Bank::Bank(const SubexpSignature& sig) : sig_(&sig) {
  for (const auto& l : sig.labels())
    if (sig.contractible(l)) enabled_ = true;
}

std::optional<Formula> Bank::canceller_target(const Formula& f) const {
  if (!f.is(Connective::Bang) || !sig_->contractible(f.name())) return std::nullopt;
  const Formula& body = f.operand();
  if (!body.is(Connective::Rimp) || !body.left().is(Connective::One)) return std::nullopt;
  const Formula& h = body.right();
  if (!h.is(Connective::Bang) || !sig_->contractible(h.name())) return std::nullopt;
  const Formula& hb = h.operand();
  // nested cancellers are not treated as pairs
  if (hb.is(Connective::Rimp) && hb.left().is(Connective::One) && hb.right().is(Connective::Bang)) return std::nullopt;
  return h;
}

std::vector<bool> Bank::free_flags(const std::vector<Formula>& ant) const {
  std::vector<bool> flags(ant.size(), false);
  if (!enabled_) return flags;
  std::vector<std::optional<Formula>> targets(ant.size());
  for (std::size_t i = 0; i < ant.size(); ++i) targets[i] = canceller_target(ant[i]);
  for (std::size_t i = 0; i < ant.size(); ++i) {
    const Formula& f = ant[i];
    if (!f.is(Connective::Bang) || !sig_->contractible(f.name())) continue;
    if (sig_->weakenable(f.name())) {
      flags[i] = true;
      continue;
    }
    if (targets[i] && std::find(ant.begin(), ant.end(), *targets[i]) != ant.end()) {
      flags[i] = true;
      continue;
    }
    for (std::size_t j = 0; j < ant.size(); ++j)
      if (targets[j] && *targets[j] == f) {
        flags[i] = true;
        break;
      }
  }
  return flags;
}

namespace {
struct Keyed {
  int cls;
  Formula base;
  int sub;
  Formula f;
  friend std::strong_ordering operator<=>(const Keyed& a, const Keyed& b) {
    if (auto c = a.cls <=> b.cls; c != 0) return c;
    if (auto c = a.base <=> b.base; c != 0) return c;
    if (auto c = a.sub <=> b.sub; c != 0) return c;
    return a.f <=> b.f;
  }
};
}  // namespace

std::pair<Sequent, std::size_t> Bank::normalize(const Sequent& s) const {
  if (!enabled_) return {s, 0};
  auto flags = free_flags(s.antecedent);
  std::vector<Keyed> front;
  std::vector<Formula> rest;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    const Formula& f = s.antecedent[i];
    if (!flags[i]) {
      rest.push_back(f);
      continue;
    }
    if (std::any_of(front.begin(), front.end(), [&](const Keyed& k) { return k.f == f; })) continue;
    if (sig_->weakenable(f.name())) front.push_back({1, f, 0, f});
    else if (auto h = canceller_target(f); h && std::find(s.antecedent.begin(), s.antecedent.end(), *h) != s.antecedent.end())
      front.push_back({0, *h, 0, f});
    else front.push_back({0, f, 1, f});
  }
  std::sort(front.begin(), front.end());
  Sequent c;
  c.antecedent.reserve(s.antecedent.size());
  for (const auto& k : front) c.antecedent.push_back(k.f);
  std::size_t zc = front.size();
  c.antecedent.insert(c.antecedent.end(), rest.begin(), rest.end());
  c.succedent = s.succedent;
  return {std::move(c), zc};
}

void Bank::delete_at(Chain& ch, std::size_t i, std::size_t block_end) const {
  const auto& ant = ch.current().antecedent;
  const Formula f = ant[i];
  auto find_other = [&](const Formula& g) -> std::optional<std::size_t> {
    // prefer the free block, then anything else
    for (std::size_t j = 0; j < ant.size(); ++j)
      if (j != i && j < block_end && ant[j] == g) return j;
    for (std::size_t j = 0; j < ant.size(); ++j)
      if (j != i && ant[j] == g) return j;
    return std::nullopt;
  };
  if (sig_->weakenable(f.name())) {
    ch.apply(RuleInstance::simple(RuleId::Weak, i));
    return;
  }
  if (auto h = canceller_target(f); h) {
    if (auto j = find_other(*h)) {
      // copy H right after this canceller, then let the canceller consume it
      ch.apply(RuleInstance::simple(*j < i + 1 ? RuleId::NContr1 : RuleId::NContr2, *j, i + 1));
      ch.apply(RuleInstance::simple(RuleId::BangL, i));
      ch.apply(RuleInstance::simple(RuleId::RimpL, i, i + 2), 1);
      ch.apply(RuleInstance::simple(RuleId::OneL, i));
      return;
    }
  }
  for (std::size_t j = 0; j < ant.size(); ++j) {
    if (j == i) continue;
    auto t = canceller_target(ant[j]);
    if (!t || !(*t == f)) continue;
    // copy a canceller right before this occurrence and consume it
    ch.apply(RuleInstance::simple(j < i ? RuleId::NContr1 : RuleId::NContr2, j, i));
    ch.apply(RuleInstance::simple(RuleId::BangL, i));
    ch.apply(RuleInstance::simple(RuleId::RimpL, i, i + 2), 1);
    ch.apply(RuleInstance::simple(RuleId::OneL, i));
    return;
  }
  throw std::logic_error("cannot discard " + print_formula(f));
}

Chain Bank::canonical_chain(const Sequent& s) const {
  Chain ch(s);
  if (!enabled_) return ch;
  auto [canon, zc] = normalize(s);
  if (canon == s) return ch;
  for (std::size_t t = 0; t < zc; ++t) {
    const auto& ant = ch.current().antecedent;
    std::size_t k = t;
    while (k < ant.size() && !(ant[k] == canon.antecedent[t])) ++k;
    if (k == ant.size()) throw std::logic_error("canonical form lost a free formula");
    if (k != t) ch.apply(RuleInstance::simple(RuleId::NContr2, k, t));
  }
  for (std::size_t i = ch.current().antecedent.size(); i-- > zc;) {
    const Formula& f = ch.current().antecedent[i];
    bool in_block = false;
    for (std::size_t t = 0; t < zc; ++t)
      if (canon.antecedent[t] == f) in_block = true;
    if (in_block) delete_at(ch, i, zc);
  }
  if (!(ch.current() == canon)) throw std::logic_error("canonicalization mismatch: " + print_sequent(ch.current()));
  return ch;
}

std::size_t Bank::drop_members(Chain& ch, std::size_t zc, const std::vector<bool>& drop) const {
  std::vector<Formula> gone;
  for (std::size_t i = 0; i < zc; ++i)
    if (drop[i]) gone.push_back(ch.current().antecedent[i]);
  auto index_of = [&](const Formula& f, std::size_t block) -> std::size_t {
    const auto& ant = ch.current().antecedent;
    for (std::size_t i = 0; i < block; ++i)
      if (ant[i] == f) return i;
    throw std::logic_error("free block lost " + print_formula(f));
  };
  auto dropping = [&](const Formula& f) { return std::find(gone.begin(), gone.end(), f) != gone.end(); };
  std::size_t block = zc;
  auto erase = [&](const Formula& f) {
    gone.erase(std::find(gone.begin(), gone.end(), f));
    --block;
  };

  // canceller groups that vanish entirely: extra cancellers first, the last pair together
  std::vector<Formula> snapshot(ch.current().antecedent.begin(), ch.current().antecedent.begin() + zc);
  for (const auto& h : snapshot) {
    if (!dropping(h) || sig_->weakenable(h.name())) continue;
    std::vector<Formula> ks;
    bool kept_partner = false;
    for (const auto& k : snapshot) {
      auto t = canceller_target(k);
      if (!t || !(*t == h)) continue;
      if (sig_->weakenable(k.name()) || !dropping(k)) kept_partner = true;
      else ks.push_back(k);
    }
    if (kept_partner || ks.empty()) continue;
    for (std::size_t q = 0; q + 1 < ks.size(); ++q) {
      delete_at(ch, index_of(ks[q], block), block);
      erase(ks[q]);
    }
    std::size_t ki = index_of(ks.back(), block), hi = index_of(h, block);
    if (hi != ki + 1) {
      // move a copy of the canceller next to H, then discard the original
      ch.apply(RuleInstance::simple(ki < hi ? RuleId::NContr1 : RuleId::NContr2, ki, hi));
      std::size_t old = ki < hi ? ki : ki + 1;
      delete_at(ch, old, block + 1);
      ki = index_of(ks.back(), block);
      hi = index_of(h, block);
    }
    if (hi != ki + 1) throw std::logic_error("canceller pair not adjacent");
    ch.apply(RuleInstance::simple(RuleId::BangL, ki));
    ch.apply(RuleInstance::simple(RuleId::RimpL, ki, ki + 2), 1);
    ch.apply(RuleInstance::simple(RuleId::OneL, ki));
    erase(ks.back());
    erase(h);
  }
  // remaining cancellers (their H stays or is weakenable), then non-weakenable H, then weakenable ones
  for (int phase = 0; phase < 3; ++phase) {
    for (const auto& f : std::vector<Formula>(gone)) {
      bool w = sig_->weakenable(f.name());
      bool is_k = bool(canceller_target(f));
      bool take = phase == 0 ? (!w && is_k) : phase == 1 ? !w : w;
      if (!take) continue;
      delete_at(ch, index_of(f, block), block);
      erase(f);
    }
  }
  return block;
}

void Bank::copy_block(Chain& ch, std::size_t zc, std::size_t at) const {
  for (std::size_t t = 0; t < zc; ++t) ch.apply(RuleInstance::simple(RuleId::NContr1, t, at + t));
}

}  // namespace actomega::detail
