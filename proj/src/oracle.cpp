#include "actomega/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "actomega/derivation.hpp"
#include "bank.hpp"

namespace actomega {

UniverseTooLarge::UniverseTooLarge(std::size_t size, std::size_t cap)
    : std::runtime_error("universe of " + std::to_string(size) + " sequents exceeds the cap of " + std::to_string(cap)),
      size_(size),
      cap_(cap) {}

const OracleEntry* OracleReport::find(const Sequent& s) const {
  auto it = table.find(s);
  return it == table.end() ? nullptr : &it->second;
}

bool OracleReport::derivable(const Sequent& s) const {
  const OracleEntry* e = find(s);
  return e && e->derivable;
}

namespace {

struct AntHash {
  std::size_t operator()(const std::vector<Formula>& v) const {
    std::size_t h = v.size();
    for (const auto& f : v) h = h * 1000003u ^ f.hash();
    return h;
  }
};

}  // namespace

OracleReport fixpoint_oracle(const std::vector<Sequent>& universe, const SubexpSignature& sig,
                             const std::vector<Sequent>& extra_axioms, bool allow_cut, OracleOptions opts) {
  if (universe.size() > opts.universe_cap) throw UniverseTooLarge(universe.size(), opts.universe_cap);

  std::unordered_map<Sequent, std::int32_t, SequentHash> index;
  std::vector<const Sequent*> seqs;
  index.reserve(universe.size() * 2);
  for (const auto& s : universe) {
    if (index.emplace(s, std::int32_t(seqs.size())).second) seqs.push_back(&s);
  }
  const std::size_t N = seqs.size();
  auto id_of = [&](const Sequent& s) -> std::int32_t {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  };

  // rule instances as (conclusion, premises) over universe ids
  std::vector<std::int32_t> inst_concl;
  std::vector<std::int32_t> inst_remaining;
  std::vector<std::vector<std::int32_t>> users(N);  // premise id -> instances waiting on it
  std::vector<std::int32_t> stage_of(N, 0);
  std::vector<std::int32_t> frontier;
  bool closed = true, starless = true;

  auto add_instance = [&](std::int32_t concl, std::vector<std::int32_t> prem) {
    std::sort(prem.begin(), prem.end());
    prem.erase(std::unique(prem.begin(), prem.end()), prem.end());
    if (prem.empty()) {
      if (stage_of[concl] == 0) {
        stage_of[concl] = 1;
        frontier.push_back(concl);
      }
      return;
    }
    auto k = std::int32_t(inst_concl.size());
    inst_concl.push_back(concl);
    inst_remaining.push_back(std::int32_t(prem.size()));
    for (auto p : prem) users[p].push_back(k);
  };

  for (const auto& ax : extra_axioms)
    if (auto id = id_of(ax); id >= 0) add_instance(id, {});

  std::unordered_map<std::vector<Formula>, std::vector<std::int32_t>, AntHash> by_antecedent;
  if (allow_cut)
    for (std::size_t i = 0; i < N; ++i) by_antecedent[seqs[i]->antecedent].push_back(std::int32_t(i));

  std::vector<RuleInstance> rules;
  for (std::size_t i = 0; i < N; ++i) {
    const Sequent& s = *seqs[i];
    const auto& ant = s.antecedent;
    rules.clear();
    detail::core_rules(s, sig, rules);
    for (std::size_t p = 0; p < ant.size(); ++p) {
      if (!ant[p].is(Connective::Bang) || !sig.exchangeable(ant[p].name())) continue;
      for (std::size_t t = 0; t < ant.size(); ++t)
        if (t != p) rules.push_back(RuleInstance::simple(t > p ? RuleId::Perm1 : RuleId::Perm2, p, t));
    }
    for (const auto& r : rules) {
      if (r.rule == RuleId::StarL) {
        starless = false;
        continue;
      }
      Backward b = backward(s, r, &sig);
      if (!b.ok) continue;
      std::vector<std::int32_t> prem;
      bool inside = true;
      for (const auto& q : b.premises) {
        auto id = id_of(q);
        if (id < 0) {
          inside = false;
          break;
        }
        prem.push_back(id);
      }
      if (!inside) {
        closed = false;
        continue;
      }
      add_instance(std::int32_t(i), std::move(prem));
    }
    if (!allow_cut) continue;
    // cut: Pi |- A and Gamma, A, Delta |- C with Pi = ant[a, a+len)
    for (std::size_t a = 0; a <= ant.size(); ++a) {
      for (std::size_t len = 0; a + len <= ant.size(); ++len) {
        std::vector<Formula> pi(ant.begin() + a, ant.begin() + a + len);
        auto it = by_antecedent.find(pi);
        if (it == by_antecedent.end()) continue;
        for (auto left : it->second) {
          Sequent right;
          right.antecedent.assign(ant.begin(), ant.begin() + a);
          right.antecedent.push_back(seqs[left]->succedent);
          right.antecedent.insert(right.antecedent.end(), ant.begin() + a + len, ant.end());
          right.succedent = s.succedent;
          if (auto rid = id_of(right); rid >= 0 && rid != std::int32_t(i)) add_instance(std::int32_t(i), {left, rid});
        }
      }
    }
  }

  // semi-naive propagation, one stage at a time
  std::size_t stage = frontier.empty() ? 0 : 1;
  while (!frontier.empty()) {
    std::vector<std::int32_t> next;
    for (auto p : frontier) {
      for (auto k : users[p]) {
        if (--inst_remaining[k] != 0) continue;
        auto c = inst_concl[k];
        if (stage_of[c] == 0) {
          stage_of[c] = std::int32_t(stage + 1);
          next.push_back(c);
        }
      }
    }
    if (next.empty()) break;
    ++stage;
    frontier = std::move(next);
  }

  OracleReport rep;
  rep.table.reserve(N);
  for (std::size_t i = 0; i < N; ++i)
    rep.table.emplace(*seqs[i], OracleEntry{stage_of[i] > 0, std::size_t(stage_of[i])});
  rep.stages = stage;
  rep.exact = closed && starless && !allow_cut && extra_axioms.empty() && sig.contraction_free();
  return rep;
}

std::vector<Sequent> sequents_over(const std::vector<Formula>& formulas, std::size_t max_len) {
  std::vector<Sequent> out;
  std::vector<Formula> cur;
  std::function<void()> rec = [&] {
    for (const auto& c : formulas) out.push_back(Sequent{cur, c});
    if (cur.size() == max_len) return;
    for (const auto& f : formulas) {
      cur.push_back(f);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<Formula> subformula_closure(const std::vector<Formula>& roots) {
  std::vector<Formula> out;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    out.push_back(f);
    switch (f.kind()) {
      case Connective::Var:
      case Connective::One:
      case Connective::Zero: break;
      case Connective::Star:
      case Connective::Bang: walk(f.operand()); break;
      default:
        walk(f.left());
        walk(f.right());
    }
  };
  for (const auto& r : roots) walk(r);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace actomega
