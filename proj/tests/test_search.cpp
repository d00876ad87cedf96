#include <algorithm>

#include "actomega/exchange.hpp"
#include "actomega/ordinal.hpp"
#include "actomega/search.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actomega;
using test_support::FormulaGen;

namespace {

const SubexpSignature kMalc = parse_signature("labels: e\nE: e\n");
const SubexpSignature kFull = parse_signature("labels: s\nW: s\nC: s\nE: s\n");

bool has_rule(const std::vector<GeneralizedApplication>& apps, RuleId r) {
  return std::any_of(apps.begin(), apps.end(), [&](const auto& a) { return a.core.rule == r; });
}

SearchBudget with_depth(std::size_t d) {
  SearchBudget b;
  b.depth = d;
  return b;
}

bool consistent(const SearchResult& a, const SearchResult& b) {
  if (a.verdict == Verdict::Unknown || b.verdict == Verdict::Unknown) return true;
  return a.verdict == b.verdict;
}

}  // namespace

TEST_CASE("applicable rules examples") {
  auto id = applicable_rules(parse_sequent("a |- a"), kMalc, 4);
  bool found = false;
  for (const auto& a : id)
    if (a.core.rule == RuleId::Id && a.premises.empty() && a.perm_suffix.empty()) found = true;
  CHECK(found);

  auto star = applicable_rules(parse_sequent("|- a*"), kMalc, 4);
  REQUIRE(star.size() == 1);
  CHECK(star[0].core.rule == RuleId::StarR);
  CHECK(star[0].core.parts.empty());

  auto limp = applicable_rules(parse_sequent("a, a \\ b |- b"), kMalc, 4);
  found = false;
  for (const auto& a : limp)
    if (a.core.rule == RuleId::LimpL && a.core.pos == 1 && a.core.aux == 0) {
      found = true;
      REQUIRE(a.premises.size() == 2);
      CHECK(a.premises[0] == parse_sequent("a |- a"));
      CHECK(a.premises[1] == parse_sequent("b |- b"));
    }
  CHECK(found);
}

TEST_CASE("applicable rules are duplicate free and never structural cores") {
  FormulaGen g(31);
  g.labels = {"e"};
  for (int i = 0; i < 300; ++i) {
    Sequent s = g.sequent(3, 5);
    auto apps = applicable_rules(s, kMalc, 4);
    for (std::size_t x = 0; x < apps.size(); ++x) {
      RuleId r = apps[x].core.rule;
      CHECK(r != RuleId::Perm1);
      CHECK(r != RuleId::Perm2);
      CHECK(r != RuleId::Cut);
      CHECK(r != RuleId::Mix);
      for (const auto& p : apps[x].perm_suffix) CHECK((p.rule == RuleId::Perm1 || p.rule == RuleId::Perm2));
      for (std::size_t y = x + 1; y < apps.size(); ++y)
        CHECK_FALSE((apps[x].core == apps[y].core && apps[x].perm_suffix == apps[y].perm_suffix));
    }
  }
}

TEST_CASE("generalized premises have smaller eta") {
  std::size_t checked = 0;
  for (const auto& sig : test_support::contraction_free_sigs()) {
    FormulaGen g(32 + checked);
    g.labels = sig.labels();
    for (int i = 0; i < 400; ++i) {
      Sequent s = g.sequent(3, 6);
      NSeq e = eta(s);
      for (const auto& a : applicable_rules(s, sig, 4)) {
        if (a.omega) {
          for (std::size_t n = 0; n <= 10; ++n) CHECK(eta(a.omega_premise(n)) < e);
        }
        for (const auto& p : a.premises) CHECK(eta(p) < e);
        ++checked;
      }
    }
  }
  CHECK(checked > 1000);
}

TEST_CASE("prove examples") {
  for (const auto& sig : {kMalc, kFull}) {
    SearchBudget b = with_depth(6);
    auto r = prove(parse_sequent("p, p \\ q |- q"), sig, b);
    REQUIRE(r.verdict == Verdict::Derivable);
    CHECK(check(*r.derivation, sig).ok());
    CHECK(goal(*r.derivation) == parse_sequent("p, p \\ q |- q"));
  }
  CHECK(prove(parse_sequent("a & (b + c) |- a & b + a & c"), kMalc).verdict == Verdict::NotDerivable);

  auto one = prove(parse_sequent("1* |- 1"), kMalc);
  CHECK(one.verdict == Verdict::Unknown);
  CHECK(one.reason == UnknownReason::OmegaSampled);
  REQUIRE(one.derivation);
  const Derivation& w = *one.derivation;
  REQUIRE(w.is_omega());
  REQUIRE(w.premises().size() >= 5);
  for (std::size_t n = 0; n < w.premises().size(); ++n) {
    CHECK(w.premises()[n].conclusion() == omega_premise(parse_sequent("1* |- 1"), 0, n));
    CHECK(check(w.premises()[n], kMalc).status == CheckReport::Status::Valid);
  }
}

TEST_CASE("accepted templates certify star sequents") {
  SearchBudget b;
  b.accept_templates = true;
  auto r = prove(parse_sequent("1* |- 1"), kMalc, b);
  REQUIRE(r.verdict == Verdict::Derivable);
  auto rep = check(*r.derivation, kMalc, CheckMode::Bounded(12));
  CHECK(rep.status == CheckReport::Status::ValidUpTo);
  auto p = prove(parse_sequent("p* |- p*"), kMalc, b);
  REQUIRE(p.verdict == Verdict::Derivable);
  CHECK(check(*p.derivation, kMalc, CheckMode::Bounded(12)).ok());
  // one sampled premise refuted: the star sequent is refuted
  CHECK(prove(parse_sequent("p* |- p"), kMalc, b).verdict == Verdict::NotDerivable);
}

TEST_CASE("prove errors") {
  CHECK_THROWS_AS(prove(parse_sequent("!{z}a |- a"), kMalc), SignatureError);
  try {
    prove(parse_sequent("a |- a"), kFull);
    FAIL("expected MissingDepthBudget");
  } catch (const SearchError& e) {
    CHECK(e.kind() == SearchError::Kind::MissingDepthBudget);
  }
}

TEST_CASE("decide_starfree examples") {
  CHECK(decide_starfree(parse_sequent("b / (a / a) |- b"), kMalc));
  CHECK(decide_starfree(parse_sequent("(n/n)/(n/n), n/n, n |- n"), kMalc));
  // an empty argument segment proves n/n, so this one holds as well
  test_support::NaiveProver naive;
  Sequent eb = parse_sequent("(n/n)/(n/n), n |- n");
  CHECK(decide_starfree(eb, kMalc) == naive.derivable(eb));
  CHECK(decide_starfree(eb, kMalc));
  try {
    decide_starfree(parse_sequent("a* |- a"), kMalc);
    FAIL("expected StarPresent");
  } catch (const SearchError& e) {
    CHECK(e.kind() == SearchError::Kind::StarPresent);
  }
  try {
    decide_starfree(parse_sequent("a |- a"), kFull);
    FAIL("expected ContractionPresent");
  } catch (const SearchError& e) {
    CHECK(e.kind() == SearchError::Kind::ContractionPresent);
  }
}

TEST_CASE("star-free decisions agree with an independent prover") {
  FormulaGen g(33);
  g.stars = false;
  g.vars = {"p", "q", "r"};
  test_support::NaiveProver naive;
  std::size_t yes = 0;
  for (int i = 0; i < 1500; ++i) {
    Sequent s = g.sequent(3, 5);
    bool want = naive.derivable(s);
    yes += want;
    CHECK_MESSAGE(decide_starfree(s, kMalc) == want, print_sequent(s));
    auto r = prove(s, kMalc);
    CHECK(r.verdict != Verdict::Unknown);
    CHECK_MESSAGE(r.derivable() == want, print_sequent(s));
    if (r.derivation) {
      CHECK(check(*r.derivation, kMalc).status == CheckReport::Status::Valid);
      CHECK(is_cut_free(*r.derivation));
      CHECK(goal(*r.derivation) == s);
    }
  }
  CHECK(yes > 50);
}

TEST_CASE("derivations found under bangs and stars are checker valid") {
  FormulaGen g(34);
  g.labels = {"s"};
  std::size_t found = 0;
  for (int i = 0; i < 300; ++i) {
    Sequent s = g.sequent(2, 5);
    SearchBudget b = with_depth(4);
    b.accept_templates = true;
    auto r = prove(s, kFull, b);
    if (!r.derivation) continue;
    CHECK(goal(*r.derivation) == s);
    CHECK(is_cut_free(*r.derivation));
    if (r.verdict == Verdict::Derivable) {
      ++found;
      CHECK_MESSAGE(check(*r.derivation, kFull, CheckMode::Bounded(8)).ok(), print_sequent(s));
    }
  }
  CHECK(found > 30);
}

TEST_CASE("larger budgets never flip a verdict") {
  FormulaGen g(35);
  g.labels = {"s"};
  for (int i = 0; i < 200; ++i) {
    Sequent s = g.sequent(2, 4);
    SearchResult prev;
    for (std::size_t d = 1; d <= 4; ++d) {
      auto r = prove(s, kFull, with_depth(d));
      CHECK_MESSAGE(consistent(prev, r), print_sequent(s));
      if (prev.verdict == Verdict::Derivable) CHECK(r.verdict == Verdict::Derivable);
      if (prev.verdict == Verdict::NotDerivable) CHECK(r.verdict == Verdict::NotDerivable);
      prev = r;
    }
  }
  FormulaGen h(36);
  for (int i = 0; i < 150; ++i) {
    Sequent s = h.sequent(2, 4);
    SearchResult prev;
    for (std::size_t k : {1, 3, 5}) {
      SearchBudget b;
      b.omega_bound = k;
      auto r = prove(s, kMalc, b);
      CHECK_MESSAGE(consistent(prev, r), print_sequent(s));
      prev = r;
    }
  }
}

TEST_CASE("concurrent branches give the same result") {
  FormulaGen g(37);
  g.labels = {"s"};
  for (int i = 0; i < 120; ++i) {
    Sequent s = g.sequent(3, 5);
    SearchBudget one = with_depth(3), four = with_depth(3);
    four.jobs = 4;
    auto a = prove(s, kFull, one), b = prove(s, kFull, four);
    CHECK(a.to_string() == b.to_string());
    REQUIRE(a.derivation.has_value() == b.derivation.has_value());
    if (a.derivation) CHECK(write_derivation(*a.derivation) == write_derivation(*b.derivation));
  }
}
