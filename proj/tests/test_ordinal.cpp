#include <random>

#include "actomega/ordinal.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actomega;
using test_support::antilex;
using test_support::eta_oracle;

namespace {

NSeq random_nseq(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 5), val(0, 4);
  std::vector<std::uint64_t> c(len(rng));
  for (auto& x : c) x = val(rng);
  return NSeq(c);
}

// CNF comparison written independently: exponents then coefficients, highest term first
int cnf_cmp(const CnfOrdinal& a, const CnfOrdinal& b) {
  const auto &x = a.terms(), &y = b.terms();
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i].exponent != y[i].exponent) return x[i].exponent < y[i].exponent ? -1 : 1;
    if (x[i].coefficient != y[i].coefficient) return x[i].coefficient < y[i].coefficient ? -1 : 1;
  }
  if (x.size() == y.size()) return 0;
  return x.size() < y.size() ? -1 : 1;
}

int as_int(std::strong_ordering o) { return o < 0 ? -1 : o > 0 ? 1 : 0; }

}  // namespace

TEST_CASE("comparison examples") {
  CHECK((NSeq() <=> NSeq()) == std::strong_ordering::equal);
  CHECK(NSeq({5}) < NSeq({0, 1}));
  CHECK(NSeq({1, 2}) > NSeq({3, 1}));
}

TEST_CASE("canonical form trims zeros") {
  CHECK(NSeq({1, 0, 0}) == NSeq({1}));
  CHECK(NSeq({0, 0}).is_zero());
  CHECK(NSeq({1, 0, 0}).coeffs().size() == 1);
}

TEST_CASE("sum and lift examples") {
  CHECK(NSeq::iota() + NSeq::iota() == NSeq({2}));
  CHECK(NSeq({1, 1}) + NSeq({0, 2}) == NSeq({1, 3}));
  CHECK(NSeq({4, 0, 2}) + NSeq() == NSeq({4, 0, 2}));
  CHECK(NSeq::iota().lift() == NSeq({0, 1}));
  CHECK(NSeq().lift() == NSeq());
  CHECK(NSeq({2, 1}).lift() == NSeq({0, 2, 1}));
}

TEST_CASE("nu examples") {
  CHECK(nu(NSeq({2, 1})) == CnfOrdinal({{1, 1}, {0, 2}}));
  CHECK(nu(NSeq({2, 1})).to_string() == "w^1*1 + 2");
  CHECK(nu(NSeq()).is_zero());
  CHECK(nu(NSeq()).to_string() == "0");
  CHECK(nu(NSeq({0, 0, 3})) == CnfOrdinal({{2, 3}}));
}

TEST_CASE("eta examples") {
  auto p = Formula::var("p");
  CHECK(eta(p) == NSeq::iota());
  CHECK(eta(Formula::star(p)) == NSeq({1, 1}));
  CHECK(eta(parse_sequent("p, p \\ q |- q")) == NSeq({5}));
  CHECK(eta(Formula::zero()) == NSeq::iota());
}

TEST_CASE("algebraic laws on random sequences") {
  std::mt19937_64 rng(7);
  const NSeq iota = NSeq::iota();
  for (int i = 0; i < 3000; ++i) {
    NSeq a = random_nseq(rng), b = random_nseq(rng), c = random_nseq(rng);
    CHECK(as_int(a <=> b) == antilex(a.coeffs(), b.coeffs()));
    CHECK(as_int(a <=> b) == -as_int(b <=> a));
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a + NSeq() == a);
    CHECK(a < a + iota);
    if (a <= b) CHECK(a + c <= b + c);
    if (a < b) CHECK(a.lift() < b.lift());
    if (a < b && b < c) CHECK(a < c);
  }
}

TEST_CASE("repeated sums stay below the lift") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    NSeq a = random_nseq(rng);
    if (a.is_zero()) continue;
    NSeq sum;
    for (int n = 0; n < 40; ++n) {
      CHECK(sum < a.lift());
      sum += a;
    }
  }
}

TEST_CASE("nu is an order isomorphism") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 10000; ++i) {
    NSeq a = random_nseq(rng), b = random_nseq(rng);
    CHECK(as_int(a <=> b) == cnf_cmp(nu(a), nu(b)));
    CHECK(as_int(a <=> b) == as_int(nu(a) <=> nu(b)));
  }
}

TEST_CASE("eta matches an independent computation and is a successor") {
  test_support::FormulaGen g(10);
  g.labels = {"s"};
  for (int i = 0; i < 2000; ++i) {
    Sequent s = g.sequent(3, 8);
    NSeq e = eta(s);
    CHECK(e.coeffs() == eta_oracle(s));
    CHECK(e[0] != 0);
    CHECK(nu(e).is_successor());
  }
}
