#include "actomega/kleene.hpp"
#include "actomega/search.hpp"
#include "doctest.h"
#include "ka_slice.hpp"
#include "support.hpp"

using namespace actomega;

namespace {

const SubexpSignature kSig = parse_signature(ka_slice::kSig);

HypothesisSet hyps(const char* text) { return parse_hypotheses(text); }

template <class F>
KleeneError::Kind kleene_kind(F&& f) {
  try {
    f();
  } catch (const KleeneError& e) {
    return e.kind();
  }
  FAIL("expected KleeneError");
  return KleeneError::Kind::MalformedFile;
}

SearchBudget depth(std::size_t d) {
  SearchBudget b;
  b.depth = d;
  return b;
}

}  // namespace

TEST_CASE("Kleene language") {
  CHECK(check_ka_language(parse_formula("p . q*")));
  CHECK(check_ka_language(parse_formula("(1 + 0) . p*")));
  CHECK_FALSE(check_ka_language(parse_formula("p \\ q")));
  CHECK_FALSE(check_ka_language(parse_formula("q / p")));
  CHECK_FALSE(check_ka_language(parse_formula("p & q")));
  CHECK_FALSE(check_ka_language(parse_formula("!{c}p")));
  CHECK(check_ka_language(parse_sequent("p, q* |- p + q")));
  CHECK_FALSE(check_ka_language(parse_sequent("p, q \\ p |- p")));
}

TEST_CASE("hypothesis normalization and parsing") {
  auto h = normalize_hypothesis(parse_sequent("p, q, p |- q"));
  CHECK(h.u == parse_formula("(p . q) . p"));
  CHECK(h.v == parse_formula("q"));
  CHECK(normalize_hypothesis(parse_sequent("|- p")).u == Formula::one());
  CHECK(kleene_kind([] { normalize_hypothesis(parse_sequent("p \\ q |- q")); }) == KleeneError::Kind::LanguageViolation);

  auto set = parse_hypotheses("# comment\n\np |- q\n  q, q |- 1\n");
  REQUIRE(set.size() == 2);
  CHECK(set[1].u == parse_formula("q . q"));
  CHECK(kleene_kind([] { parse_hypotheses("p |- q\np |-\n"); }) == KleeneError::Kind::MalformedFile);
  CHECK(kleene_kind([] { parse_hypotheses("p / q |- q\n"); }) == KleeneError::Kind::LanguageViolation);

  auto file = load_hypotheses(test_support::corpus("hyp/transitive.hyp"));
  CHECK(file.size() == 2);
  CHECK_THROWS_AS(load_hypotheses("/nonexistent/x.hyp"), std::ios_base::failure);
}

TEST_CASE("encodings") {
  auto h = hyps("p |- q");
  CHECK(encode_unit_cancellers(parse_sequent("p |- q"), h, "c", kSig) ==
        parse_sequent("!{c}(1 / !{c}(q / p)), !{c}(q / p), p |- q"));
  CHECK(encode_unit_cancellers(parse_sequent("p |- p"), {}, "c", kSig) == parse_sequent("p |- p"));
  CHECK(encode_unit_cancellers(parse_sequent("p* |- q*"), h, "c", kSig) ==
        parse_sequent("!{c}(1 / !{c}(q / p)), !{c}(q / p), p* |- q*"));
  CHECK(encode_weakening(parse_sequent("p |- q"), h, "s", kSig) == parse_sequent("!{s}(q / p), p |- q"));
  CHECK(encode_weakening(parse_sequent("p |- p"), {}, "s", kSig) == parse_sequent("p |- p"));

  auto two = hyps("p |- q\nq |- 1");
  CHECK(encode_weakening(parse_sequent("p |- 1"), two, "s", kSig) ==
        parse_sequent("!{s}(q / p), !{s}(1 / q), p |- 1"));

  CHECK(kleene_kind([&] { encode_weakening(parse_sequent("p |- q"), h, "c", kSig); }) == KleeneError::Kind::LabelNotWC);
  auto no_c = parse_signature("labels: s c\nW: s\nC: s\nE: s\n");
  CHECK(kleene_kind([&] { encode_unit_cancellers(parse_sequent("p |- q"), h, "c", no_c); }) ==
        KleeneError::Kind::LabelNotContractible);
  CHECK(kleene_kind([&] { encode_weakening(parse_sequent("p \\ q |- q"), h, "s", kSig); }) ==
        KleeneError::Kind::LanguageViolation);
}

TEST_CASE("encoded examples are decided as expected") {
  auto h = hyps("p |- q");
  CHECK(prove(encode_weakening(parse_sequent("p |- q"), h, "s", kSig), kSig, depth(6)).derivable());
  CHECK(prove(encode_weakening(parse_sequent("q |- q"), h, "s", kSig), kSig, depth(6)).derivable());
  CHECK(prove(encode_unit_cancellers(parse_sequent("p |- q"), h, "c", kSig), kSig, depth(8)).derivable());
  // star goal: every sampled omega premise of the encoding holds
  Sequent star = encode_unit_cancellers(parse_sequent("p* |- q*"), h, "c", kSig);
  Sequent star_w = encode_weakening(parse_sequent("p* |- q*"), h, "s", kSig);
  for (std::size_t n = 0; n <= 5; ++n) {
    CAPTURE(n);
    auto w = ka_slice::deepen(omega_premise(star_w, 1, n), kSig, 8 + n);
    REQUIRE(w.derivable());
    auto c = weakening_to_cancellers(*w.derivation, h, "c");
    CHECK(c.conclusion() == omega_premise(star, 2, n));
    CHECK(check(c, kSig).status == CheckReport::Status::Valid);
  }
}

TEST_CASE("oracle examples") {
  auto h = hyps("p |- q");
  CHECK(ka_entails_oracle(parse_sequent("p |- q"), h) == std::optional<bool>(true));
  CHECK(ka_entails_oracle(parse_sequent("q |- p"), h) == std::optional<bool>(false));
  CHECK_FALSE(ka_entails_oracle(parse_sequent("p* |- p*"), {}).has_value());
  auto chain = load_hypotheses(test_support::corpus("hyp/transitive.hyp"));
  CHECK(ka_entails_oracle(parse_sequent("p |- 1"), chain) == std::optional<bool>(true));
  CHECK(ka_entails_oracle(parse_sequent("p, p |- 1 . 1"), chain) == std::optional<bool>(true));
  CHECK(ka_entails_oracle(parse_sequent("q |- 0"), chain) == std::optional<bool>(false));
}

TEST_CASE("erasure") {
  auto h = hyps("p |- q");
  auto d = prove(parse_sequent("!{s}(q / p), p |- q"), kSig, depth(6));
  REQUIRE(d.derivable());
  auto e = erase_translation(*d.derivation, h);
  CHECK(e.conclusion() == parse_sequent("p |- q"));
  CHECK(check_ka(e, h).status == CheckReport::Status::Valid);
  // the same derivation is not a proof without the hypothesis
  CHECK_FALSE(check_ka(e, {}).ok());

  auto unused = prove(parse_sequent("!{s}(q / p), q |- q . 1"), kSig, depth(6));
  REQUIRE(unused.derivable());
  auto pure = erase_translation(*unused.derivation, h);
  CHECK(pure.conclusion() == parse_sequent("q |- q . 1"));
  CHECK(check_ka(pure, {}).status == CheckReport::Status::Valid);

  auto twice = ka_slice::deepen(parse_sequent("!{s}(q / p), p, p |- q*"), kSig, 10);
  REQUIRE(twice.derivable());
  auto e2 = erase_translation(*twice.derivation, h);
  CHECK(e2.conclusion() == parse_sequent("p, p |- q*"));
  CHECK(check_ka(e2, h).status == CheckReport::Status::Valid);

  CHECK(kleene_kind([&] { erase_translation(*d.derivation, hyps("q |- p")); }) == KleeneError::Kind::NotAnEncoding);
  auto plain = prove(parse_sequent("p, q |- p . q"), kSig, depth(4));
  REQUIRE(plain.derivable());
  CHECK(erase_translation(*plain.derivation, {}).conclusion() == parse_sequent("p, q |- p . q"));
  CHECK(kleene_kind([&] { erase_translation(*plain.derivation, h); }) == KleeneError::Kind::NotAnEncoding);
}

TEST_CASE("canceller rewrite rejects non-encodings") {
  auto h = hyps("p |- q");
  auto d = prove(parse_sequent("!{s}(q / p), p |- q"), kSig, depth(6));
  REQUIRE(d.derivable());
  CHECK(kleene_kind([&] { weakening_to_cancellers(*d.derivation, h, "s"); }) == KleeneError::Kind::NotAnEncoding);
  CHECK(kleene_kind([&] { weakening_to_cancellers(*d.derivation, hyps("q |- q"), "c"); }) ==
        KleeneError::Kind::NotAnEncoding);
}

TEST_CASE("encodings agree with the oracle on a sample of the star-free slice") {
  auto goals = ka_slice::goals();
  auto sets = ka_slice::hypothesis_sets();
  CHECK(goals.size() == 116);
  CHECK(sets.size() == 137);
  std::size_t n = 0, yes = 0;
  // every 13th set and every 5th goal; the acceptance binary covers the whole slice
  for (std::size_t i = 0; i < sets.size(); i += 13)
    for (std::size_t j = i % 5; j < goals.size(); j += 5) {
      auto o = ka_slice::run(goals[j], sets[i], kSig);
      CAPTURE(ka_slice::describe(goals[j], sets[i]));
      CHECK(o.problem == "");
      CHECK(o.weakening.verdict != Verdict::Unknown);
      CHECK(o.weakening.derivable() == o.oracle);
      CHECK(o.cancellers.verdict == o.weakening.verdict);
      if (o.weakening.derivable()) {
        auto e = erase_translation(*o.weakening.derivation, sets[i]);
        CHECK(e.conclusion() == goals[j]);
        CHECK(check_ka(e, sets[i]).status == CheckReport::Status::Valid);
      }
      ++n;
      yes += o.oracle;
    }
  CHECK(n > 200);
  CHECK(yes > 50);
  CHECK(yes < n);
}
