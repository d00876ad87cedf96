#include <functional>

#include "actomega/exchange.hpp"
#include "actomega/grammar.hpp"
#include "actomega/search.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actomega;
using test_support::corpus;

namespace {

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find(' ', i);
    if (j == std::string::npos) j = s.size();
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

Grammaticality verdict(const std::string& lex, const std::string& sentence, const char* goal = nullptr,
                       std::size_t depth = 0) {
  Lexicon l = load_lexicon(corpus("lex/" + lex));
  if (goal) l.goal = parse_formula(goal);
  SearchBudget b;
  if (depth) b.depth = depth;
  return parse_sentence(words(sentence), l, b).verdict;
}

GrammarError::Kind grammar_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const GrammarError& e) {
    return e.kind();
  }
  FAIL("expected GrammarError");
  return GrammarError::Kind::MalformedLexicon;
}

constexpr auto G = Grammaticality::Grammatical;
constexpr auto NG = Grammaticality::NotGrammatical;

}  // namespace

TEST_CASE("basic sentences") {
  CHECK(verdict("basic.lex", "John runs") == G);
  CHECK(verdict("basic.lex", "John loves Mary") == G);
  CHECK(verdict("basic.lex", "the red ball", "np") == G);
  CHECK(verdict("basic.lex", "extremely interesting book", "n") == G);
  CHECK(verdict("basic.lex", "runs John") == NG);
  CHECK(verdict("basic.lex", "John loves", "s") == NG);
}

TEST_CASE("intensifier without an adjective follows the star-free decision") {
  // the outer argument n/n can be proved from the empty context, so the logic accepts it
  Lexicon l = load_lexicon(corpus("lex/basic.lex"));
  l.goal = parse_formula("n");
  auto w = words("extremely book");
  auto out = parse_sentence(w, l, SearchBudget{});
  bool decided = decide_starfree(sentence_sequent(w, l, {0, 0}), l.signature);
  CHECK((out.verdict == G) == decided);
  CHECK(out.verdict != Grammaticality::Unknown);
}

TEST_CASE("medial extraction needs exchange on the gap") {
  const char* s = "book that John read yesterday";
  CHECK(verdict("rel_e.lex", s) == G);
  CHECK(verdict("rel_none.lex", s) == NG);
  CHECK(verdict("rel_w.lex", s) == NG);
  CHECK(verdict("rel_c.lex", s, nullptr, 8) != G);
  for (const char* lex : {"rel_e.lex", "rel_none.lex", "rel_w.lex"}) CHECK(verdict(lex, "book that John read") == G);
}

TEST_CASE("an unfilled gap needs weakening") {
  const char* s = "book that John loves Mary";
  CHECK(verdict("rel_w.lex", s) == G);
  CHECK(verdict("rel_none.lex", s) == NG);
  CHECK(verdict("rel_e.lex", s) == NG);
}

TEST_CASE("parasitic extraction needs contraction on the gap") {
  const char* s = "paper that John signed without reading";
  CHECK(verdict("parasitic_c.lex", s, nullptr, 8) == G);
  CHECK(verdict("parasitic_none.lex", s) == NG);
}

TEST_CASE("witness and assignment") {
  Lexicon l = load_lexicon(corpus("lex/rel_e.lex"));
  auto w = words("book that John read yesterday");
  auto out = parse_sentence(w, l, SearchBudget{});
  REQUIRE(out.verdict == G);
  REQUIRE(out.derivation);
  REQUIRE(out.assignment.size() == w.size());
  CHECK(out.assignment[1] == parse_formula("(n\\n)/(s/!{e}np)"));
  CHECK(goal(*out.derivation) == sentence_sequent(w, l, std::vector<std::size_t>(w.size(), 0)));
  CHECK(check(*out.derivation, l.signature).status == CheckReport::Status::Valid);
  CHECK(out.assignments_tried == 1);
}

TEST_CASE("ambiguous words are tried in lexicon order") {
  Lexicon l = parse_lexicon("goal: s\nJohn : np\nsaw : n\nsaw : (np\\s)/np\nsaw : np\\s\nMary : np\nit : np\n");
  REQUIRE(l.types_of("saw"));
  CHECK(l.types_of("saw")->size() == 3);
  auto out = parse_sentence(words("John saw Mary"), l, SearchBudget{});
  CHECK(out.verdict == G);
  CHECK(out.assignments_tried == 2);
  CHECK(out.assignment[1] == parse_formula("(np\\s)/np"));
  auto intr = parse_sentence(words("John saw"), l, SearchBudget{});
  CHECK(intr.verdict == G);
  CHECK(intr.assignment[1] == parse_formula("np\\s"));
  CHECK(intr.assignments_tried == 3);
  auto none = parse_sentence(words("saw John"), l, SearchBudget{});
  CHECK(none.verdict == NG);
  CHECK(none.assignments_tried == 3);

  auto capped = parse_sentence(words("saw saw saw"), l, SearchBudget{}, 5);
  CHECK(capped.truncated);
  CHECK(capped.assignments_tried <= 5);
  CHECK(capped.verdict != G);
}

TEST_CASE("concurrent assignments give the same witness") {
  Lexicon l = parse_lexicon("goal: s\nJohn : np\nsaw : n\nsaw : np\nsaw : (np\\s)/np\nsaw : np\\s\nMary : np\nMary : n\n");
  for (const char* s : {"John saw Mary", "John saw", "Mary saw John", "saw saw"}) {
    SearchBudget one, four;
    four.jobs = 4;
    auto a = parse_sentence(words(s), l, one), b = parse_sentence(words(s), l, four);
    CHECK(a.verdict == b.verdict);
    CHECK(a.assignment == b.assignment);
    CHECK(a.assignments_tried == b.assignments_tried);
    if (a.derivation && b.derivation) CHECK(write_derivation(*a.derivation) == write_derivation(*b.derivation));
  }
}

TEST_CASE("lexicon errors") {
  Lexicon l = load_lexicon(corpus("lex/basic.lex"));
  try {
    parse_sentence(words("John sleeps"), l, SearchBudget{});
    FAIL("expected UnknownWord");
  } catch (const GrammarError& e) {
    CHECK(e.kind() == GrammarError::Kind::UnknownWord);
    CHECK(e.word() == "sleeps");
  }
  CHECK(grammar_kind([] { parse_lexicon("John np\n"); }) == GrammarError::Kind::MalformedLexicon);
  CHECK(grammar_kind([] { parse_lexicon("John : np \\\n"); }) == GrammarError::Kind::MalformedLexicon);
  CHECK_THROWS_AS(parse_lexicon("John : !{z}np\n"), SignatureError);
  CHECK(grammar_kind([] { parse_lexicon("goal: \n"); }) == GrammarError::Kind::MalformedLexicon);
  CHECK_THROWS(load_lexicon("/nonexistent/x.lex"));
  auto comments = parse_lexicon("# only a comment\n\ngoal: n\nbook : n # trailing\n");
  CHECK(comments.goal == parse_formula("n"));
  CHECK(comments.types_of("book"));
  CHECK_FALSE(comments.types_of("John"));
}
