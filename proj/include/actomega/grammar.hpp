#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "actomega/search.hpp"
#include "actomega/syntax.hpp"

namespace actomega {

class GrammarError : public std::runtime_error {
 public:
  enum class Kind { UnknownWord, MalformedLexicon };
  GrammarError(Kind k, const std::string& msg, std::string word = {})
      : std::runtime_error(msg), kind_(k), word_(std::move(word)) {}
  Kind kind() const { return kind_; }
  const std::string& word() const { return word_; }

 private:
  Kind kind_;
  std::string word_;
};

struct Lexicon {
  // words in first-appearance order, each with its types in file order
  std::vector<std::pair<std::string, std::vector<Formula>>> entries;
  Formula goal = Formula::var("S");
  SubexpSignature signature;

  const std::vector<Formula>* types_of(const std::string& word) const;
  void add(const std::string& word, Formula type);
};

// `word : formula` lines (a word may repeat), `goal: formula`, `sig: path` (relative to base_dir),
// '#' comments. Labels are checked against the signature once the whole file is read.
Lexicon parse_lexicon(const std::string& text, const std::string& base_dir = ".");
Lexicon load_lexicon(const std::string& path);

enum class Grammaticality { Grammatical, NotGrammatical, Unknown };
const char* grammaticality_name(Grammaticality g);

struct ParseOutcome {
  Grammaticality verdict = Grammaticality::Unknown;
  UnknownReason reason = UnknownReason::None;  // strongest reason among Unknown assignments
  std::optional<Derivation> derivation;        // Grammatical
  std::vector<Formula> assignment;             // Grammatical: the type chosen for each word
  std::size_t assignments_tried = 0;
  bool truncated = false;                      // more than max_assignments existed
};

constexpr std::size_t kMaxAssignments = 10'000;

// Tries assignments in lexicon order; the first Derivable one wins. budget.jobs > 1 proves
// assignments concurrently with the same outcome. Throws GrammarError(UnknownWord).
ParseOutcome parse_sentence(const std::vector<std::string>& words, const Lexicon& lex, const SearchBudget& budget,
                            std::size_t max_assignments = kMaxAssignments);

// T(w1), ..., T(wn) |- goal for one assignment (choice[i] indexes the types of word i).
Sequent sentence_sequent(const std::vector<std::string>& words, const Lexicon& lex, const std::vector<std::size_t>& choice);

}  // namespace actomega
