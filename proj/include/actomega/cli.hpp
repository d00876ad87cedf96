#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "actomega/search.hpp"

namespace actomega::cli {

enum ExitCode : int {
  kDerivable = 0,
  kNotDerivable = 1,
  kUnknown = 2,
  kUsage = 64,
  kNoInput = 66,
  kInternal = 70,
};

struct RunConfig {
  std::string subcommand;  // check | prove | cutelim | encode | eta | oracle | parse-grammar
  std::string sig_path;    // --sig, else $ACTOMEGA_SIG, else a signature without labels
  SearchBudget budget;
  std::optional<std::size_t> depth;
  std::string input;                  // sequent, formula or file, per subcommand
  std::vector<std::string> words;     // parse-grammar
  std::string emit_path;              // --emit-derivation
  std::string hyps_path;              // encode, oracle, check
  std::string lexicon_path;           // parse-grammar
  std::string goal;                   // parse-grammar override
  std::string encode_mode = "weakening";
  std::string encode_label;
  std::size_t max_len = 0;            // oracle
  std::size_t check_bound = 5;
  bool oracle_cut = false;
  bool encode_prove = false;
  bool strict = false;
  bool machine = false;
  bool trace = false;
  unsigned long long seed = 0;        // recorded; the search has no random choices
};

// args exclude the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace actomega::cli
