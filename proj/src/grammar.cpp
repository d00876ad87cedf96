#include "actomega/grammar.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <mutex>
#include <thread>

namespace actomega {

const std::vector<Formula>* Lexicon::types_of(const std::string& word) const {
  for (const auto& [w, ts] : entries)
    if (w == word) return &ts;
  return nullptr;
}

void Lexicon::add(const std::string& word, Formula type) {
  for (auto& [w, ts] : entries)
    if (w == word) {
      ts.push_back(std::move(type));
      return;
    }
  entries.emplace_back(word, std::vector<Formula>{std::move(type)});
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

GrammarError malformed(int lineno, const std::string& what) {
  return GrammarError(GrammarError::Kind::MalformedLexicon, "lexicon line " + std::to_string(lineno) + ": " + what);
}

int reason_rank(UnknownReason r) {
  switch (r) {
    case UnknownReason::BudgetExhausted: return 3;
    case UnknownReason::PermWindow: return 2;
    case UnknownReason::OmegaSampled: return 1;
    default: return 0;
  }
}

}  // namespace

Lexicon parse_lexicon(const std::string& text, const std::string& base_dir) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_sig = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw malformed(lineno, "expected 'word : formula'");
    std::string key = trim(line.substr(0, colon)), rest = trim(line.substr(colon + 1));
    if (key.empty() || key.find_first_of(" \t") != std::string::npos) throw malformed(lineno, "bad word '" + key + "'");
    if (rest.empty()) throw malformed(lineno, "missing formula");
    if (key == "sig") {
      std::filesystem::path p(rest);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      lex.signature = load_signature(p.string());
      have_sig = true;
      continue;
    }
    Formula f;
    try {
      f = parse_formula(rest);
    } catch (const std::exception& e) {
      throw malformed(lineno, e.what());
    }
    if (key == "goal") lex.goal = std::move(f);
    else lex.add(key, std::move(f));
  }
  if (!have_sig) lex.signature = parse_signature("labels:\n");
  lex.signature.require_labels(lex.goal);
  for (const auto& [w, ts] : lex.entries)
    for (const auto& t : ts) lex.signature.require_labels(t);
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open lexicon file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lexicon(ss.str(), std::filesystem::path(path).parent_path().string());
}

const char* grammaticality_name(Grammaticality g) {
  switch (g) {
    case Grammaticality::Grammatical: return "Grammatical";
    case Grammaticality::NotGrammatical: return "NotGrammatical";
    case Grammaticality::Unknown: return "Unknown";
  }
  return "?";
}

Sequent sentence_sequent(const std::vector<std::string>& words, const Lexicon& lex, const std::vector<std::size_t>& choice) {
  Sequent s;
  for (std::size_t i = 0; i < words.size(); ++i) s.antecedent.push_back(lex.types_of(words[i])->at(choice[i]));
  s.succedent = lex.goal;
  return s;
}

ParseOutcome parse_sentence(const std::vector<std::string>& words, const Lexicon& lex, const SearchBudget& budget,
                            std::size_t max_assignments) {
  std::vector<const std::vector<Formula>*> types;
  for (const auto& w : words) {
    auto* ts = lex.types_of(w);
    if (!ts) throw GrammarError(GrammarError::Kind::UnknownWord, "word not in lexicon: " + w, w);
    types.push_back(ts);
  }

  // assignments in lexicon order: the last word varies fastest
  ParseOutcome out;
  std::size_t total = 1;
  for (auto* ts : types) {
    total *= ts->size();
    if (total > max_assignments) {
      out.truncated = true;
      total = max_assignments;
      break;
    }
  }
  auto choice_of = [&](std::size_t idx) {
    std::vector<std::size_t> c(words.size());
    for (std::size_t i = words.size(); i-- > 0;) {
      c[i] = idx % types[i]->size();
      idx /= types[i]->size();
    }
    return c;
  };

  std::vector<std::optional<SearchResult>> results(total);
  if (budget.jobs <= 1 || total == 1) {
    for (std::size_t i = 0; i < total; ++i) {
      results[i] = prove(sentence_sequent(words, lex, choice_of(i)), lex.signature, budget);
      if (results[i]->derivable()) break;
    }
  } else {
    SearchBudget inner = budget;
    inner.jobs = 1;
    std::atomic<std::size_t> next{0}, first_hit{total};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < total;) {
        if (i > first_hit.load()) continue;
        try {
          results[i] = prove(sentence_sequent(words, lex, choice_of(i)), lex.signature, inner);
        } catch (...) {
          std::lock_guard lk(failure_mu);
          if (!failure) failure = std::current_exception();
          return;
        }
        if (results[i]->derivable()) {
          std::size_t cur = first_hit.load();
          while (i < cur && !first_hit.compare_exchange_weak(cur, i)) {}
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(budget.jobs, total); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  bool all_refuted = true;
  for (std::size_t i = 0; i < total; ++i) {
    if (!results[i]) break;
    const SearchResult& r = *results[i];
    ++out.assignments_tried;
    if (r.derivable()) {
      out.verdict = Grammaticality::Grammatical;
      out.reason = UnknownReason::None;
      out.derivation = r.derivation;
      auto c = choice_of(i);
      for (std::size_t k = 0; k < words.size(); ++k) out.assignment.push_back((*types[k])[c[k]]);
      return out;
    }
    if (r.verdict == Verdict::Unknown) {
      all_refuted = false;
      if (reason_rank(r.reason) > reason_rank(out.reason)) out.reason = r.reason;
    }
  }
  if (all_refuted && !out.truncated) {
    out.verdict = Grammaticality::NotGrammatical;
  } else {
    out.verdict = Grammaticality::Unknown;
    if (out.truncated && out.reason == UnknownReason::None) out.reason = UnknownReason::BudgetExhausted;
  }
  return out;
}

}  // namespace actomega
