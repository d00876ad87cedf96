#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "actomega/derivation.hpp"
#include "actomega/syntax.hpp"

namespace test_support {

using namespace actomega;

inline const char* corpus_dir() { return ACTOMEGA_CORPUS_DIR; }
inline std::string corpus(const std::string& rel) { return std::string(ACTOMEGA_CORPUS_DIR) + "/" + rel; }

inline SubexpSignature sig_of(const std::string& text) { return parse_signature(text); }

// labels without contraction, in three shapes
inline std::vector<SubexpSignature> contraction_free_sigs() {
  return {
      parse_signature("labels: e\n"),
      parse_signature("labels: e w\nW: w\nE: e w\n"),
      parse_signature("labels: a b\norder: a<=b\nE: a b\nW: b\n"),
  };
}

struct FormulaGen {
  std::mt19937_64 rng;
  std::vector<std::string> vars{"p", "q"};
  std::vector<std::string> labels;  // empty: no bangs
  bool stars = true;
  bool constants = true;

  explicit FormulaGen(std::uint64_t seed) : rng(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Formula atom() {
    std::size_t k = pick(vars.size() + (constants ? 2 : 0));
    if (k < vars.size()) return Formula::var(vars[k]);
    return k == vars.size() ? Formula::one() : Formula::zero();
  }

  // at most `size` occurrences of variables, constants and connectives
  Formula gen(std::size_t size) {
    if (size <= 1) return atom();
    std::size_t kinds = 6 + (stars ? 1 : 0) + (labels.empty() ? 0 : 1);
    std::size_t k = pick(kinds);
    if (k < 6) {
      if (size < 3) return atom();
      std::size_t l = 1 + pick(size - 2);
      Formula a = gen(l), b = gen(size - 1 - l);
      switch (k) {
        case 0: return Formula::limp(a, b);
        case 1: return Formula::rimp(a, b);
        case 2: return Formula::tensor(a, b);
        case 3: return Formula::with(a, b);
        case 4: return Formula::plus(a, b);
        default: return Formula::tensor(b, a);
      }
    }
    if (k == 6 && stars) return Formula::star(gen(size - 1));
    return Formula::bang(labels[pick(labels.size())], gen(size - 1));
  }

  Sequent sequent(std::size_t max_ant, std::size_t size) {
    Sequent s;
    std::size_t n = pick(max_ant + 1);
    for (std::size_t i = 0; i < n; ++i) s.antecedent.push_back(gen(1 + pick(size)));
    s.succedent = gen(1 + pick(size));
    return s;
  }
};

// Independent implementation of the complexity measure on plain coefficient vectors.
inline std::vector<std::uint64_t> eta_oracle(const Formula& f) {
  auto add = [](std::vector<std::uint64_t> a, const std::vector<std::uint64_t>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
  };
  const std::vector<std::uint64_t> iota{1};
  switch (f.kind()) {
    case Connective::Var:
    case Connective::One:
    case Connective::Zero: return iota;
    case Connective::Bang: return add(eta_oracle(f.operand()), iota);
    case Connective::Star: {
      auto a = eta_oracle(f.operand());
      a.insert(a.begin(), 0);
      return add(a, iota);
    }
    default: return add(add(eta_oracle(f.left()), eta_oracle(f.right())), iota);
  }
}

inline std::vector<std::uint64_t> eta_oracle(const Sequent& s) {
  std::vector<std::uint64_t> acc;
  auto add = [&](const std::vector<std::uint64_t>& b) {
    if (acc.size() < b.size()) acc.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) acc[i] += b[i];
  };
  for (const auto& f : s.antecedent) add(eta_oracle(f));
  add(eta_oracle(s.succedent));
  while (!acc.empty() && acc.back() == 0) acc.pop_back();
  return acc;
}

// anti-lexicographic comparison of padded vectors: -1, 0, 1
inline int antilex(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  std::size_t n = std::max(a.size(), b.size());
  a.resize(n, 0);
  b.resize(n, 0);
  for (std::size_t i = n; i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

// Plain backward prover for bang-free, star-free sequents, written against the rule shapes
// directly. Every premise is smaller than its conclusion, so plain recursion terminates.
class NaiveProver {
 public:
  bool derivable(const Sequent& s) {
    std::string key = print_sequent(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool r = search(s.antecedent, s.succedent);
    memo_[key] = r;
    return r;
  }

 private:
  using Ant = std::vector<Formula>;
  std::map<std::string, bool> memo_;

  bool d(const Ant& a, const Formula& c) { return derivable(Sequent{a, c}); }

  static Ant cat(std::initializer_list<Ant> parts) {
    Ant out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  }
  static Ant sub(const Ant& a, std::size_t i, std::size_t j) { return Ant(a.begin() + i, a.begin() + j); }

  bool search(const Ant& a, const Formula& c) {
    const std::size_t n = a.size();
    if (n == 1 && a[0] == c) return true;
    if (n == 0 && c.is(Connective::One)) return true;
    for (const auto& f : a)
      if (f.is(Connective::Zero)) return true;
    switch (c.kind()) {
      case Connective::Limp:
        if (d(cat({{c.left()}, a}), c.right())) return true;
        break;
      case Connective::Rimp:
        if (d(cat({a, {c.right()}}), c.left())) return true;
        break;
      case Connective::With:
        if (d(a, c.left()) && d(a, c.right())) return true;
        break;
      case Connective::Plus:
        if (d(a, c.left()) || d(a, c.right())) return true;
        break;
      case Connective::Tensor:
        for (std::size_t k = 0; k <= n; ++k)
          if (d(sub(a, 0, k), c.left()) && d(sub(a, k, n), c.right())) return true;
        break;
      default: break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Formula& f = a[i];
      Ant pre = sub(a, 0, i), post = sub(a, i + 1, n);
      switch (f.kind()) {
        case Connective::One:
          if (d(cat({pre, post}), c)) return true;
          break;
        case Connective::Tensor:
          if (d(cat({pre, {f.left(), f.right()}, post}), c)) return true;
          break;
        case Connective::Plus:
          if (d(cat({pre, {f.left()}, post}), c) && d(cat({pre, {f.right()}, post}), c)) return true;
          break;
        case Connective::With:
          if (d(cat({pre, {f.left()}, post}), c) || d(cat({pre, {f.right()}, post}), c)) return true;
          break;
        case Connective::Limp:  // Pi = a[j..i) proves the left side
          for (std::size_t j = 0; j <= i; ++j)
            if (d(sub(a, j, i), f.left()) && d(cat({sub(a, 0, j), {f.right()}, post}), c)) return true;
          break;
        case Connective::Rimp:  // Pi = a(i..k) proves the right side
          for (std::size_t k = i + 1; k <= n; ++k)
            if (d(sub(a, i + 1, k), f.right()) && d(cat({pre, {f.left()}, sub(a, k, n)}), c)) return true;
          break;
        default: break;
      }
    }
    return false;
  }
};

}  // namespace test_support
