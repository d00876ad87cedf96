#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "actomega/syntax.hpp"

namespace actomega {

// Eventually-zero sequence (m0, m1, ...) of naturals, trailing zeros trimmed.
// Ordered anti-lexicographically: the highest differing index decides.
class NSeq {
 public:
  NSeq() = default;
  explicit NSeq(std::vector<std::uint64_t> coeffs);
  static NSeq iota() { return NSeq({1}); }

  std::uint64_t operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  // pointwise sum
  friend NSeq operator+(const NSeq& a, const NSeq& b);
  NSeq& operator+=(const NSeq& b);
  // (m0, m1, ...) -> (0, m0, m1, ...)
  NSeq lift() const;

  friend bool operator==(const NSeq&, const NSeq&) = default;
  friend std::strong_ordering operator<=>(const NSeq& a, const NSeq& b);

  // "(1,2)"; the zero sequence prints as "(0)"
  std::string to_string() const;

 private:
  void trim();
  std::vector<std::uint64_t> c_;
};

// Ordinal below w^w in Cantor normal form.
class CnfOrdinal {
 public:
  struct Term {
    std::uint64_t exponent;
    std::uint64_t coefficient;
    friend bool operator==(const Term&, const Term&) = default;
  };

  CnfOrdinal() = default;
  // Terms must have strictly decreasing exponents and nonzero coefficients.
  explicit CnfOrdinal(std::vector<Term> terms);
  static CnfOrdinal finite(std::uint64_t n);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_successor() const { return !terms_.empty() && terms_.back().exponent == 0; }

  // Ordinal successor.
  CnfOrdinal succ() const;
  // max(a, b)
  static CnfOrdinal max(const CnfOrdinal& a, const CnfOrdinal& b) { return a < b ? b : a; }

  friend bool operator==(const CnfOrdinal&, const CnfOrdinal&) = default;
  // Lexicographic comparison of the term lists.
  friend std::strong_ordering operator<=>(const CnfOrdinal& a, const CnfOrdinal& b);

  // "w^2*3 + w^1*1 + 2", zero prints as "0"
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

// The order isomorphism onto w^w.
CnfOrdinal nu(const NSeq& a);

NSeq eta(const Formula& f);
NSeq eta(const Sequent& s);

}  // namespace actomega
