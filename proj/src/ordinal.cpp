#include "actomega/ordinal.hpp"

#include <stdexcept>

namespace actomega {

NSeq::NSeq(std::vector<std::uint64_t> coeffs) : c_(std::move(coeffs)) { trim(); }

void NSeq::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

NSeq& NSeq::operator+=(const NSeq& b) {
  if (b.c_.size() > c_.size()) c_.resize(b.c_.size(), 0);
  for (std::size_t i = 0; i < b.c_.size(); ++i) c_[i] += b.c_[i];
  return *this;
}

NSeq operator+(const NSeq& a, const NSeq& b) {
  NSeq r = a;
  r += b;
  return r;
}

NSeq NSeq::lift() const {
  if (c_.empty()) return {};
  NSeq r;
  r.c_.reserve(c_.size() + 1);
  r.c_.push_back(0);
  r.c_.insert(r.c_.end(), c_.begin(), c_.end());
  return r;
}

std::strong_ordering operator<=>(const NSeq& a, const NSeq& b) {
  if (auto c = a.c_.size() <=> b.c_.size(); c != 0) return c;
  for (std::size_t i = a.c_.size(); i-- > 0;)
    if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string NSeq::to_string() const {
  if (c_.empty()) return "(0)";
  std::string out = "(";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c_[i]);
  }
  return out + ")";
}

CnfOrdinal::CnfOrdinal(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coefficient == 0) throw std::invalid_argument("CNF term with zero coefficient");
    if (i && terms_[i - 1].exponent <= terms_[i].exponent)
      throw std::invalid_argument("CNF exponents must strictly decrease");
  }
}

CnfOrdinal CnfOrdinal::finite(std::uint64_t n) {
  if (n == 0) return {};
  return CnfOrdinal({{0, n}});
}

CnfOrdinal CnfOrdinal::succ() const {
  CnfOrdinal r = *this;
  if (is_successor()) ++r.terms_.back().coefficient;
  else r.terms_.push_back({0, 1});
  return r;
}

std::strong_ordering operator<=>(const CnfOrdinal& a, const CnfOrdinal& b) {
  std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.terms_[i];
    const auto& y = b.terms_[i];
    if (x.exponent != y.exponent) return x.exponent <=> y.exponent;
    if (x.coefficient != y.coefficient) return x.coefficient <=> y.coefficient;
  }
  return a.terms_.size() <=> b.terms_.size();
}

std::string CnfOrdinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " + ";
    if (t.exponent == 0) out += std::to_string(t.coefficient);
    else out += "w^" + std::to_string(t.exponent) + "*" + std::to_string(t.coefficient);
  }
  return out;
}

CnfOrdinal nu(const NSeq& a) {
  std::vector<CnfOrdinal::Term> terms;
  const auto& c = a.coeffs();
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i]) terms.push_back({i, c[i]});
  return CnfOrdinal(std::move(terms));
}

NSeq eta(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var:
    case Connective::One:
    case Connective::Zero:  // not covered by the usual clauses; taken as iota like the other constants
      return NSeq::iota();
    case Connective::Bang: return eta(f.operand()) + NSeq::iota();
    case Connective::Star: return eta(f.operand()).lift() + NSeq::iota();
    default: return eta(f.left()) + eta(f.right()) + NSeq::iota();
  }
}

NSeq eta(const Sequent& s) {
  NSeq r = eta(s.succedent);
  for (const auto& f : s.antecedent) r += eta(f);
  return r;
}

}  // namespace actomega
