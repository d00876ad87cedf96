#include "countermodel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace actomega::detail {

namespace {

using Rel = std::uint16_t;  // bit i*n+j is the pair (i, j)

bool has(Rel r, int n, int i, int j) { return (r >> (i * n + j)) & 1u; }
Rel bit(int n, int i, int j) { return Rel(1u << (i * n + j)); }

Rel ident(int n) {
  Rel r = 0;
  for (int i = 0; i < n; ++i) r |= bit(n, i, i);
  return r;
}

Rel compose(Rel a, Rel b, int n) {
  Rel r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (has(a, n, i, j))
        for (int k = 0; k < n; ++k)
          if (has(b, n, j, k)) r |= bit(n, i, k);
  return r;
}

// largest X with X;u <= v
Rel over(Rel v, Rel u, int n) {
  Rel r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool ok = true;
      for (int c = 0; c < n && ok; ++c)
        if (has(u, n, b, c) && !has(v, n, a, c)) ok = false;
      if (ok) r |= bit(n, a, b);
    }
  return r;
}

// largest X with u;X <= v
Rel under(Rel u, Rel v, int n) {
  Rel r = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      bool ok = true;
      for (int c = 0; c < n && ok; ++c)
        if (has(u, n, c, a) && !has(v, n, c, b)) ok = false;
      if (ok) r |= bit(n, a, b);
    }
  return r;
}

Rel closure(Rel a, int n) {
  Rel r = ident(n) | a;
  for (;;) {
    Rel next = r | compose(r, r, n);
    if (next == r) return r;
    r = next;
  }
}

}  // namespace

SmallModels::SmallModels(const std::vector<std::string>& vars, bool wide, std::size_t max_valuations) {
  for (std::uint8_t n = 1; n <= 2; ++n) {
    const std::size_t per_var = std::size_t(1) << (n * n);
    std::size_t total = 1;
    for (std::size_t i = 0; i < vars.size() && total <= max_valuations; ++i) total *= per_var;
    if (total > max_valuations) continue;
    for (std::size_t code = 0; code < total; ++code) {
      Val v{n, {}};
      std::size_t c = code;
      for (const auto& x : vars) {
        v.env[x] = Rel(c % per_var);
        c /= per_var;
      }
      vals_.push_back(std::move(v));
    }
  }
  if (!wide || vars.empty() || vars.size() > 2) return;
  std::vector<Rel> family;
  for (Rel r = 0; r < 512; ++r) {
    Rel diag = r & ident(3);
    if (vars.size() == 1 || diag == 0 || diag == ident(3)) family.push_back(r);
  }
  for (std::size_t code = 0; code < std::size_t(std::pow(family.size(), vars.size())); ++code) {
    Val v{3, {}};
    std::size_t c = code;
    for (const auto& x : vars) {
      v.env[x] = family[c % family.size()];
      c /= family.size();
    }
    vals_.push_back(std::move(v));
  }
}

const std::vector<std::uint16_t>& SmallModels::eval(const Formula& f) {
  if (auto it = cache_.find(f); it != cache_.end()) return it->second;
  std::vector<Rel> out(vals_.size());
  auto un = [&](auto op) {
    const auto& a = eval(f.operand());
    for (std::size_t k = 0; k < vals_.size(); ++k) out[k] = op(a[k], vals_[k].n);
  };
  auto bin = [&](auto op) {
    const auto a = eval(f.left());
    const auto& b = eval(f.right());
    for (std::size_t k = 0; k < vals_.size(); ++k) out[k] = op(a[k], b[k], vals_[k].n);
  };
  switch (f.kind()) {
    case Connective::Var:
      for (std::size_t k = 0; k < vals_.size(); ++k) {
        auto it = vals_[k].env.find(f.name());
        out[k] = it == vals_[k].env.end() ? 0 : it->second;  // unknown variables: empty relation
      }
      break;
    case Connective::One:
      for (std::size_t k = 0; k < vals_.size(); ++k) out[k] = ident(vals_[k].n);
      break;
    case Connective::Zero: break;
    case Connective::Tensor: bin([](Rel a, Rel b, int n) { return compose(a, b, n); }); break;
    case Connective::Plus: bin([](Rel a, Rel b, int) { return Rel(a | b); }); break;
    case Connective::With: bin([](Rel a, Rel b, int) { return Rel(a & b); }); break;
    case Connective::Limp: bin([](Rel a, Rel b, int n) { return under(a, b, n); }); break;
    case Connective::Rimp: bin([](Rel b, Rel a, int n) { return over(b, a, n); }); break;
    case Connective::Star: un([](Rel a, int n) { return closure(a, n); }); break;
    case Connective::Bang:
      un([](Rel a, int n) { return (a & ident(n)) == ident(n) ? ident(n) : Rel(0); });
      break;
  }
  return cache_.emplace(f, std::move(out)).first->second;
}

bool SmallModels::refutes(const Sequent& s) {
  if (vals_.empty()) return false;
  std::vector<Rel> prod(vals_.size());
  for (std::size_t k = 0; k < vals_.size(); ++k) prod[k] = ident(vals_[k].n);
  for (const auto& f : s.antecedent) {
    const auto& v = eval(f);
    for (std::size_t k = 0; k < vals_.size(); ++k) prod[k] = compose(prod[k], v[k], vals_[k].n);
  }
  const auto& c = eval(s.succedent);
  for (std::size_t k = 0; k < vals_.size(); ++k)
    if (prod[k] & ~c[k]) return true;
  return false;
}

std::vector<std::string> variables_of(const Sequent& s) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& f) {
    switch (f.kind()) {
      case Connective::Var: out.push_back(f.name()); break;
      case Connective::One:
      case Connective::Zero: break;
      case Connective::Star:
      case Connective::Bang: walk(f.operand()); break;
      default:
        walk(f.left());
        walk(f.right());
    }
  };
  for (const auto& f : s.antecedent) walk(f);
  walk(s.succedent);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace actomega::detail
