#include "actomega/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

namespace actomega {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::shared_ptr<const Formula>& one_singleton() {
  static const auto f = std::make_shared<const Formula>(Formula::one());
  return f;
}

}  // namespace

Formula::Formula() : Formula(*one_singleton()) {}

Formula Formula::make(Connective k, std::string name, Formula a, Formula b, int arity) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  std::size_t h = mix(0x51ed270b, static_cast<std::size_t>(k));
  if (!n->name.empty()) h = mix(h, std::hash<std::string>{}(n->name));
  if (arity >= 1) {
    h = mix(h, a.hash());
    n->size += a.complexity();
    n->star_free = a.star_free();
    n->kids[0] = std::move(a);
  }
  if (arity >= 2) {
    h = mix(h, b.hash());
    n->size += b.complexity();
    n->star_free = n->star_free && b.star_free();
    n->kids[1] = std::move(b);
  }
  if (k == Connective::Star) n->star_free = false;
  n->hash = h;
  return Formula(std::shared_ptr<const Node>(std::move(n)));
}

Formula Formula::var(std::string name) { return make(Connective::Var, std::move(name), Formula(nullptr), Formula(nullptr), 0); }
Formula Formula::one() { return make(Connective::One, {}, Formula(nullptr), Formula(nullptr), 0); }
Formula Formula::zero() { return make(Connective::Zero, {}, Formula(nullptr), Formula(nullptr), 0); }
Formula Formula::limp(Formula a, Formula b) { return make(Connective::Limp, {}, std::move(a), std::move(b), 2); }
Formula Formula::rimp(Formula b, Formula a) { return make(Connective::Rimp, {}, std::move(b), std::move(a), 2); }
Formula Formula::tensor(Formula a, Formula b) { return make(Connective::Tensor, {}, std::move(a), std::move(b), 2); }
Formula Formula::with(Formula a, Formula b) { return make(Connective::With, {}, std::move(a), std::move(b), 2); }
Formula Formula::plus(Formula a, Formula b) { return make(Connective::Plus, {}, std::move(a), std::move(b), 2); }
Formula Formula::star(Formula a) { return make(Connective::Star, {}, std::move(a), Formula(nullptr), 1); }
Formula Formula::bang(std::string label, Formula a) {
  return make(Connective::Bang, std::move(label), std::move(a), Formula(nullptr), 1);
}

namespace {
int arity(Connective k) {
  switch (k) {
    case Connective::Var:
    case Connective::One:
    case Connective::Zero:
      return 0;
    case Connective::Star:
    case Connective::Bang:
      return 1;
    default:
      return 2;
  }
}
}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.complexity() != b.complexity()) return false;
  if (a.name() != b.name()) return false;
  int ar = arity(a.kind());
  if (ar >= 1 && !(a.left() == b.left())) return false;
  if (ar >= 2 && !(a.right() == b.right())) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name().compare(b.name()); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  int ar = arity(a.kind());
  if (ar >= 1)
    if (auto c = a.left() <=> b.left(); c != 0) return c;
  if (ar >= 2)
    if (auto c = a.right() <=> b.right(); c != 0) return c;
  return std::strong_ordering::equal;
}

std::size_t Sequent::hash() const {
  std::size_t h = mix(antecedent.size(), succedent.hash());
  for (const auto& f : antecedent) h = mix(h, f.hash());
  return h;
}

bool operator==(const Sequent& a, const Sequent& b) {
  return a.antecedent.size() == b.antecedent.size() && a.succedent == b.succedent &&
         std::equal(a.antecedent.begin(), a.antecedent.end(), b.antecedent.begin());
}

std::strong_ordering operator<=>(const Sequent& a, const Sequent& b) {
  if (auto c = a.antecedent.size() <=> b.antecedent.size(); c != 0) return c;
  for (std::size_t i = 0; i < a.antecedent.size(); ++i)
    if (auto c = a.antecedent[i] <=> b.antecedent[i]; c != 0) return c;
  return a.succedent <=> b.succedent;
}

ParseError::ParseError(const std::string& msg, std::size_t column)
    : std::runtime_error("column " + std::to_string(column) + ": " + msg), column_(column) {}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, One, Zero, LParen, RParen, Bang, Star, Dot, Amp, Plus, Backslash, Slash, Comma, Turnstile, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isalnum(static_cast<unsigned char>(s[j]))) ++j;
      auto word = s.substr(i, j - i);
      if (word == "1") out.push_back({Tok::One, "1", col});
      else if (word == "0") out.push_back({Tok::Zero, "0", col});
      else throw ParseError("unexpected token '" + std::string(word) + "'", col);
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", col}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", col}); ++i; continue;
      case '*': out.push_back({Tok::Star, "*", col}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", col}); ++i; continue;
      case '&': out.push_back({Tok::Amp, "&", col}); ++i; continue;
      case '+': out.push_back({Tok::Plus, "+", col}); ++i; continue;
      case '\\': out.push_back({Tok::Backslash, "\\", col}); ++i; continue;
      case '/': out.push_back({Tok::Slash, "/", col}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", col}); ++i; continue;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '-') {
          out.push_back({Tok::Turnstile, "|-", col});
          i += 2;
          continue;
        }
        throw ParseError("expected '|-'", col);
      case '!': {
        std::size_t j = i + 1;
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j >= s.size() || s[j] != '{') throw ParseError("expected '{' after '!'", j + 1);
        ++j;
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        std::size_t k = j;
        while (k < s.size() && (std::isalnum(static_cast<unsigned char>(s[k])) || s[k] == '_')) ++k;
        if (k == j) throw ParseError("expected subexponential label", j + 1);
        std::string label(s.substr(j, k - j));
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k >= s.size() || s[k] != '}') throw ParseError("expected '}'", k + 1);
        out.push_back({Tok::Bang, label, col});
        i = k + 1;
        continue;
      }
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", col);
    }
  }
  out.push_back({Tok::End, "", s.size() + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula formula() { return division(); }

  Sequent sequent() {
    Sequent s;
    if (peek().kind != Tok::Turnstile) {
      s.antecedent.push_back(formula());
      while (peek().kind == Tok::Comma) {
        ++pos_;
        s.antecedent.push_back(formula());
      }
    }
    expect(Tok::Turnstile, "'|-'");
    s.succedent = formula();
    return s;
  }

  void finish() {
    if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().column);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  void expect(Tok k, const char* what) {
    if (peek().kind != k) {
      const auto& t = peek();
      throw ParseError(std::string("expected ") + what + (t.kind == Tok::End ? " at end of input" : ", found '" + t.text + "'"),
                       t.column);
    }
    ++pos_;
  }

  Formula division() {
    Formula lhs = additive();
    while (peek().kind == Tok::Backslash || peek().kind == Tok::Slash) {
      bool back = peek().kind == Tok::Backslash;
      ++pos_;
      Formula rhs = additive();
      lhs = back ? Formula::limp(lhs, rhs) : Formula::rimp(lhs, rhs);
    }
    return lhs;
  }

  Formula additive() {
    Formula lhs = product();
    while (peek().kind == Tok::Amp || peek().kind == Tok::Plus) {
      bool amp = peek().kind == Tok::Amp;
      ++pos_;
      Formula rhs = product();
      lhs = amp ? Formula::with(lhs, rhs) : Formula::plus(lhs, rhs);
    }
    return lhs;
  }

  Formula product() {
    Formula lhs = unary();
    while (peek().kind == Tok::Dot) {
      ++pos_;
      lhs = Formula::tensor(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (peek().kind == Tok::Bang) {
      std::string label = peek().text;
      ++pos_;
      return Formula::bang(std::move(label), unary());
    }
    Formula f = primary();
    while (peek().kind == Tok::Star) {
      ++pos_;
      f = Formula::star(f);
    }
    return f;
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident: ++pos_; return Formula::var(t.text);
      case Tok::One: ++pos_; return Formula::one();
      case Tok::Zero: ++pos_; return Formula::zero();
      case Tok::LParen: {
        ++pos_;
        Formula f = division();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.column);
      default: throw ParseError("unexpected '" + t.text + "'", t.column);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Binding strength used by the printer; larger binds tighter.
int level(Connective k) {
  switch (k) {
    case Connective::Limp:
    case Connective::Rimp: return 1;
    case Connective::With:
    case Connective::Plus: return 2;
    case Connective::Tensor: return 3;
    case Connective::Bang: return 4;
    case Connective::Star: return 5;
    default: return 6;
  }
}

void print_into(const Formula& f, int min_level, std::string& out) {
  int lv = level(f.kind());
  bool paren = lv < min_level;
  if (paren) out += '(';
  switch (f.kind()) {
    case Connective::Var: out += f.name(); break;
    case Connective::One: out += '1'; break;
    case Connective::Zero: out += '0'; break;
    case Connective::Star:
      print_into(f.operand(), 5, out);
      out += '*';
      break;
    case Connective::Bang:
      out += "!{" + f.name() + "}";
      print_into(f.operand(), 4, out);
      break;
    default: {
      const char* op = f.kind() == Connective::Limp     ? " \\ "
                       : f.kind() == Connective::Rimp   ? " / "
                       : f.kind() == Connective::Tensor ? " . "
                       : f.kind() == Connective::With   ? " & "
                                                        : " + ";
      print_into(f.left(), lv, out);
      out += op;
      print_into(f.right(), lv + 1, out);
    }
  }
  if (paren) out += ')';
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(text);
  Sequent s = p.sequent();
  p.finish();
  return s;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_into(f, 0, out);
  return out;
}

std::string print_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (i) out += ", ";
    out += print_formula(s.antecedent[i]);
  }
  out += s.antecedent.empty() ? "|- " : " |- ";
  out += print_formula(s.succedent);
  return out;
}

std::size_t complexity(const Formula& f) { return f.complexity(); }

std::size_t complexity(const Sequent& s) {
  std::size_t n = s.succedent.complexity();
  for (const auto& f : s.antecedent) n += f.complexity();
  return n;
}

void collect_labels(const Formula& f, std::vector<std::string>& out) {
  switch (arity(f.kind())) {
    case 0: return;
    case 1:
      if (f.is(Connective::Bang)) out.push_back(f.name());
      collect_labels(f.operand(), out);
      return;
    default:
      collect_labels(f.left(), out);
      collect_labels(f.right(), out);
  }
}

// ---------------------------------------------------------------- signatures

SignatureError::SignatureError(Kind k, std::string msg, std::string set, std::string lo, std::string hi)
    : std::runtime_error(std::move(msg)), kind_(k), set_(std::move(set)), lo_(std::move(lo)), hi_(std::move(hi)) {}

int SubexpSignature::index_of(std::string_view l) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return static_cast<int>(i);
  return -1;
}

bool SubexpSignature::in(const std::vector<bool>& set, std::string_view l) const {
  int i = index_of(l);
  return i >= 0 && set[i];
}

bool SubexpSignature::leq(std::string_view a, std::string_view b) const {
  int i = index_of(a), j = index_of(b);
  return i >= 0 && j >= 0 && leq_[i][j];
}

bool SubexpSignature::contraction_free() const {
  return std::none_of(c_.begin(), c_.end(), [](bool b) { return b; });
}

void SubexpSignature::require_labels(const Formula& f) const {
  std::vector<std::string> ls;
  collect_labels(f, ls);
  for (const auto& l : ls)
    if (!has_label(l)) throw SignatureError(SignatureError::Kind::UnknownLabel, "unknown subexponential label '" + l + "'", {}, l);
}

void SubexpSignature::require_labels(const Sequent& s) const {
  for (const auto& f : s.antecedent) require_labels(f);
  require_labels(s.succedent);
}

SubexpSignature SubexpSignature::make(std::vector<std::string> labels,
                                      const std::vector<std::pair<std::string, std::string>>& order,
                                      const std::vector<std::string>& weak, const std::vector<std::string>& contr,
                                      const std::vector<std::string>& exch) {
  using K = SignatureError::Kind;
  SubexpSignature s;
  for (auto& l : labels) {
    if (s.index_of(l) >= 0) throw SignatureError(K::MalformedFile, "duplicate label '" + l + "'");
    s.labels_.push_back(std::move(l));
  }
  std::size_t n = s.labels_.size();
  auto idx = [&](const std::string& l) {
    int i = s.index_of(l);
    if (i < 0) throw SignatureError(K::MalformedFile, "undeclared label '" + l + "'");
    return static_cast<std::size_t>(i);
  };
  s.leq_.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) s.leq_[i][i] = true;
  for (const auto& [a, b] : order) s.leq_[idx(a)][idx(b)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (s.leq_[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (s.leq_[k][j]) s.leq_[i][j] = true;

  auto fill = [&](const std::vector<std::string>& src) {
    std::vector<bool> v(n, false);
    for (const auto& l : src) v[idx(l)] = true;
    return v;
  };
  s.w_ = fill(weak);
  s.c_ = fill(contr);
  s.e_ = fill(exch);

  const std::pair<const char*, const std::vector<bool>*> sets[] = {{"W", &s.w_}, {"C", &s.c_}, {"E", &s.e_}};
  for (const auto& [name, set] : sets)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((*set)[i] && s.leq_[i][j] && !(*set)[j])
          throw SignatureError(K::NotUpwardClosed,
                               std::string(name) + " is not upward closed: " + s.labels_[i] + " <= " + s.labels_[j],
                               name, s.labels_[i], s.labels_[j]);
  for (std::size_t i = 0; i < n; ++i)
    if (s.w_[i] && s.c_[i] && !s.e_[i])
      throw SignatureError(K::WCnotInE, "label " + s.labels_[i] + " is in W and C but not in E", {}, s.labels_[i]);
  return s;
}

namespace {
std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}
}  // namespace

SubexpSignature parse_signature(std::string_view text) {
  using K = SignatureError::Kind;
  std::vector<std::string> labels, w, c, e;
  std::vector<std::pair<std::string, std::string>> order;
  bool seen[5] = {};
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto body = split_ws(line);
    if (body.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw SignatureError(K::MalformedFile, "line " + std::to_string(lineno) + ": expected 'key: values'");
    auto keyw = split_ws(line.substr(0, colon));
    if (keyw.size() != 1) throw SignatureError(K::MalformedFile, "line " + std::to_string(lineno) + ": bad key");
    const std::string& key = keyw[0];
    auto vals = split_ws(line.substr(colon + 1));
    int slot;
    if (key == "labels") {
      slot = 0;
      labels.insert(labels.end(), vals.begin(), vals.end());
    } else if (key == "order") {
      slot = 1;
      for (const auto& v : vals) {
        auto p = v.find("<=");
        if (p == std::string::npos || p == 0 || p + 2 == v.size())
          throw SignatureError(K::MalformedFile, "line " + std::to_string(lineno) + ": bad order pair '" + v + "'");
        order.emplace_back(v.substr(0, p), v.substr(p + 2));
      }
    } else if (key == "W") {
      slot = 2;
      w.insert(w.end(), vals.begin(), vals.end());
    } else if (key == "C") {
      slot = 3;
      c.insert(c.end(), vals.begin(), vals.end());
    } else if (key == "E") {
      slot = 4;
      e.insert(e.end(), vals.begin(), vals.end());
    } else {
      throw SignatureError(K::MalformedFile, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (seen[slot]) throw SignatureError(K::MalformedFile, "line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    seen[slot] = true;
  }
  if (!seen[0]) throw SignatureError(K::MalformedFile, "missing 'labels:' line");
  return SubexpSignature::make(std::move(labels), order, w, c, e);
}

SubexpSignature load_signature(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open signature file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_signature(ss.str());
}

std::string SubexpSignature::to_string() const {
  std::string out = "labels:";
  for (const auto& l : labels_) out += " " + l;
  out += "\norder:";
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = 0; j < labels_.size(); ++j)
      if (i != j && leq_[i][j]) out += " " + labels_[i] + "<=" + labels_[j];
  auto dump = [&](const char* key, const std::vector<bool>& set) {
    out += std::string("\n") + key + ":";
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (set[i]) out += " " + labels_[i];
  };
  dump("W", w_);
  dump("C", c_);
  dump("E", e_);
  out += "\n";
  return out;
}

}  // namespace actomega
