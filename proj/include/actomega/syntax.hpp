#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actomega {

enum class Connective : std::uint8_t { Var, One, Zero, Limp, Rimp, Tensor, With, Plus, Star, Bang };

// Immutable formula handle. Copies share the node; equality is structural.
class Formula {
 public:
  Formula();  // the constant 1

  static Formula var(std::string name);
  static Formula one();
  static Formula zero();
  // a \ b
  static Formula limp(Formula a, Formula b);
  // b / a  (left() is b, right() is a)
  static Formula rimp(Formula b, Formula a);
  static Formula tensor(Formula a, Formula b);
  static Formula with(Formula a, Formula b);
  static Formula plus(Formula a, Formula b);
  static Formula star(Formula a);
  static Formula bang(std::string label, Formula a);

  Connective kind() const;
  bool is(Connective c) const { return kind() == c; }
  // Variable name, or the label of a Bang.
  const std::string& name() const;
  const Formula& left() const;
  const Formula& right() const;
  // Operand of Star / Bang.
  const Formula& operand() const { return left(); }

  std::size_t hash() const;
  std::size_t complexity() const;
  bool star_free() const;
  bool same_node(const Formula& o) const { return node_ == o.node_; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Connective k, std::string name, Formula a, Formula b, int arity);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Connective kind = Connective::One;
  std::string name;
  std::array<Formula, 2> kids{Formula(nullptr), Formula(nullptr)};
  std::size_t hash = 0;
  std::size_t size = 1;
  bool star_free = true;
};

inline Connective Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::left() const { return node_->kids[0]; }
inline const Formula& Formula::right() const { return node_->kids[1]; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::complexity() const { return node_->size; }
inline bool Formula::star_free() const { return node_->star_free; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

struct Sequent {
  std::vector<Formula> antecedent;
  Formula succedent;

  std::size_t hash() const;
  friend bool operator==(const Sequent& a, const Sequent& b);
  friend std::strong_ordering operator<=>(const Sequent& a, const Sequent& b);
};

struct SequentHash {
  std::size_t operator()(const Sequent& s) const { return s.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t column);
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

Formula parse_formula(std::string_view text);
Sequent parse_sequent(std::string_view text);
std::string print_formula(const Formula& f);
std::string print_sequent(const Sequent& s);

std::size_t complexity(const Formula& f);
std::size_t complexity(const Sequent& s);

// All labels used by bangs inside f, in first-occurrence order (may repeat).
void collect_labels(const Formula& f, std::vector<std::string>& out);

class SignatureError : public std::runtime_error {
 public:
  enum class Kind { MalformedFile, NotUpwardClosed, WCnotInE, UnknownLabel };
  SignatureError(Kind k, std::string msg, std::string set = {}, std::string lo = {}, std::string hi = {});
  Kind kind() const { return kind_; }
  // NotUpwardClosed: the set name and the witness pair lo <= hi (lo in set, hi not).
  // WCnotInE / UnknownLabel: lo holds the label.
  const std::string& set_name() const { return set_; }
  const std::string& witness_low() const { return lo_; }
  const std::string& witness_high() const { return hi_; }

 private:
  Kind kind_;
  std::string set_, lo_, hi_;
};

class SubexpSignature {
 public:
  SubexpSignature() = default;

  // Builds and validates; the order is closed reflexively and transitively first.
  static SubexpSignature make(std::vector<std::string> labels,
                              const std::vector<std::pair<std::string, std::string>>& order,
                              const std::vector<std::string>& weak, const std::vector<std::string>& contr,
                              const std::vector<std::string>& exch);

  const std::vector<std::string>& labels() const { return labels_; }
  bool has_label(std::string_view l) const { return index_of(l) >= 0; }
  // a <= b in the closed preorder
  bool leq(std::string_view a, std::string_view b) const;
  bool weakenable(std::string_view l) const { return in(w_, l); }
  bool contractible(std::string_view l) const { return in(c_, l); }
  bool exchangeable(std::string_view l) const { return in(e_, l); }
  // label in W, C and E at once: such bangs may be duplicated, dropped and moved freely
  bool unrestricted(std::string_view l) const { return weakenable(l) && contractible(l) && exchangeable(l); }
  bool contraction_free() const;

  // Throws SignatureError(UnknownLabel) for the first label of f not in the signature.
  void require_labels(const Formula& f) const;
  void require_labels(const Sequent& s) const;

  std::string to_string() const;

 private:
  int index_of(std::string_view l) const;
  bool in(const std::vector<bool>& set, std::string_view l) const;

  std::vector<std::string> labels_;
  std::vector<std::vector<bool>> leq_;
  std::vector<bool> w_, c_, e_;
};

SubexpSignature parse_signature(std::string_view text);
SubexpSignature load_signature(const std::string& path);

}  // namespace actomega
