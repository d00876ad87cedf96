#include "actomega/exchange.hpp"

#include <cctype>
#include <charconv>

namespace actomega {

ExchangeError::ExchangeError(const std::string& msg, std::size_t offset)
    : std::runtime_error("offset " + std::to_string(offset) + ": " + msg), offset_(offset) {}

namespace {

// ---------------------------------------------------------------- writing

std::string level_name(std::size_t level) {
  if (level == 0) return "n";
  if (level == 1) return "m";
  return "n" + std::to_string(level);
}

std::string lin_text(const Lin& l) {
  std::string out;
  auto term = [&](std::int64_t c, const std::string& name) {
    if (c == 0) return;
    if (c < 0) out += '-';
    else if (!out.empty()) out += '+';
    std::int64_t a = c < 0 ? -c : c;
    if (name.empty()) out += std::to_string(a);
    else out += (a == 1 ? "" : std::to_string(a) + "*") + name;
  };
  for (std::size_t i = 0; i < l.coef.size(); ++i) term(l.coef[i], level_name(i));
  term(l.j_coef, "j");
  term(l.constant, "");
  return out.empty() ? "0" : out;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string params_text(const RuleInstance& r) {
  auto n = [](std::size_t v) { return std::to_string(v); };
  switch (r.rule) {
    case RuleId::Hyp:
    case RuleId::Id:
    case RuleId::OneR:
    case RuleId::LimpR:
    case RuleId::RimpR:
    case RuleId::WithR:
    case RuleId::BangR: return "()";
    case RuleId::ZeroL:
    case RuleId::TensorL:
    case RuleId::OneL:
    case RuleId::PlusL:
    case RuleId::BangL:
    case RuleId::Weak:
    case RuleId::TensorR:
    case RuleId::StarL: return "(" + n(r.pos) + ")";
    case RuleId::LimpL:
    case RuleId::RimpL:
    case RuleId::Perm1:
    case RuleId::Perm2:
    case RuleId::NContr1:
    case RuleId::NContr2: return "(" + n(r.pos) + " " + n(r.aux) + ")";
    case RuleId::PlusR: return "(" + std::to_string(r.choice) + ")";
    case RuleId::WithL: return "(" + n(r.pos) + " " + std::to_string(r.choice) + ")";
    case RuleId::StarR: {
      std::string s = "(";
      for (std::size_t i = 0; i < r.parts.size(); ++i) s += (i ? " " : "") + n(r.parts[i]);
      return s + ")";
    }
    case RuleId::Cut: return "(" + n(r.pos) + " " + n(r.aux) + " " + quoted(print_formula(*r.formula)) + ")";
    case RuleId::Mix: {
      std::string s = "(" + n(r.aux) + " " + std::to_string(r.choice) + " " + quoted(print_formula(*r.formula));
      for (auto p : r.parts) s += " " + n(p);
      return s + ")";
    }
  }
  return "()";
}

std::string schema_params_text(const RuleSchema& r) {
  auto L = [](const Lin& l) { return lin_text(l); };
  switch (r.rule) {
    case RuleId::Hyp:
    case RuleId::Id:
    case RuleId::OneR:
    case RuleId::LimpR:
    case RuleId::RimpR:
    case RuleId::WithR:
    case RuleId::BangR:
    case RuleId::StarR: return "()";
    case RuleId::ZeroL:
    case RuleId::TensorL:
    case RuleId::OneL:
    case RuleId::PlusL:
    case RuleId::BangL:
    case RuleId::Weak:
    case RuleId::TensorR:
    case RuleId::StarL: return "(" + L(r.pos) + ")";
    case RuleId::LimpL:
    case RuleId::RimpL:
    case RuleId::Perm1:
    case RuleId::Perm2:
    case RuleId::NContr1:
    case RuleId::NContr2: return "(" + L(r.pos) + " " + L(r.aux) + ")";
    case RuleId::PlusR: return "(" + std::to_string(r.choice) + ")";
    case RuleId::WithL: return "(" + L(r.pos) + " " + std::to_string(r.choice) + ")";
    case RuleId::Cut: return "(" + L(r.pos) + " " + L(r.aux) + " " + quoted(print_formula(*r.formula)) + ")";
    case RuleId::Mix: {
      std::string s = "(" + L(r.aux) + " " + std::to_string(r.choice) + " " + quoted(print_formula(*r.formula));
      for (const auto& p : r.parts) s += " " + L(p);
      return s + ")";
    }
  }
  return "()";
}

void indent(std::string& out, int depth) {
  out += '\n';
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

void write_schema(const Schema& s, std::size_t level, int depth, std::string& out);

void write_template(const OmegaTemplate& t, std::size_t level, int depth, std::string& out) {
  out += "(template " + level_name(level);
  indent(out, depth + 1);
  write_schema(*t.body, level + 1, depth + 1, out);
  out += ')';
}

// `level` is the number of bound template parameters; the innermost is level-1.
void write_schema(const Schema& s, std::size_t level, int depth, std::string& out) {
  switch (s.kind) {
    case Schema::Kind::Step:
      out += std::string("(") + rule_name(s.rule.rule) + " " + schema_params_text(s.rule);
      for (const auto& p : s.premises) {
        indent(out, depth + 1);
        write_schema(*p, level, depth + 1, out);
      }
      out += ')';
      return;
    case Schema::Kind::Iter: {
      // count = a*own + b, where own is the innermost parameter
      Lin b = s.count;
      std::int64_t a = 0;
      if (level > 0 && b.coef.size() >= level) {
        a = b.coef[level - 1];
        b.coef[level - 1] = 0;
      }
      out += std::string("(iter ") + rule_name(s.rule.rule) + " (" + std::to_string(a) + " " + lin_text(b) + ") " +
             schema_params_text(s.rule);
      indent(out, depth + 1);
      write_schema(*s.premises[0], level, depth + 1, out);
      out += ')';
      return;
    }
    case Schema::Kind::StarSplit: {
      out += "(star-r (";
      for (std::size_t i = 0; i < s.groups.size(); ++i)
        out += (i ? " " : "") + std::string("(rep ") + lin_text(s.groups[i].count) + " " + lin_text(s.groups[i].length) + ")";
      out += ")";
      for (const auto& g : s.groups) {
        indent(out, depth + 1);
        write_schema(*g.premise, level, depth + 1, out);
      }
      out += ')';
      return;
    }
    case Schema::Kind::Omega:
      out += "(star-l-omega (" + lin_text(s.rule.pos) + ") ";
      write_template(*s.nested, level, depth + 1, out);
      out += ')';
      return;
  }
}

void write_node(const Derivation& d, int depth, std::string& out) {
  out += std::string("(") + rule_name(d.rule().rule) + " " + params_text(d.rule()) + " " +
         quoted(print_sequent(d.conclusion()));
  if (d.is_omega()) {
    if (d.omega_template()) {
      indent(out, depth + 1);
      write_template(*d.omega_template(), 0, depth + 1, out);
    }
    indent(out, depth + 1);
    out += "(explicit";
    for (const auto& p : d.premises()) {
      indent(out, depth + 2);
      write_node(p, depth + 2, out);
    }
    out += ')';
  } else {
    for (const auto& p : d.premises()) {
      indent(out, depth + 1);
      write_node(p, depth + 1, out);
    }
  }
  out += ')';
}

// ---------------------------------------------------------------- reading

struct SExpr {
  enum class Kind { Atom, String, List } kind = Kind::Atom;
  std::string text;
  std::vector<SExpr> items;
  std::size_t offset = 0;
};

class SReader {
 public:
  explicit SReader(std::string_view s) : s_(s) {}

  SExpr read() {
    skip();
    if (i_ >= s_.size()) throw ExchangeError("unexpected end of input", i_);
    SExpr e;
    e.offset = i_;
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      e.kind = SExpr::Kind::List;
      while (true) {
        skip();
        if (i_ >= s_.size()) throw ExchangeError("unterminated list", e.offset);
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.items.push_back(read());
      }
      return e;
    }
    if (c == ')') throw ExchangeError("unexpected ')'", i_);
    if (c == '"') {
      auto end = s_.find('"', i_ + 1);
      if (end == std::string_view::npos) throw ExchangeError("unterminated string", i_);
      e.kind = SExpr::Kind::String;
      e.text = std::string(s_.substr(i_ + 1, end - i_ - 1));
      i_ = end + 1;
      return e;
    }
    std::size_t j = i_;
    while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' && s_[j] != ')' && s_[j] != '"') ++j;
    e.text = std::string(s_.substr(i_, j - i_));
    i_ = j;
    return e;
  }

  void expect_end() {
    skip();
    if (i_ < s_.size()) throw ExchangeError("trailing input", i_);
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
      else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else break;
    }
  }
  std::string_view s_;
  std::size_t i_ = 0;
};

const SExpr& list_item(const SExpr& e, std::size_t i, const char* what) {
  if (e.kind != SExpr::Kind::List || i >= e.items.size()) throw ExchangeError(std::string("expected ") + what, e.offset);
  return e.items[i];
}

std::int64_t parse_int(const SExpr& e) {
  if (e.kind != SExpr::Kind::Atom) throw ExchangeError("expected a number", e.offset);
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(e.text.data(), e.text.data() + e.text.size(), v);
  if (ec != std::errc() || p != e.text.data() + e.text.size()) throw ExchangeError("bad number '" + e.text + "'", e.offset);
  return v;
}

std::size_t parse_nat(const SExpr& e) {
  auto v = parse_int(e);
  if (v < 0) throw ExchangeError("negative index", e.offset);
  return static_cast<std::size_t>(v);
}

Lin parse_lin(const SExpr& e, const std::vector<std::string>& names) {
  if (e.kind != SExpr::Kind::Atom || e.text.empty()) throw ExchangeError("expected a linear expression", e.offset);
  Lin l;
  const std::string& t = e.text;
  std::size_t i = 0;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      sign = t[i] == '-' ? -1 : 1;
      ++i;
    }
    std::size_t j = i;
    while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
    std::string term = t.substr(i, j - i);
    if (term.empty()) throw ExchangeError("bad linear expression '" + t + "'", e.offset);
    std::int64_t coef = 1;
    std::string name = term;
    if (auto star = term.find('*'); star != std::string::npos) {
      SExpr c;
      c.text = term.substr(0, star);
      c.offset = e.offset;
      coef = parse_int(c);
      name = term.substr(star + 1);
    } else if (std::isdigit(static_cast<unsigned char>(term[0]))) {
      SExpr c;
      c.text = term;
      c.offset = e.offset;
      l.constant += sign * parse_int(c);
      i = j;
      continue;
    }
    coef *= sign;
    if (name == "j") {
      l.j_coef += coef;
    } else {
      std::size_t level = names.size();
      for (std::size_t k = names.size(); k-- > 0;)
        if (names[k] == name) {
          level = k;
          break;
        }
      if (level == names.size()) throw ExchangeError("unbound parameter '" + name + "'", e.offset);
      if (l.coef.size() <= level) l.coef.resize(level + 1, 0);
      l.coef[level] += coef;
    }
    i = j;
  }
  return l;
}

RuleId parse_rule_name(const SExpr& e) {
  if (e.kind != SExpr::Kind::Atom) throw ExchangeError("expected a rule name", e.offset);
  auto r = rule_from_name(e.text);
  if (!r) throw ExchangeError("unknown rule '" + e.text + "'", e.offset);
  return *r;
}

Formula parse_formula_at(const SExpr& e) {
  if (e.kind != SExpr::Kind::String) throw ExchangeError("expected a quoted formula", e.offset);
  try {
    return parse_formula(e.text);
  } catch (const ParseError& pe) {
    throw ExchangeError(pe.what(), e.offset);
  }
}

// Fills rule params from a parameter list; `num` parses one numeric slot.
template <typename Num, typename NumFn>
void fill_params(RuleId rule, const SExpr& ps, NumFn num, Num& pos, Num& aux, int& choice, std::vector<Num>& parts,
                 std::optional<Formula>& formula) {
  if (ps.kind != SExpr::Kind::List) throw ExchangeError("expected a parameter list", ps.offset);
  const auto& it = ps.items;
  auto need = [&](std::size_t k) {
    if (it.size() != k)
      throw ExchangeError(std::string(rule_name(rule)) + " takes " + std::to_string(k) + " parameters", ps.offset);
  };
  switch (rule) {
    case RuleId::Hyp:
    case RuleId::Id:
    case RuleId::OneR:
    case RuleId::LimpR:
    case RuleId::RimpR:
    case RuleId::WithR:
    case RuleId::BangR: need(0); return;
    case RuleId::ZeroL:
    case RuleId::TensorL:
    case RuleId::OneL:
    case RuleId::PlusL:
    case RuleId::BangL:
    case RuleId::Weak:
    case RuleId::TensorR:
    case RuleId::StarL: need(1); pos = num(it[0]); return;
    case RuleId::LimpL:
    case RuleId::RimpL:
    case RuleId::Perm1:
    case RuleId::Perm2:
    case RuleId::NContr1:
    case RuleId::NContr2: need(2); pos = num(it[0]); aux = num(it[1]); return;
    case RuleId::PlusR: need(1); choice = static_cast<int>(parse_int(it[0])); return;
    case RuleId::WithL: need(2); pos = num(it[0]); choice = static_cast<int>(parse_int(it[1])); return;
    case RuleId::StarR:
      for (const auto& x : it) parts.push_back(num(x));
      return;
    case RuleId::Cut:
      need(3);
      pos = num(it[0]);
      aux = num(it[1]);
      formula = parse_formula_at(it[2]);
      return;
    case RuleId::Mix:
      if (it.size() < 4) throw ExchangeError("mix takes at least 4 parameters", ps.offset);
      aux = num(it[0]);
      choice = static_cast<int>(parse_int(it[1]));
      formula = parse_formula_at(it[2]);
      for (std::size_t k = 3; k < it.size(); ++k) parts.push_back(num(it[k]));
      return;
  }
}

SchemaPtr read_schema(const SExpr& e, std::vector<std::string>& names);

std::shared_ptr<const OmegaTemplate> read_template(const SExpr& e, std::vector<std::string>& names) {
  if (e.kind != SExpr::Kind::List || e.items.size() != 3 || e.items[0].text != "template" ||
      e.items[1].kind != SExpr::Kind::Atom)
    throw ExchangeError("expected (template <param> <schema>)", e.offset);
  names.push_back(e.items[1].text);
  auto body = read_schema(e.items[2], names);
  names.pop_back();
  return std::make_shared<OmegaTemplate>(OmegaTemplate{e.items[1].text, body});
}

SchemaPtr read_schema(const SExpr& e, std::vector<std::string>& names) {
  if (e.kind != SExpr::Kind::List || e.items.empty()) throw ExchangeError("expected a schema", e.offset);
  auto s = std::make_shared<Schema>();
  auto lin = [&](const SExpr& x) { return parse_lin(x, names); };
  const auto& head = e.items[0];
  if (head.text == "iter") {
    if (e.items.size() != 5) throw ExchangeError("expected (iter <rule> (<a> <b>) (<params>) <schema>)", e.offset);
    s->kind = Schema::Kind::Iter;
    s->rule.rule = parse_rule_name(e.items[1]);
    const auto& ab = e.items[2];
    if (ab.kind != SExpr::Kind::List || ab.items.size() != 2) throw ExchangeError("expected (<a> <b>)", ab.offset);
    if (names.empty()) throw ExchangeError("iter outside a template", e.offset);
    s->count = lin(ab.items[1]);
    std::int64_t a = parse_int(ab.items[0]);
    if (a) {
      if (s->count.coef.size() < names.size()) s->count.coef.resize(names.size(), 0);
      s->count.coef[names.size() - 1] += a;
    }
    fill_params(s->rule.rule, e.items[3], lin, s->rule.pos, s->rule.aux, s->rule.choice, s->rule.parts, s->rule.formula);
    s->premises.push_back(read_schema(e.items[4], names));
    return s;
  }
  RuleId rule = parse_rule_name(head);
  s->rule.rule = rule;
  if (rule == RuleId::StarL) {
    if (e.items.size() != 3) throw ExchangeError("expected (star-l-omega (<pos>) (template ...)) in a schema", e.offset);
    s->kind = Schema::Kind::Omega;
    fill_params(rule, e.items[1], lin, s->rule.pos, s->rule.aux, s->rule.choice, s->rule.parts, s->rule.formula);
    s->nested = read_template(e.items[2], names);
    return s;
  }
  if (rule == RuleId::StarR) {
    s->kind = Schema::Kind::StarSplit;
    const auto& gs = list_item(e, 1, "star-r groups");
    if (gs.kind != SExpr::Kind::List) throw ExchangeError("expected star-r groups", gs.offset);
    if (e.items.size() != gs.items.size() + 2) throw ExchangeError("one premise schema per star-r group expected", e.offset);
    for (std::size_t i = 0; i < gs.items.size(); ++i) {
      const auto& g = gs.items[i];
      if (g.kind != SExpr::Kind::List || g.items.size() != 3 || g.items[0].text != "rep")
        throw ExchangeError("expected (rep <count> <len>)", g.offset);
      s->groups.push_back({lin(g.items[1]), lin(g.items[2]), read_schema(e.items[i + 2], names)});
    }
    return s;
  }
  s->kind = Schema::Kind::Step;
  fill_params(rule, list_item(e, 1, "parameters"), lin, s->rule.pos, s->rule.aux, s->rule.choice, s->rule.parts,
              s->rule.formula);
  for (std::size_t i = 2; i < e.items.size(); ++i) s->premises.push_back(read_schema(e.items[i], names));
  return s;
}

Derivation read_node(const SExpr& e) {
  if (e.kind != SExpr::Kind::List || e.items.size() < 3) throw ExchangeError("expected a derivation node", e.offset);
  RuleId rule = parse_rule_name(e.items[0]);
  RuleInstance ri;
  ri.rule = rule;
  fill_params(rule, e.items[1], parse_nat, ri.pos, ri.aux, ri.choice, ri.parts, ri.formula);
  const auto& cs = e.items[2];
  if (cs.kind != SExpr::Kind::String) throw ExchangeError("expected a quoted conclusion", cs.offset);
  Sequent concl;
  try {
    concl = parse_sequent(cs.text);
  } catch (const ParseError& pe) {
    throw ExchangeError(pe.what(), cs.offset);
  }
  if (rule == RuleId::StarL) {
    std::shared_ptr<const OmegaTemplate> tmpl;
    std::vector<Derivation> inst;
    for (std::size_t i = 3; i < e.items.size(); ++i) {
      const auto& x = e.items[i];
      if (x.kind == SExpr::Kind::List && !x.items.empty() && x.items[0].text == "template") {
        std::vector<std::string> names;
        tmpl = read_template(x, names);
      } else if (x.kind == SExpr::Kind::List && !x.items.empty() && x.items[0].text == "explicit") {
        for (std::size_t k = 1; k < x.items.size(); ++k) inst.push_back(read_node(x.items[k]));
      } else {
        throw ExchangeError("expected (template ...) or (explicit ...)", x.offset);
      }
    }
    return Derivation::omega(std::move(concl), ri.pos, std::move(tmpl), std::move(inst));
  }
  std::vector<Derivation> kids;
  for (std::size_t i = 3; i < e.items.size(); ++i) kids.push_back(read_node(e.items[i]));
  return Derivation::make(std::move(concl), std::move(ri), std::move(kids));
}

}  // namespace

std::string write_derivation(const Derivation& d) {
  std::string out;
  write_node(d, 0, out);
  out += '\n';
  return out;
}

Derivation read_derivation(std::string_view text) {
  SReader r(text);
  SExpr e = r.read();
  r.expect_end();
  return read_node(e);
}

}  // namespace actomega
