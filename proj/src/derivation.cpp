#include "actomega/derivation.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace actomega {

// ------------------------------------------------------------------ Lin

std::int64_t Lin::eval(std::span<const std::int64_t> env, std::int64_t j) const {
  std::int64_t v = constant + j_coef * j;
  for (std::size_t l = 0; l < coef.size(); ++l) {
    if (!coef[l]) continue;
    if (l >= env.size()) throw TemplateError("template refers to an unbound parameter");
    v += coef[l] * env[l];
  }
  return v;
}

bool Lin::is_constant() const {
  return j_coef == 0 && std::all_of(coef.begin(), coef.end(), [](std::int64_t c) { return c == 0; });
}

bool operator==(const Lin& a, const Lin& b) {
  if (a.constant != b.constant || a.j_coef != b.j_coef) return false;
  std::size_t n = std::max(a.coef.size(), b.coef.size());
  for (std::size_t l = 0; l < n; ++l) {
    std::int64_t x = l < a.coef.size() ? a.coef[l] : 0;
    std::int64_t y = l < b.coef.size() ? b.coef[l] : 0;
    if (x != y) return false;
  }
  return true;
}

// ------------------------------------------------------------------ Derivation

struct Derivation::Node {
  Sequent concl;
  RuleInstance rule;
  std::vector<Derivation> premises;
  bool omega = false;
  std::shared_ptr<const OmegaTemplate> tmpl;
};

Derivation::Derivation() {
  auto n = std::make_shared<Node>();
  n->concl = Sequent{{Formula::one()}, Formula::one()};
  node_ = std::move(n);
}

Derivation Derivation::make(Sequent concl, RuleInstance r, std::vector<Derivation> premises) {
  auto n = std::make_shared<Node>();
  n->concl = std::move(concl);
  n->rule = std::move(r);
  n->premises = std::move(premises);
  return Derivation(std::move(n));
}

Derivation Derivation::omega(Sequent concl, std::size_t pos, std::shared_ptr<const OmegaTemplate> tmpl,
                             std::vector<Derivation> instances) {
  auto n = std::make_shared<Node>();
  n->concl = std::move(concl);
  n->rule = RuleInstance::simple(RuleId::StarL, pos);
  n->premises = std::move(instances);
  n->omega = true;
  n->tmpl = std::move(tmpl);
  return Derivation(std::move(n));
}

const Sequent& Derivation::conclusion() const { return node_->concl; }
const RuleInstance& Derivation::rule() const { return node_->rule; }
const std::vector<Derivation>& Derivation::premises() const { return node_->premises; }
bool Derivation::is_omega() const { return node_->omega; }
const std::shared_ptr<const OmegaTemplate>& Derivation::omega_template() const { return node_->tmpl; }

Derivation Derivation::instance(std::size_t n) const {
  if (!is_omega()) throw TemplateError("not an omega node");
  if (n < node_->premises.size()) return node_->premises[n];
  if (!node_->tmpl) throw TemplateError("partial omega family has no instance " + std::to_string(n));
  return instantiate_template(*node_->tmpl, node_->concl, node_->rule.pos, static_cast<std::int64_t>(n));
}

// ------------------------------------------------------------------ schemas

namespace {

RuleInstance eval_rule(const RuleSchema& rs, std::span<const std::int64_t> env, std::int64_t j) {
  auto nat = [&](const Lin& l) {
    std::int64_t v = l.eval(env, j);
    if (v < 0) throw TemplateError("NegativeCount: template position evaluates to " + std::to_string(v));
    return static_cast<std::size_t>(v);
  };
  RuleInstance r;
  r.rule = rs.rule;
  r.pos = nat(rs.pos);
  r.aux = nat(rs.aux);
  r.choice = rs.choice;
  for (const auto& p : rs.parts) r.parts.push_back(nat(p));
  r.formula = rs.formula;
  return r;
}

Lin map_lin(const Lin& l, const std::function<void(Lin&)>& f) {
  Lin r = l;
  f(r);
  return r;
}

SchemaPtr map_schema(const SchemaPtr& s, const std::function<void(Lin&)>& f) {
  if (!s) return s;
  auto r = std::make_shared<Schema>(*s);
  r->rule.pos = map_lin(s->rule.pos, f);
  r->rule.aux = map_lin(s->rule.aux, f);
  for (auto& p : r->rule.parts) p = map_lin(p, f);
  r->count = map_lin(s->count, f);
  for (auto& p : r->premises) p = map_schema(p, f);
  for (auto& g : r->groups) {
    g.count = map_lin(g.count, f);
    g.length = map_lin(g.length, f);
    g.premise = map_schema(g.premise, f);
  }
  if (s->nested) {
    auto t = std::make_shared<OmegaTemplate>(*s->nested);
    t->body = map_schema(t->body, f);
    r->nested = std::move(t);
  }
  return r;
}

}  // namespace

SchemaPtr bind_outer(const SchemaPtr& s, std::int64_t v) {
  return map_schema(s, [v](Lin& l) {
    if (l.coef.empty()) return;
    l.constant += l.coef[0] * v;
    l.coef.erase(l.coef.begin());
  });
}

SchemaPtr shift_levels(const SchemaPtr& s) {
  return map_schema(s, [](Lin& l) {
    if (!l.coef.empty()) l.coef.insert(l.coef.begin(), 0);
  });
}

Derivation build_schema(const Schema& s, const Sequent& concl, std::span<const std::int64_t> env) {
  switch (s.kind) {
    case Schema::Kind::Step: {
      RuleInstance ri = eval_rule(s.rule, env, 0);
      Backward b = backward(concl, ri, nullptr);
      if (!b.ok) throw TemplateError(b.reason + " at " + print_sequent(concl));
      if (ri.rule == RuleId::StarL) throw TemplateError("star-l-omega inside a template must be an omega schema");
      if (b.premises.size() != s.premises.size()) throw TemplateError("premise count mismatch in template");
      std::vector<Derivation> kids;
      for (std::size_t i = 0; i < s.premises.size(); ++i) kids.push_back(build_schema(*s.premises[i], b.premises[i], env));
      return Derivation::make(concl, std::move(ri), std::move(kids));
    }
    case Schema::Kind::Iter: {
      std::int64_t cnt = s.count.eval(env);
      if (cnt < 0) throw TemplateError("NegativeCount: iteration count evaluates to " + std::to_string(cnt));
      std::vector<std::pair<Sequent, RuleInstance>> steps;
      Sequent cur = concl;
      for (std::int64_t j = 0; j < cnt; ++j) {
        RuleInstance ri = eval_rule(s.rule, env, j);
        Backward b = backward(cur, ri, nullptr);
        if (!b.ok) throw TemplateError(b.reason + " at " + print_sequent(cur));
        if (b.premises.size() != 1) throw TemplateError("iterated rule is not unary");
        steps.emplace_back(cur, std::move(ri));
        cur = std::move(b.premises[0]);
      }
      if (s.premises.size() != 1) throw TemplateError("iteration block without body");
      Derivation d = build_schema(*s.premises[0], cur, env);
      for (auto it = steps.rbegin(); it != steps.rend(); ++it) d = Derivation::make(it->first, it->second, {d});
      return d;
    }
    case Schema::Kind::StarSplit: {
      std::vector<std::size_t> parts;
      std::vector<const Schema*> which;
      for (const auto& g : s.groups) {
        std::int64_t cnt = g.count.eval(env), len = g.length.eval(env);
        if (cnt < 0 || len < 1) throw TemplateError("NegativeCount: bad star-r group");
        for (std::int64_t i = 0; i < cnt; ++i) {
          parts.push_back(static_cast<std::size_t>(len));
          which.push_back(g.premise.get());
        }
      }
      RuleInstance ri = RuleInstance::star_r(parts);
      Backward b = backward(concl, ri, nullptr);
      if (!b.ok) throw TemplateError(b.reason + " at " + print_sequent(concl));
      std::vector<Derivation> kids;
      for (std::size_t i = 0; i < which.size(); ++i) kids.push_back(build_schema(*which[i], b.premises[i], env));
      return Derivation::make(concl, std::move(ri), std::move(kids));
    }
    case Schema::Kind::Omega: {
      std::int64_t pos = s.rule.pos.eval(env);
      if (pos < 0 || static_cast<std::size_t>(pos) >= concl.antecedent.size() ||
          !concl.antecedent[pos].is(Connective::Star))
        throw TemplateError("omega schema position does not hold a star at " + print_sequent(concl));
      if (!s.nested) throw TemplateError("omega schema without template");
      SchemaPtr body = s.nested->body;
      for (std::int64_t v : env) body = bind_outer(body, v);
      auto t = std::make_shared<OmegaTemplate>(OmegaTemplate{s.nested->param, body});
      return Derivation::omega(concl, static_cast<std::size_t>(pos), std::move(t), {});
    }
  }
  throw TemplateError("bad schema");
}

Derivation instantiate_template(const OmegaTemplate& t, const Sequent& omega_conclusion, std::size_t pos, std::int64_t k) {
  if (k < 0) throw TemplateError("NegativeCount: negative instance index");
  if (!t.body) throw TemplateError("empty template");
  std::int64_t env[1] = {k};
  return build_schema(*t.body, omega_premise(omega_conclusion, pos, static_cast<std::size_t>(k)), env);
}

// ------------------------------------------------------------------ structural queries

bool is_cut_free(const Schema& s) {
  if (s.rule.rule == RuleId::Cut || s.rule.rule == RuleId::Mix) return false;
  for (const auto& p : s.premises)
    if (!is_cut_free(*p)) return false;
  for (const auto& g : s.groups)
    if (!is_cut_free(*g.premise)) return false;
  if (s.nested && !is_cut_free(*s.nested->body)) return false;
  return true;
}

bool is_cut_free(const Derivation& d) {
  if (d.rule().rule == RuleId::Cut || d.rule().rule == RuleId::Mix) return false;
  if (d.is_omega() && d.omega_template() && !is_cut_free(*d.omega_template()->body)) return false;
  for (const auto& p : d.premises())
    if (!is_cut_free(p)) return false;
  return true;
}

std::size_t height(const Derivation& d) {
  std::size_t h = 0;
  for (const auto& p : d.premises()) h = std::max(h, height(p));
  return h + 1;
}

std::size_t node_count(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& p : d.premises()) n += node_count(p);
  return n;
}

bool same_schema(const Schema& a, const Schema& b) {
  if (a.kind != b.kind || !(a.rule == b.rule) || !(a.count == b.count)) return false;
  if (a.premises.size() != b.premises.size() || a.groups.size() != b.groups.size()) return false;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (!same_schema(*a.premises[i], *b.premises[i])) return false;
  for (std::size_t i = 0; i < a.groups.size(); ++i) {
    const auto &x = a.groups[i], &y = b.groups[i];
    if (!(x.count == y.count) || !(x.length == y.length) || !same_schema(*x.premise, *y.premise)) return false;
  }
  if (bool(a.nested) != bool(b.nested)) return false;
  return !a.nested || same_schema(*a.nested->body, *b.nested->body);
}

bool same_shape(const Derivation& a, const Derivation& b) {
  if (a.same_node(b)) return true;
  if (a.is_omega() != b.is_omega() || !(a.rule() == b.rule())) return false;
  if (a.premises().size() != b.premises().size()) return false;
  if (a.is_omega()) {
    const auto &ta = a.omega_template(), &tb = b.omega_template();
    if (bool(ta) != bool(tb)) return false;
    if (ta && !same_schema(*ta->body, *tb->body)) return false;
  }
  for (std::size_t i = 0; i < a.premises().size(); ++i)
    if (!same_shape(a.premises()[i], b.premises()[i])) return false;
  return true;
}

// ------------------------------------------------------------------ checker

std::string CheckReport::to_string() const {
  switch (status) {
    case Status::Valid: return "Valid";
    case Status::ValidUpTo: return "ValidUpTo(" + std::to_string(bound) + ")";
    case Status::Invalid: {
      std::string p = "[";
      for (std::size_t i = 0; i < path.size(); ++i) p += (i ? "," : "") + std::to_string(path[i]);
      return "Invalid(" + p + "], " + reason + ")";
    }
  }
  return "?";
}

CheckReport check(const Derivation& root, const SubexpSignature& sig, CheckMode mode) {
  struct Item {
    Derivation d;
    std::vector<std::size_t> path;
  };
  std::deque<Item> queue;
  queue.push_back({root, {}});
  bool any_omega = false;
  std::size_t bound = mode.bound;
  auto invalid = [](std::vector<std::size_t> path, std::string why) {
    CheckReport r;
    r.status = CheckReport::Status::Invalid;
    r.path = std::move(path);
    r.reason = std::move(why);
    return r;
  };
  while (!queue.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    const Derivation& d = it.d;
    const Sequent& concl = d.conclusion();
    try {
      sig.require_labels(concl);
    } catch (const SignatureError& e) {
      return invalid(it.path, "UnknownLabel: " + e.witness_low());
    }
    if (d.is_omega()) {
      any_omega = true;
      std::size_t pos = d.rule().pos;
      if (d.rule().rule != RuleId::StarL || pos >= concl.antecedent.size() || !concl.antecedent[pos].is(Connective::Star))
        return invalid(it.path, "omega node without a star at its principal position");
      std::size_t explicit_n = d.premises().size();
      std::size_t last;
      if (d.omega_template()) {
        last = std::max(mode.bound + 1, explicit_n);
      } else {
        if (explicit_n == 0) return invalid(it.path, "omega node with neither template nor instances");
        last = explicit_n;
        bound = std::min(bound, explicit_n - 1);
      }
      for (std::size_t n = 0; n < last; ++n) {
        auto p = it.path;
        p.push_back(n);
        Derivation inst;
        try {
          inst = d.instance(n);
        } catch (const TemplateError& e) {
          return invalid(p, e.what());
        }
        if (!(inst.conclusion() == omega_premise(concl, pos, n)))
          return invalid(p, "instance " + std::to_string(n) + " concludes " + print_sequent(inst.conclusion()));
        queue.push_back({std::move(inst), std::move(p)});
      }
      continue;
    }
    Backward b = backward(concl, d.rule(), &sig);
    if (!b.ok) return invalid(it.path, b.reason);
    if (d.rule().rule == RuleId::StarL) return invalid(it.path, "star-l-omega node without an omega premise family");
    if (b.premises.size() != d.premises().size())
      return invalid(it.path, std::string(rule_name(d.rule().rule)) + ": expected " + std::to_string(b.premises.size()) +
                                  " premises, found " + std::to_string(d.premises().size()));
    for (std::size_t i = 0; i < b.premises.size(); ++i)
      if (!(b.premises[i] == d.premises()[i].conclusion()))
        return invalid(it.path, std::string(rule_name(d.rule().rule)) + ": premise " + std::to_string(i) + " should be " +
                                    print_sequent(b.premises[i]) + " but is " + print_sequent(d.premises()[i].conclusion()));
    if (d.rule().rule == RuleId::Mix && (d.premises()[0].is_omega() || d.premises()[0].rule().rule != RuleId::BangR))
      return invalid(it.path, "mix: left premise is not concluded by bang-r");
    for (std::size_t i = 0; i < d.premises().size(); ++i) {
      auto p = it.path;
      p.push_back(i);
      queue.push_back({d.premises()[i], std::move(p)});
    }
  }
  CheckReport r;
  if (any_omega) {
    r.status = CheckReport::Status::ValidUpTo;
    r.bound = bound;
  }
  return r;
}

// ------------------------------------------------------------------ template synthesis

namespace {

RuleSchema const_rule(const RuleInstance& r) {
  RuleSchema s;
  s.rule = r.rule;
  s.pos = Lin::of(static_cast<std::int64_t>(r.pos));
  s.aux = Lin::of(static_cast<std::int64_t>(r.aux));
  s.choice = r.choice;
  if (r.rule != RuleId::StarR)
    for (auto p : r.parts) s.parts.push_back(Lin::of(static_cast<std::int64_t>(p)));
  s.formula = r.formula;
  return s;
}

bool unary_rule(const Derivation& d) {
  return !d.is_omega() && d.premises().size() == 1 && d.rule().rule != RuleId::StarR;
}

// One concrete derivation as a schema with constant parameters, folding
// unary chains with a fixed stride into Iter blocks.
SchemaPtr compress(const Derivation& d) {
  auto s = std::make_shared<Schema>();
  if (d.is_omega()) {
    if (!d.omega_template()) return nullptr;
    s->kind = Schema::Kind::Omega;
    s->rule.rule = RuleId::StarL;
    s->rule.pos = Lin::of(static_cast<std::int64_t>(d.rule().pos));
    s->nested = std::make_shared<OmegaTemplate>(
        OmegaTemplate{d.omega_template()->param, shift_levels(d.omega_template()->body)});
    return s;
  }
  const RuleInstance& r = d.rule();
  if (r.rule == RuleId::StarR) {
    s->kind = Schema::Kind::StarSplit;
    s->rule.rule = RuleId::StarR;
    const auto& ps = d.premises();
    std::size_t i = 0;
    while (i < ps.size()) {
      std::size_t j = i + 1;
      while (j < ps.size() && r.parts[j] == r.parts[i] && same_shape(ps[j], ps[i])) ++j;
      auto prem = compress(ps[i]);
      if (!prem) return nullptr;
      s->groups.push_back({Lin::of(static_cast<std::int64_t>(j - i)), Lin::of(static_cast<std::int64_t>(r.parts[i])), prem});
      i = j;
    }
    return s;
  }
  if (unary_rule(d)) {
    std::vector<Derivation> chain{d};
    std::int64_t dp = 0, da = 0;
    while (true) {
      const Derivation& last = chain.back();
      const Derivation& next = last.premises()[0];
      if (!unary_rule(next) || next.rule().rule != r.rule || next.rule().choice != r.choice || next.rule().formula != r.formula)
        break;
      std::int64_t sp = static_cast<std::int64_t>(next.rule().pos) - static_cast<std::int64_t>(last.rule().pos);
      std::int64_t sa = static_cast<std::int64_t>(next.rule().aux) - static_cast<std::int64_t>(last.rule().aux);
      if (chain.size() == 1) {
        dp = sp;
        da = sa;
      } else if (sp != dp || sa != da) {
        break;
      }
      chain.push_back(next);
    }
    if (chain.size() >= 2) {
      s->kind = Schema::Kind::Iter;
      s->rule = const_rule(r);
      s->rule.pos.j_coef = dp;
      s->rule.aux.j_coef = da;
      s->count = Lin::of(static_cast<std::int64_t>(chain.size()));
      auto body = compress(chain.back().premises()[0]);
      if (!body) return nullptr;
      s->premises.push_back(body);
      return s;
    }
  }
  s->kind = Schema::Kind::Step;
  s->rule = const_rule(r);
  for (const auto& p : d.premises()) {
    auto c = compress(p);
    if (!c) return nullptr;
    s->premises.push_back(c);
  }
  return s;
}

std::optional<Lin> au_lin(const Lin& x, const Lin& y, std::int64_t a) {
  if (x.j_coef != y.j_coef) return std::nullopt;
  std::size_t n = std::max(x.coef.size(), y.coef.size());
  for (std::size_t l = 0; l < n; ++l) {
    std::int64_t cx = l < x.coef.size() ? x.coef[l] : 0;
    std::int64_t cy = l < y.coef.size() ? y.coef[l] : 0;
    if (cx != cy) return std::nullopt;
    if (l == 0 && cx != 0) return std::nullopt;
  }
  Lin r = x;
  std::int64_t d = y.constant - x.constant;
  if (d != 0) {
    if (r.coef.empty()) r.coef.push_back(0);
    r.coef[0] = d;
    r.constant = x.constant - d * a;
  }
  return r;
}

SchemaPtr as_iter(const Schema& step, const Schema& like) {
  auto s = std::make_shared<Schema>(step);
  s->kind = Schema::Kind::Iter;
  s->count = Lin::of(1);
  s->rule.pos.j_coef = like.rule.pos.j_coef;
  s->rule.aux.j_coef = like.rule.aux.j_coef;
  return s;
}

SchemaPtr au(const Schema& x0, const Schema& y0, std::int64_t a) {
  SchemaPtr xi, yi;
  const Schema* x = &x0;
  const Schema* y = &y0;
  if (x->kind == Schema::Kind::Iter && y->kind == Schema::Kind::Step && y->premises.size() == 1) {
    yi = as_iter(*y, *x);
    y = yi.get();
  } else if (y->kind == Schema::Kind::Iter && x->kind == Schema::Kind::Step && x->premises.size() == 1) {
    xi = as_iter(*x, *y);
    x = xi.get();
  }
  if (x->kind != y->kind || x->rule.rule != y->rule.rule || x->rule.choice != y->rule.choice ||
      x->rule.formula != y->rule.formula || x->rule.parts.size() != y->rule.parts.size() ||
      x->premises.size() != y->premises.size() || x->groups.size() != y->groups.size())
    return nullptr;
  auto r = std::make_shared<Schema>(*x);
  auto pos = au_lin(x->rule.pos, y->rule.pos, a);
  auto aux = au_lin(x->rule.aux, y->rule.aux, a);
  auto cnt = au_lin(x->count, y->count, a);
  if (!pos || !aux || !cnt) return nullptr;
  r->rule.pos = *pos;
  r->rule.aux = *aux;
  r->count = *cnt;
  for (std::size_t i = 0; i < x->rule.parts.size(); ++i) {
    auto p = au_lin(x->rule.parts[i], y->rule.parts[i], a);
    if (!p) return nullptr;
    r->rule.parts[i] = *p;
  }
  for (std::size_t i = 0; i < x->premises.size(); ++i) {
    auto p = au(*x->premises[i], *y->premises[i], a);
    if (!p) return nullptr;
    r->premises[i] = p;
  }
  for (std::size_t i = 0; i < x->groups.size(); ++i) {
    auto c = au_lin(x->groups[i].count, y->groups[i].count, a);
    auto l = au_lin(x->groups[i].length, y->groups[i].length, a);
    auto p = au(*x->groups[i].premise, *y->groups[i].premise, a);
    if (!c || !l || !p) return nullptr;
    r->groups[i] = {*c, *l, p};
  }
  if (x->nested) {
    if (!y->nested) return nullptr;
    auto b = au(*x->nested->body, *y->nested->body, a);
    if (!b) return nullptr;
    r->nested = std::make_shared<OmegaTemplate>(OmegaTemplate{x->nested->param, b});
  }
  return r;
}

}  // namespace

std::shared_ptr<const OmegaTemplate> synthesize_template(const Sequent& omega_conclusion, std::size_t pos,
                                                         const std::vector<Derivation>& instances,
                                                         const SubexpSignature& sig, std::size_t validate_upto) {
  std::size_t m = instances.size();
  if (m < 2) return nullptr;
  auto x = compress(instances[m - 2]);
  auto y = compress(instances[m - 1]);
  if (!x || !y) return nullptr;
  auto body = au(*x, *y, static_cast<std::int64_t>(m - 2));
  if (!body) return nullptr;
  auto t = std::make_shared<OmegaTemplate>(OmegaTemplate{"n", body});
  for (std::size_t n = 0; n <= validate_upto; ++n) {
    try {
      Derivation d = instantiate_template(*t, omega_conclusion, pos, static_cast<std::int64_t>(n));
      if (!check(d, sig, CheckMode::Bounded(3)).ok()) return nullptr;
    } catch (const TemplateError&) {
      return nullptr;
    }
  }
  return t;
}

}  // namespace actomega
