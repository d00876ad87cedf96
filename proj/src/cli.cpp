#include "actomega/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "actomega/cutelim.hpp"
#include "actomega/exchange.hpp"
#include "actomega/grammar.hpp"
#include "actomega/kleene.hpp"
#include "actomega/oracle.hpp"
#include "actomega/ordinal.hpp"

namespace actomega::cli {

namespace {

// One result record: tab-separated key=value in machine mode, "key: value" lines otherwise.
class Record {
 public:
  Record& add(std::string k, std::string v) {
    fields_.emplace_back(std::move(k), std::move(v));
    return *this;
  }
  void print(std::ostream& out, bool machine) const {
    if (machine) {
      for (std::size_t i = 0; i < fields_.size(); ++i) out << (i ? "\t" : "") << fields_[i].first << '=' << fields_[i].second;
      out << '\n';
    } else {
      for (const auto& [k, v] : fields_) out << k << ": " << v << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw FileError("cannot write '" + path + "'");
  o << text;
}

SubexpSignature signature_of(const RunConfig& c) {
  if (!c.sig_path.empty()) {
    if (!std::filesystem::exists(c.sig_path)) throw FileError("cannot open signature file '" + c.sig_path + "'");
    return load_signature(c.sig_path);
  }
  return parse_signature("labels:\n");
}

std::string eta_text(const Sequent& s) { return eta(s).to_string(); }

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::Derivable: return kDerivable;
    case Verdict::NotDerivable: return kNotDerivable;
    default: return kUnknown;
  }
}

int exit_for(const CheckReport& r) {
  switch (r.status) {
    case CheckReport::Status::Valid: return kDerivable;
    case CheckReport::Status::Invalid: return kNotDerivable;
    default: return kUnknown;
  }
}

SearchBudget budget_of(const RunConfig& c) {
  SearchBudget b = c.budget;
  b.depth = c.depth;
  return b;
}

void emit(const RunConfig& c, const std::optional<Derivation>& d, Record& rec) {
  if (!d) return;
  rec.add("rank", std::to_string(height(*d)));
  if (!c.emit_path.empty()) {
    write_file(c.emit_path, write_derivation(*d));
    rec.add("derivation-path", c.emit_path);
  }
}

int cmd_prove(const RunConfig& c, std::ostream& out) {
  auto sig = signature_of(c);
  Sequent s = parse_sequent(c.input);
  SearchResult r = prove(s, sig, budget_of(c));
  Record rec;
  rec.add("verdict", verdict_name(r.verdict));
  if (r.verdict == Verdict::Unknown) rec.add("reason", reason_name(r.reason));
  rec.add("goal", print_sequent(s)).add("eta", eta_text(s));
  emit(c, r.derivation, rec);
  rec.print(out, c.machine);
  if (c.trace && r.derivation) out << write_derivation(*r.derivation);
  return exit_for(r.verdict);
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  Derivation d = read_derivation(read_file(c.input));
  CheckMode mode = CheckMode::Full();
  mode.bound = c.check_bound;
  CheckReport rep;
  if (!c.hyps_path.empty()) rep = check_ka(d, load_hypotheses(c.hyps_path), mode);
  else rep = check(d, signature_of(c), mode);
  Record rec;
  rec.add("verdict", rep.to_string())
      .add("goal", print_sequent(d.conclusion()))
      .add("eta", eta_text(d.conclusion()))
      .add("rank", std::to_string(height(d)))
      .add("cut-free", is_cut_free(d) ? "yes" : "no")
      .add("derivation-path", c.input);
  rec.print(out, c.machine);
  return exit_for(rep);
}

int cmd_cutelim(const RunConfig& c, std::ostream& out) {
  auto sig = signature_of(c);
  Derivation d = read_derivation(read_file(c.input));
  CutElimStats stats;
  CutElimOptions opts;
  opts.omega_bound = c.budget.omega_bound;
  opts.strict_templates = c.strict;
  opts.stats = &stats;
  Derivation r = eliminate_all(d, sig, opts);
  CheckReport rep = check(r, sig);
  if (c.trace)
    for (const auto& line : stats.trace) out << line << '\n';
  Record rec;
  rec.add("verdict", rep.to_string())
      .add("goal", print_sequent(r.conclusion()))
      .add("eta", eta_text(r.conclusion()))
      .add("cut-free", is_cut_free(r) ? "yes" : "no")
      .add("calls", std::to_string(stats.calls))
      .add("measure-violations", std::to_string(stats.measure_violations))
      .add("partial-nodes", std::to_string(stats.partial_nodes));
  emit(c, r, rec);
  rec.print(out, c.machine);
  if (stats.measure_violations) return kInternal;
  return exit_for(rep);
}

int cmd_encode(const RunConfig& c, std::ostream& out) {
  if (c.input.empty()) throw CLI::ValidationError("--goal", "a goal sequent is required");
  auto sig = signature_of(c);
  Sequent goal = parse_sequent(c.input);
  auto hyps = load_hypotheses(c.hyps_path);
  Sequent enc;
  if (c.encode_mode == "weakening") {
    enc = encode_weakening(goal, hyps, c.encode_label.empty() ? "s" : c.encode_label, sig);
  } else if (c.encode_mode == "cancellers") {
    enc = encode_unit_cancellers(goal, hyps, c.encode_label.empty() ? "c" : c.encode_label, sig);
  } else {
    throw CLI::ValidationError("--variant", "expected weakening or cancellers");
  }
  Record rec;
  rec.add("sequent", print_sequent(enc));
  int code = kDerivable;
  if (c.encode_prove) {
    SearchResult r = prove(enc, sig, budget_of(c));
    rec.add("verdict", verdict_name(r.verdict));
    if (r.verdict == Verdict::Unknown) rec.add("reason", reason_name(r.reason));
    emit(c, r.derivation, rec);
    code = exit_for(r.verdict);
  }
  rec.print(out, c.machine);
  return code;
}

int cmd_eta(const RunConfig& c, std::ostream& out) {
  NSeq e = c.input.find("|-") != std::string::npos ? eta(parse_sequent(c.input)) : eta(parse_formula(c.input));
  Record rec;
  rec.add("eta", e.to_string()).add("nu", nu(e).to_string());
  rec.print(out, c.machine);
  return kDerivable;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
  Sequent goal = parse_sequent(c.input);
  std::vector<Sequent> axioms;
  std::vector<Formula> roots = goal.antecedent;
  roots.push_back(goal.succedent);
  SubexpSignature sig;
  if (!c.hyps_path.empty()) {
    for (const auto& h : load_hypotheses(c.hyps_path)) {
      axioms.push_back(h.as_sequent());
      roots.push_back(h.u);
      roots.push_back(h.v);
    }
    sig = parse_signature("labels:\n");
  } else {
    sig = signature_of(c);
  }
  auto universe = sequents_over(subformula_closure(roots), std::max(c.max_len, goal.antecedent.size()));
  OracleReport rep = fixpoint_oracle(universe, sig, axioms, c.oracle_cut || !axioms.empty());
  const OracleEntry* e = rep.find(goal);
  Verdict v = e && e->derivable ? Verdict::Derivable : rep.exact ? Verdict::NotDerivable : Verdict::Unknown;
  Record rec;
  rec.add("verdict", verdict_name(v))
      .add("goal", print_sequent(goal))
      .add("eta", eta_text(goal))
      .add("rank", std::to_string(e ? e->rank : 0))
      .add("universe", std::to_string(universe.size()))
      .add("stages", std::to_string(rep.stages))
      .add("exact", rep.exact ? "yes" : "no");
  rec.print(out, c.machine);
  return exit_for(v);
}

int cmd_parse_grammar(const RunConfig& c, std::ostream& out) {
  if (!std::filesystem::exists(c.lexicon_path)) throw FileError("cannot open lexicon file '" + c.lexicon_path + "'");
  Lexicon lex = load_lexicon(c.lexicon_path);
  if (!c.sig_path.empty()) {
    lex.signature = signature_of(c);
    lex.signature.require_labels(lex.goal);
  }
  if (!c.goal.empty()) lex.goal = parse_formula(c.goal);
  ParseOutcome o = parse_sentence(c.words, lex, budget_of(c));
  Record rec;
  rec.add("verdict", grammaticality_name(o.verdict));
  if (o.verdict == Grammaticality::Unknown) rec.add("reason", reason_name(o.reason));
  std::string assignment;
  for (std::size_t i = 0; i < o.assignment.size(); ++i)
    assignment += (i ? ", " : "") + c.words[i] + ":" + print_formula(o.assignment[i]);
  if (!o.assignment.empty()) rec.add("assignment", assignment);
  rec.add("assignments-tried", std::to_string(o.assignments_tried));
  emit(c, o.derivation, rec);
  rec.print(out, c.machine);
  switch (o.verdict) {
    case Grammaticality::Grammatical: return kDerivable;
    case Grammaticality::NotGrammatical: return kNotDerivable;
    default: return kUnknown;
  }
}

void add_budget(CLI::App* sub, RunConfig& c) {
  sub->add_option("--omega-bound", c.budget.omega_bound, "omega premises sampled: n = 0..K")->check(CLI::PositiveNumber);
  sub->add_option("--depth", c.depth, "generalized rule applications per branch")->check(CLI::PositiveNumber);
  sub->add_option("--perm-window", c.budget.perm_window, "longest permutation suffix per step");
  sub->add_flag("--accept-templates", c.budget.accept_templates, "count validated omega templates as proofs");
  sub->add_flag("--no-model-filter{false}", c.budget.model_filter, "do not refute by small relational models");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"proof engine for infinitary action logic with subexponentials", "actomega"};
  app.require_subcommand(1);
  app.add_option("--sig", c.sig_path, "subexponential signature file (default $ACTOMEGA_SIG)");
  app.add_flag("--machine", c.machine, "one tab-separated key=value record per line");
  app.add_option("--jobs", c.budget.jobs, "concurrent search workers")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "tie-breaking seed");
  app.add_flag("--trace", c.trace, "print elimination steps or the found derivation");

  auto* prove_cmd = app.add_subcommand("prove", "search for a cut-free derivation")->fallthrough();
  prove_cmd->add_option("sequent", c.input)->required();
  prove_cmd->add_option("--emit-derivation", c.emit_path, "write the derivation to FILE");
  add_budget(prove_cmd, c);

  auto* check_cmd = app.add_subcommand("check", "check a derivation file")->fallthrough();
  check_cmd->add_option("file", c.input)->required();
  check_cmd->add_option("--bound", c.check_bound, "omega instances checked: n = 0..K");
  check_cmd->add_option("--hyps", c.hyps_path, "check against hypothesis leaves instead of a signature");

  auto* cut_cmd = app.add_subcommand("cutelim", "eliminate every cut and mix of a derivation file")->fallthrough();
  cut_cmd->add_option("file", c.input)->required();
  cut_cmd->add_option("--emit-derivation", c.emit_path, "write the cut-free derivation to FILE");
  cut_cmd->add_option("--omega-bound", c.budget.omega_bound, "omega instances transformed: n = 0..K+1");
  cut_cmd->add_flag("--strict", c.strict, "fail instead of leaving omega nodes without a template");

  auto* enc_cmd = app.add_subcommand("encode", "encode hypotheses into a goal sequent")->fallthrough();
  auto* enc_goal = enc_cmd->add_option("--goal", c.input, "goal sequent");
  enc_cmd->add_option("sequent", c.input, "goal sequent, when --goal is not given")->excludes(enc_goal);
  enc_cmd->add_option("--hyps", c.hyps_path, "hypothesis file, one U |- V per line")->required();
  enc_cmd->add_option("--variant", c.encode_mode, "weakening or cancellers")
      ->check(CLI::IsMember({"weakening", "cancellers"}));
  enc_cmd->add_option("--label", c.encode_label, "subexponential label of the encoding");
  enc_cmd->add_flag("--prove", c.encode_prove, "also search for a derivation of the encoding");
  enc_cmd->add_option("--emit-derivation", c.emit_path, "write the derivation to FILE");
  add_budget(enc_cmd, c);

  auto* eta_cmd = app.add_subcommand("eta", "complexity measure of a formula or sequent")->fallthrough();
  eta_cmd->add_option("input", c.input)->required();

  auto* or_cmd = app.add_subcommand("oracle", "fixpoint derivability over the subformula universe")->fallthrough();
  or_cmd->add_option("sequent", c.input)->required();
  or_cmd->add_option("--max-len", c.max_len, "longest antecedent in the universe");
  or_cmd->add_flag("--cut", c.oracle_cut, "close under cut as well");
  or_cmd->add_option("--hyps", c.hyps_path, "hypotheses as extra axioms (implies --cut)");

  auto* pg_cmd = app.add_subcommand("parse-grammar", "grammaticality of a sentence")->fallthrough();
  pg_cmd->add_option("--lexicon", c.lexicon_path, "lexicon file")->required();
  pg_cmd->add_option("--goal", c.goal, "goal type instead of the lexicon's");
  pg_cmd->add_option("--emit-derivation", c.emit_path, "write the derivation to FILE");
  pg_cmd->add_option("words", c.words)->required();
  add_budget(pg_cmd, c);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.sig_path.empty())
    if (const char* env = std::getenv("ACTOMEGA_SIG"); env && *env) c.sig_path = env;

  try {
    if (c.subcommand == "prove") return cmd_prove(c, out);
    if (c.subcommand == "check") return cmd_check(c, out);
    if (c.subcommand == "cutelim") return cmd_cutelim(c, out);
    if (c.subcommand == "encode") return cmd_encode(c, out);
    if (c.subcommand == "eta") return cmd_eta(c, out);
    if (c.subcommand == "oracle") return cmd_oracle(c, out);
    return cmd_parse_grammar(c, out);
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kNoInput;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kNoInput;
  } catch (const CutElimError& e) {
    err << "cut elimination: " << e.what() << '\n';
    switch (e.kind()) {
      case CutElimError::Kind::NonUniformTemplate: return kUnknown;
      case CutElimError::Kind::BadConfiguration: return kUsage;
      default: return kInternal;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SignatureError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const SearchError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const GrammarError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const KleeneError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ExchangeError& e) {
    err << "usage error: " << e.what() << " at offset " << e.offset() << '\n';
    return kUsage;
  } catch (const UniverseTooLarge& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace actomega::cli
