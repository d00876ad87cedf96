#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "actomega/cli.hpp"
#include "actomega/exchange.hpp"
#include "actomega/ordinal.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace actomega;
using test_support::corpus;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> record(const std::string& line) {
  std::map<std::string, std::string> m;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, '\t')) {
    auto eq = field.find('=');
    REQUIRE(eq != std::string::npos);
    m[field.substr(0, eq)] = field.substr(eq + 1);
  }
  return m;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("actomega_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string sig(const char* name) { return corpus(std::string("sig/") + name); }

// external binary; stdout captured through a file
Run run_binary(const std::string& args) {
  fs::path out = scratch("bin.out"), err = scratch("bin.err");
  std::string cmd = std::string(ACTOMEGA_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  int st = std::system(cmd.c_str());
  std::ifstream o(out), e(err);
  std::stringstream so, se;
  so << o.rdbuf();
  se << e.rdbuf();
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, so.str(), se.str()};
}

}  // namespace

TEST_CASE("prove exit codes follow the verdict") {
  auto ok = run({"--sig", sig("malc.sig"), "prove", "a, a\\b |- b"});
  CHECK(ok.code == cli::kDerivable);
  CHECK(ok.out.find("Derivable") != std::string::npos);

  auto no = run({"--sig", sig("contr.sig"), "prove", "a&(b+c) |- (a&b)+(a&c)"});
  CHECK(no.code == cli::kNotDerivable);

  auto unk = run({"--machine", "--sig", sig("malc.sig"), "prove", "1* |- 1"});
  CHECK(unk.code == cli::kUnknown);
  auto r = record(first_line(unk.out));
  CHECK(r["verdict"] == "Unknown");
  CHECK(r["reason"] == "OmegaSampled");

  auto templ = run({"--machine", "--sig", sig("malc.sig"), "prove", "--accept-templates", "1* |- 1"});
  CHECK(templ.code == cli::kDerivable);
}

TEST_CASE("eta prints the library measure") {
  for (const char* in : {"p* |- p*", "p", "a, a\\b |- b", "!{e}(p . q*)*"}) {
    auto r = run({"--machine", "--sig", sig("malc.sig"), "eta", in});
    REQUIRE(r.code == 0);
    auto m = record(first_line(r.out));
    NSeq e = std::string(in).find("|-") != std::string::npos ? eta(parse_sequent(in)) : eta(parse_formula(in));
    CHECK(m["eta"] == e.to_string());
    CHECK(m["nu"] == nu(e).to_string());
  }
  auto human = run({"eta", "p* |- p*"});
  CHECK(human.out.find(eta(parse_sequent("p* |- p*")).to_string()) != std::string::npos);
}

TEST_CASE("machine output round-trips derivations through check") {
  fs::path drv = scratch("d1.drv");
  for (const char* s : {"a, a\\b |- b", "p . q, r |- p . (q . r)", "p |- p + q"}) {
    auto r = run({"--machine", "--sig", sig("malc.sig"), "prove", s, "--emit-derivation", drv.string()});
    REQUIRE(r.code == 0);
    auto m = record(first_line(r.out));
    CHECK(m["verdict"] == "Derivable");
    CHECK(m["goal"] == print_sequent(parse_sequent(s)));
    CHECK(m["derivation-path"] == drv.string());
    CHECK(m.count("eta"));
    CHECK(m.count("rank"));
    auto c = run({"--machine", "--sig", sig("malc.sig"), "check", m["derivation-path"]});
    CHECK(c.code == 0);
    auto cm = record(first_line(c.out));
    CHECK(cm["verdict"] == "Valid");
    CHECK(cm["goal"] == m["goal"]);
    CHECK(cm["cut-free"] == "yes");
  }
  write_file(scratch("bad.drv"), "(id () \"a |- b\")\n");
  auto bad = run({"--machine", "check", scratch("bad.drv").string()});
  CHECK(bad.code == 1);
  CHECK(record(first_line(bad.out))["verdict"].rfind("Invalid", 0) == 0);
}

TEST_CASE("cutelim subcommand") {
  const auto malc = parse_signature("labels: e\nE: e\n");
  SearchBudget b;
  auto l = prove(parse_sequent("p |- q + p"), malc, b), r = prove(parse_sequent("q + p |- p + q"), malc, b);
  REQUIRE(l.derivable());
  REQUIRE(r.derivable());
  auto cut = Derivation::make(parse_sequent("p |- p + q"), RuleInstance::cut(0, 1, parse_formula("q + p")),
                              {*l.derivation, *r.derivation});
  fs::path in = scratch("cut.drv"), out = scratch("cutfree.drv");
  write_file(in, write_derivation(cut));
  auto c = run({"--machine", "--sig", sig("malc.sig"), "cutelim", in.string(), "--emit-derivation", out.string()});
  REQUIRE(c.code == 0);
  auto back = run({"--machine", "--sig", sig("malc.sig"), "check", out.string()});
  CHECK(back.code == 0);
  auto m = record(first_line(back.out));
  CHECK(m["cut-free"] == "yes");
  CHECK(m["goal"] == "p |- p + q");
}

TEST_CASE("encode and oracle subcommands") {
  auto e = run({"--machine", "--sig", sig("kleene.sig"), "encode", "--hyps", corpus("hyp/unit.hyp"), "--variant",
                "cancellers", "--label", "c", "p |- q"});
  CHECK(e.code == 0);
  CHECK(record(first_line(e.out))["sequent"] == "!{c}(1 / !{c}(p / 1)), !{c}(p / 1), p |- q");
  auto w = run({"--sig", sig("kleene.sig"), "encode", "--hyps", corpus("hyp/unit.hyp"), "--label", "s", "--goal", "|- p"});
  CHECK(w.code == 0);
  CHECK(w.out.find("!{s}(p / 1) |- p") != std::string::npos);
  auto bad = run({"--sig", sig("kleene.sig"), "encode", "--hyps", corpus("hyp/unit.hyp"), "--label", "c", "|- p"});
  CHECK(bad.code == cli::kUsage);

  auto o = run({"--machine", "oracle", "p, q |- p . q"});
  CHECK(o.code == 0);
  CHECK(record(first_line(o.out))["verdict"] == "Derivable");
  auto h = run({"--machine", "oracle", "--hyps", corpus("hyp/transitive.hyp"), "p |- 1"});
  CHECK(h.code == 0);
}

TEST_CASE("parse-grammar subcommand") {
  auto g = run({"--machine", "parse-grammar", "--lexicon", corpus("lex/basic.lex"), "John", "loves", "Mary"});
  CHECK(g.code == 0);
  CHECK(record(first_line(g.out))["verdict"] == "Grammatical");
  auto n = run({"--machine", "parse-grammar", "--lexicon", corpus("lex/rel_none.lex"), "book", "that", "John", "read",
                "yesterday"});
  CHECK(n.code == 1);
  auto np = run({"parse-grammar", "--lexicon", corpus("lex/basic.lex"), "--goal", "np", "the", "red", "ball"});
  CHECK(np.code == 0);
  auto unknown = run({"parse-grammar", "--lexicon", corpus("lex/basic.lex"), "John", "sleeps"});
  CHECK(unknown.code == cli::kUsage);
  CHECK(unknown.err.find("sleeps") != std::string::npos);
}

TEST_CASE("usage and file errors") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
  CHECK(run({"prove", "a |-"}).code == cli::kUsage);
  CHECK(run({"--sig", "/nonexistent.sig", "prove", "a |- a"}).code == cli::kNoInput);
  CHECK(run({"check", "/nonexistent.drv"}).code == cli::kNoInput);
  CHECK(run({"parse-grammar", "--lexicon", "/nonexistent.lex", "a"}).code == cli::kNoInput);
  CHECK(run({"encode", "--hyps", "/nonexistent.hyp", "p |- p"}).code == cli::kNoInput);
  // contraction needs a depth budget; contr.sig has none
  CHECK(run({"--sig", sig("wce.sig"), "prove", "a |- a"}).code == cli::kUsage);
  CHECK(run({"--sig", sig("wce.sig"), "prove", "--depth", "4", "a |- a"}).code == 0);
  CHECK(run({"--sig", sig("contr.sig"), "prove", "a |- a"}).code == 0);
}

TEST_CASE("signature from the environment") {
  ::setenv("ACTOMEGA_SIG", sig("wce.sig").c_str(), 1);
  auto needs_depth = run({"prove", "!{s}a |- a"});
  ::unsetenv("ACTOMEGA_SIG");
  CHECK(needs_depth.code == cli::kUsage);
  CHECK(run({"prove", "!{s}a |- a"}).code == cli::kUsage);  // s is not a label of the empty signature
}

TEST_CASE("jobs do not change machine output") {
  for (const char* s : {"a, a\\b |- b", "p . q |- q . p", "!{s}(a&(b+c)) |- (a&b)+(a&c)", "p* |- p . p"}) {
    auto one = run({"--machine", "--sig", sig("wce.sig"), "prove", "--depth", "5", s});
    auto four = run({"--machine", "--jobs", "4", "--sig", sig("wce.sig"), "prove", "--depth", "5", s});
    CHECK(one.out == four.out);
    CHECK(one.code == four.code);
  }
}

TEST_CASE("the installed binary behaves like the library entry point") {
  auto b = run_binary("--machine --sig " + sig("malc.sig") + " prove 'a, a\\b |- b'");
  auto i = run({"--machine", "--sig", sig("malc.sig"), "prove", "a, a\\b |- b"});
  CHECK(b.code == 0);
  CHECK(b.out == i.out);
  CHECK(run_binary("--sig " + sig("contr.sig") + " prove 'a&(b+c) |- (a&b)+(a&c)'").code == 1);
  CHECK(run_binary("nonsense").code == 64);
  CHECK(run_binary("check /nonexistent.drv").code == 66);
}
