//===- acceptance.cpp - One line per acceptance criterion -----------------===//
//
// Prints `PASS <criterion>: <detail>` or `FAIL <criterion>: <detail>` and
// exits non-zero if any criterion fails.
//
//===----------------------------------------------------------------------===//

#include "mini.hpp"

#include "upg/constraints.hpp"
#include "upg/graph.hpp"
#include "upg/json_io.hpp"
#include "upg/loader.hpp"
#include "upg/obligations.hpp"
#include "upg/semantics.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace upg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5)
        failures.push_back(what);
    }
  }
};

std::string slurp(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> fixtures() {
  std::vector<fs::path> out;
  for (const auto &entry : fs::directory_iterator(UPG_FIXTURE_DIR))
    if (entry.path().extension() == ".facts")
      out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<CrateModel> load(const fs::path &path) {
  LoadResult r = load_file(path.string());
  return r.model;
}

//===-- Formula fidelity --------------------------------------------------===//

FunctionDecl method(const std::string &name, FactSet sc, FactSet breaks) {
  FunctionDecl f;
  f.path = "t::S::" + name;
  f.owner = "t::S";
  f.receiver = Receiver::MutSelf;
  f.unsafety = sc.empty() ? Unsafety::Safe : Unsafety::Unsafe;
  f.sc = std::move(sc);
  f.breaks = std::move(breaks);
  return f;
}

// Builds a struct whose dynamic methods are `methods`, plus one reader that
// makes the struct a group.
CrateModel struct_with(const std::vector<FunctionDecl> &methods) {
  ModuleDecl root;
  root.path = "t";
  StructDecl s;
  s.name = "t::S";
  root.structs.push_back(s);
  FunctionDecl ctor;
  ctor.path = "t::S::new";
  ctor.owner = "t::S";
  ctor.role = Role::Constructor;
  root.functions.push_back(ctor);
  FunctionDecl reader = method("read", {}, {});
  reader.receiver = Receiver::RefSelf;
  reader.calls.push_back({"x::u", {}});
  root.functions.push_back(reader);
  FunctionDecl ext;
  ext.path = "x::u";
  ext.unsafety = Unsafety::Unsafe;
  ext.sc = {"z"};
  ext.external = true;
  root.externs.push_back(ext);
  for (const auto &m : methods)
    root.functions.push_back(m);
  return CrateModel("t", root);
}

Outcome formula_fidelity() {
  Outcome o;
  struct MethodCase {
    FactSet sc, breaks, expected;
  };
  // Expected values worked by hand from BS_m = breaks \ sc.
  std::vector<MethodCase> methods = {
      {{}, {}, {}},
      {{}, {"len_ok"}, {"len_ok"}},
      {{"init"}, {"len_ok", "init"}, {"len_ok"}},
      {{"a"}, {"a"}, {}},
      {{"a", "b"}, {"b", "c", "d"}, {"c", "d"}},
      {{"x"}, {}, {}},
  };
  int cases = 0;
  for (const auto &c : methods) {
    ++cases;
    FactSet got = bs_of_method(method("m", c.sc, c.breaks));
    o.require(got == c.expected, "bs_of_method(sc=" + c.sc.to_string() +
                                     ", breaks=" + c.breaks.to_string() +
                                     ") = " + got.to_string());
  }
  struct StructCase {
    std::vector<FunctionDecl> methods;
    FactSet expected;
  };
  // Expected values are unions of the per-method sets above.
  std::vector<StructCase> structs = {
      {{}, {}},
      {{method("set_len", {}, {"len_ok"})}, {"len_ok"}},
      {{method("p", {}, {"a"}), method("q", {}, {"b"})}, {"a", "b"}},
      {{method("p", {"a"}, {"a", "b"}), method("q", {"c"}, {"c"}),
        method("r", {}, {"b", "d"})},
       {"b", "d"}},
  };
  for (const auto &c : structs) {
    ++cases;
    CrateModel m = struct_with(c.methods);
    StructGroup g = make_struct_group(m, "t::S");
    FactSet got = bs_of_struct(g, m);
    o.require(got == c.expected, "bs_of_struct = " + got.to_string() +
                                     ", expected " + c.expected.to_string());
  }
  o.detail = std::to_string(cases) + " cases";
  return o;
}

//===-- Analyzer soundness ------------------------------------------------===//

Outcome analyzer_soundness() {
  Outcome o;
  constexpr int kModels = 1500;
  constexpr int kBound = 4;
  std::mt19937_64 rng(20261016);
  int all_auto = 0, nontrivial = 0, with_struct_pairs = 0, counterexamples = 0;
  std::uint64_t traces = 0;
  for (int i = 0; i < kModels; ++i) {
    mini::Crate crate = mini::random_crate(rng);
    std::string facts = mini::to_facts(crate);
    LoadResult r = parse_facts(facts);
    if (!r.ok()) {
      o.require(false, "generator produced an invalid model:\n" + facts);
      continue;
    }
    ObligationSet set = generate_obligations(*r.model);
    bool everything_auto =
        std::all_of(set.items.begin(), set.items.end(), [](const auto &ob) {
          return ob.status == Status::AutoDischarged;
        });
    if (!everything_auto)
      continue;
    ++all_auto;
    if (!set.items.empty())
      ++nontrivial;
    if (std::any_of(set.items.begin(), set.items.end(), [](const auto &ob) {
          return ob.kind == ObligationKind::PairDischarge;
        }))
      ++with_struct_pairs;
    OracleReport lib = run_oracle(*r.model, kBound, kDefaultTraceCap);
    traces += lib.traces;
    std::vector<mini::RefUb> ref = mini::ref_oracle(crate, kBound);
    if (!lib.witnesses.empty() || !ref.empty()) {
      ++counterexamples;
      o.require(false, "counterexample:\n" + facts);
    }
  }
  o.require(nontrivial > 0, "no non-trivial all-auto models were generated");
  o.detail = std::to_string(kModels) + " models, " + std::to_string(all_auto) +
             " fully auto-discharged (" + std::to_string(nontrivial) +
             " with obligations, " + std::to_string(with_struct_pairs) +
             " with pair obligations), " + std::to_string(traces) +
             " traces at k=4, " + std::to_string(counterexamples) +
             " counterexamples";
  return o;
}

//===-- Unsound-pattern corpus --------------------------------------------===//

std::string obligation_lines(const ObligationSet &set) {
  std::string out;
  for (const auto &ob : set.items) {
    std::string subject, required;
    for (const auto &p : ob.subject)
      subject += (subject.empty() ? "" : ",") + p;
    for (const auto &a : ob.required.names())
      required += (required.empty() ? "" : ",") + a;
    out += ob.id + " " + to_string(ob.status) + " " + to_string(ob.kind) + " " +
           subject + " [" + required + "]\n";
  }
  return out;
}

Outcome unsound_corpus() {
  Outcome o;
  struct Pattern {
    const char *fixture;
    bool expect_witness;
    bool weak_sound_strong_open;
  };
  const Pattern patterns[] = {
      {"undeclared_sc", true, false},
      {"undischarged_static", true, false},
      {"ctor_missing_invariant", true, false},
      {"buf", true, false},
      {"visibility", true, true},
      {"literal", true, false},
  };
  int checked = 0;
  for (const auto &p : patterns) {
    fs::path path = fs::path(UPG_FIXTURE_DIR) / (std::string(p.fixture) + ".facts");
    auto model = load(path);
    if (!model) {
      o.require(false, std::string(p.fixture) + ": does not load");
      continue;
    }
    ++checked;
    ObligationSet set = generate_obligations(*model);
    auto open = std::count_if(set.items.begin(), set.items.end(), [](auto &ob) {
      return ob.status == Status::Open;
    });
    o.require(open >= 1, std::string(p.fixture) + ": no open obligation");
    std::string golden = slurp(fs::path(UPG_GOLDEN_DIR) /
                               (std::string(p.fixture) + ".obligations"));
    o.require(obligation_lines(set) == golden,
              std::string(p.fixture) + ": obligations differ from golden file");
    OracleReport report = run_oracle(*model, kDefaultBound);
    o.require(report.witnesses.empty() != p.expect_witness,
              std::string(p.fixture) + ": unexpected oracle result");
    if (p.weak_sound_strong_open) {
      StatusMap st = initial_statuses(set);
      bool strong = crate_verdict(*model, Mode::Strong, set, st).crate.sound();
      bool weak = crate_verdict(*model, Mode::Weak, set, st).crate.sound();
      o.require(!strong && weak,
                std::string(p.fixture) + ": expected weak sound, strong open");
    }
  }
  o.detail = std::to_string(checked) + " fixtures, golden ids matched";
  return o;
}

//===-- Conservativeness --------------------------------------------------===//

Outcome conservativeness() {
  Outcome o;
  int shown = 0;
  for (const char *name : {"conservative_drop", "conservative_reestablish"}) {
    auto model = load(fs::path(UPG_FIXTURE_DIR) / (std::string(name) + ".facts"));
    if (!model) {
      o.require(false, std::string(name) + ": does not load");
      continue;
    }
    ObligationSet set = generate_obligations(*model);
    bool open = std::any_of(set.items.begin(), set.items.end(), [](auto &ob) {
      return ob.status == Status::Open;
    });
    OracleReport report = run_oracle(*model, kDefaultBound);
    o.require(open, std::string(name) + ": expected an open obligation");
    o.require(report.witnesses.empty(),
              std::string(name) + ": oracle unexpectedly found UB");
    VerdictTree t =
        crate_verdict(*model, Mode::Strong, set, initial_statuses(set));
    o.require(t.crate.state == Verdict::State::Open,
              std::string(name) + ": expected an open verdict");
    if (open && report.witnesses.empty())
      ++shown;
  }
  o.detail = std::to_string(shown) +
             " fixtures with open obligations and no UB witness at k=4";
  return o;
}

//===-- Determinism -------------------------------------------------------===//

struct Captured {
  int code = -1;
  std::string out;
  bool operator==(const Captured &) const = default;
};

Captured run_tool(const std::string &args) {
  Captured c;
  std::string cmd = std::string("\"") + UPGAUDIT_EXE + "\" " + args + " 2>/dev/null";
  std::FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return c;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    c.out.append(buf.data(), n);
  int status = pclose(pipe);
  c.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

Outcome determinism() {
  Outcome o;
  int runs = 0;
  for (const auto &path : fixtures()) {
    for (const char *cmd : {"check", "oracle", "export-dot"}) {
      std::string args = std::string(cmd) + " \"" + path.string() + "\"";
      Captured first = run_tool(args);
      o.require(first.code >= 0 && first.code <= 3,
                args + ": exit code " + std::to_string(first.code));
      for (int i = 1; i < 3; ++i) {
        Captured again = run_tool(args);
        o.require(again == first, args + ": output differs between runs");
      }
      runs += 3;
    }
  }
  o.detail = std::to_string(fixtures().size()) + " fixtures, " +
             std::to_string(runs) + " runs";
  return o;
}

//===-- Round trip --------------------------------------------------------===//

Outcome round_trip() {
  Outcome o;
  int n = 0;
  for (const auto &path : fixtures()) {
    auto model = load(path);
    if (!model) {
      o.require(false, path.filename().string() + ": does not load");
      continue;
    }
    LoadResult back = load_json(canonical_json(*model));
    o.require(back.ok() && *back.model == *model,
              path.filename().string() + ": JSON round trip differs");
    if (back.ok())
      o.require(canonical_json(*back.model) == canonical_json(*model),
                path.filename().string() + ": canonical JSON differs");
    ++n;
  }
  o.detail = std::to_string(n) + " fixtures";
  return o;
}

} // namespace

int main() {
  struct Criterion {
    const char *name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"formula-fidelity", formula_fidelity},
      {"analyzer-soundness", analyzer_soundness},
      {"unsound-pattern-corpus", unsound_corpus},
      {"conservativeness", conservativeness},
      {"determinism", determinism},
      {"round-trip", round_trip},
  };
  bool all = true;
  for (const auto &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    all = all && o.pass;
    std::printf("%s %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs);
    for (const auto &f : o.failures)
      std::printf("    %s\n", f.c_str());
  }
  return all ? 0 : 1;
}
