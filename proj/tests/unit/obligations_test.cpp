#include "helpers.hpp"

#include "upg/graph.hpp"
#include "upg/obligations.hpp"

using namespace upg;
using testing::must_parse;

namespace {

std::vector<const Obligation *> of_kind(const ObligationSet &set,
                                        ObligationKind kind) {
  std::vector<const Obligation *> out;
  for (const auto &ob : set.items)
    if (ob.kind == kind)
      out.push_back(&ob);
  return out;
}

StatusMap all_manual(const ObligationSet &set) {
  StatusMap s = initial_statuses(set);
  for (auto &[id, status] : s)
    if (status == Status::Open)
      status = Status::ManuallyDischarged;
  return s;
}

} // namespace

TEST_SUITE("obligations") {
  TEST_CASE("safe function without unsafe callees") {
    CrateModel m = must_parse("crate c { fn f(); }");
    CHECK(gen_function_obligations(*m.find_function("c::f"), m).empty());
  }

  TEST_CASE("call discharge auto and open") {
    CrateModel ok = must_parse("crate c { fn unsafe f() sc [a]; fn g() establishes [a] calls f; }");
    auto obs = gen_function_obligations(*ok.find_function("c::g"), ok);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].kind == ObligationKind::CallDischarge);
    CHECK(obs[0].status == Status::AutoDischarged);

    CrateModel open = must_parse("crate c { fn unsafe f() sc [a]; fn g() calls f; }");
    auto obs2 = gen_function_obligations(*open.find_function("c::g"), open);
    REQUIRE(obs2.size() == 1);
    CHECK(obs2[0].status == Status::Open);
    CHECK(obs2[0].missing == FactSet{"a"});
    CHECK(obs2[0].subject == std::vector<Path>{"c::g", "c::f"});
  }

  TEST_CASE("unsafe function with empty sc gets declare_sc") {
    CrateModel m = testing::must_load("undeclared_sc.facts");
    ObligationSet set = generate_obligations(m);
    auto decl = of_kind(set, ObligationKind::DeclareSc);
    REQUIRE(decl.size() == 1);
    CHECK(decl[0]->subject == std::vector<Path>{"c::read_raw"});
    CHECK(decl[0]->status == Status::Open);
  }

  TEST_CASE("hints feed the available set with auditor provenance") {
    CrateModel m = must_parse(
        "crate c { fn unsafe f() sc [a]; fn g() calls f where { a: \"checked\" }; }");
    auto obs = gen_function_obligations(*m.find_function("c::g"), m);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].status == Status::AutoDischarged);
    CHECK(obs[0].available.provenance.at(Atom("a")) == FactSource::Auditor);
  }

  TEST_CASE("Buf pair obligations") {
    CrateModel buf = testing::must_load("buf.facts");
    Upg g = build_upg(buf);
    StructObligations s = gen_struct_obligations(g.struct_groups.at(0), buf);
    auto pairs = std::count_if(s.obligations.begin(), s.obligations.end(), [](auto &o) {
      return o.kind == ObligationKind::PairDischarge;
    });
    REQUIRE(pairs == 1);
    const Obligation *pair = nullptr;
    for (const auto &o : s.obligations)
      if (o.kind == ObligationKind::PairDischarge)
        pair = &o;
    CHECK(pair->subject ==
          std::vector<Path>{"c::Buf::new", "c::Buf::get", "ptr::get_unchecked"});
    CHECK(pair->status == Status::Open);
    CHECK(pair->missing == FactSet{"len_ok"});

    CrateModel sound = testing::must_load("buf_sound.facts");
    ObligationSet set = generate_obligations(sound);
    REQUIRE(set.items.size() == 1);
    CHECK(set.items[0].status == Status::AutoDischarged);
  }

  TEST_CASE("pair count is constructors times unsafe callees") {
    CrateModel m = must_parse("crate c { extern fn unsafe x::u sc [a];"
                              " struct S { invariants [a]; }"
                              " fn n1() constructor of S establishes [a];"
                              " fn n2() constructor of S establishes [a];"
                              " fn m(&self) calls x::u; }");
    ObligationSet set = generate_obligations(m);
    CHECK(of_kind(set, ObligationKind::PairDischarge).size() == 2);
  }

  TEST_CASE("struct without constructor") {
    CrateModel m = must_parse("crate c { extern fn unsafe x::u sc [a];"
                              " struct S { } fn m(&self) calls x::u; }");
    Upg g = build_upg(m);
    StructObligations s = gen_struct_obligations(g.struct_groups.at(0), m);
    CHECK(s.obligations.empty());
    CHECK(testing::has_message(s.diagnostics, "no constructor"));
  }

  TEST_CASE("ids are stable and sorted") {
    CrateModel m = testing::must_load("wide.facts");
    ObligationSet a = generate_obligations(m);
    ObligationSet b = generate_obligations(m);
    REQUIRE(a.items.size() == b.items.size());
    for (std::size_t i = 0; i < a.items.size(); ++i) {
      CHECK(a.items[i].id == b.items[i].id);
      CHECK(a.items[i].status == b.items[i].status);
      if (i)
        CHECK(a.items[i - 1].id < a.items[i].id);
    }
    CHECK(obligation_id(ObligationKind::CallDischarge, {"c::g", "c::f"}, {"a"}) ==
          "6aa6236e1f932def");
  }

  TEST_CASE("module verdicts") {
    CrateModel empty = must_parse("crate c { }");
    ObligationSet none = generate_obligations(empty);
    CHECK(module_verdict(empty, empty.root(), Mode::Strong, none, {}).sound());
    CHECK(module_verdict(empty, empty.root(), Mode::Weak, none, {}).sound());

    CrateModel vis = testing::must_load("visibility.facts");
    ObligationSet set = generate_obligations(vis);
    StatusMap st = initial_statuses(set);
    Verdict strong = module_verdict(vis, vis.root(), Mode::Strong, set, st);
    CHECK(strong.state == Verdict::State::Open);
    CHECK(strong.unresolved == 1);
    CHECK(module_verdict(vis, vis.root(), Mode::Weak, set, st).sound());

    CrateModel buf = testing::must_load("buf.facts");
    ObligationSet bset = generate_obligations(buf);
    StatusMap bst = initial_statuses(bset);
    CHECK_FALSE(module_verdict(buf, buf.root(), Mode::Strong, bset, bst).sound());
    CHECK_FALSE(module_verdict(buf, buf.root(), Mode::Weak, bset, bst).sound());
  }

  TEST_CASE("crate verdict tree") {
    CrateModel empty = must_parse("crate c { }");
    CHECK(crate_verdict(empty, Mode::Strong, generate_obligations(empty), {})
              .crate.sound());

    CrateModel m = testing::must_load("nested.facts");
    ObligationSet set = generate_obligations(m);
    VerdictTree t = crate_verdict(m, Mode::Strong, set, initial_statuses(set));
    CHECK(t.crate.sound());
    CHECK(t.modules.count("c::io"));

    CrateModel open = must_parse("crate c { module a { fn unsafe f() sc [x]; fn g() calls f; }"
                                 " module b { fn h(); } }");
    ObligationSet os = generate_obligations(open);
    VerdictTree ot = crate_verdict(open, Mode::Strong, os, initial_statuses(os));
    CHECK(ot.crate.state == Verdict::State::Open);
    CHECK(ot.modules.at("c::a").state == Verdict::State::Open);
    CHECK(ot.modules.at("c::b").sound());
    CHECK(ot.functions.at("c::a::g").state == Verdict::State::Open);

    VerdictTree done = crate_verdict(open, Mode::Strong, os, all_manual(os));
    CHECK(done.crate.sound());
  }

  TEST_CASE("verdict descriptions") {
    Verdict v;
    CHECK(v.describe() == "sound");
    v.state = Verdict::State::Open;
    v.unresolved = 2;
    CHECK(v.describe() == "open (2 unresolved)");
  }

  TEST_CASE("json form") {
    CrateModel m = must_parse("crate c { fn unsafe f() sc [a]; fn g() calls f; }");
    ObligationSet set = generate_obligations(m);
    Json j = to_json(set.items.at(0), Status::ManuallyDischarged);
    CHECK(j["status"] == "manually_discharged");
    CHECK(j["generated_status"] == "open");
    CHECK(j["kind"] == "call_discharge");
    CHECK(j["missing"] == Json::array({"a"}));
    Json v = to_json(crate_verdict(m, Mode::Strong, set, initial_statuses(set)));
    CHECK(v["crate"] == "open");
  }
}
