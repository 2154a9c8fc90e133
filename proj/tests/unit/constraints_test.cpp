#include "helpers.hpp"

#include "upg/constraints.hpp"
#include "upg/graph.hpp"

using namespace upg;
using testing::must_parse;

namespace {

FunctionDecl method(FactSet sc, FactSet breaks) {
  FunctionDecl f;
  f.path = "c::S::m";
  f.receiver = Receiver::MutSelf;
  f.owner = "c::S";
  f.unsafety = sc.empty() ? Unsafety::Safe : Unsafety::Unsafe;
  f.sc = std::move(sc);
  f.breaks = std::move(breaks);
  return f;
}

AvailableFacts facts(FactSet atoms) {
  AvailableFacts a;
  a.add(atoms, FactSource::Establishes);
  return a;
}

} // namespace

TEST_SUITE("constraints") {
  TEST_CASE("bs_of_method") {
    CHECK(bs_of_method(method({}, {})).empty());
    CHECK(bs_of_method(method({}, {"len_ok"})) == FactSet{"len_ok"});
    CHECK(bs_of_method(method({"init"}, {"len_ok", "init"})) == FactSet{"len_ok"});
  }

  TEST_CASE("bs_of_struct") {
    CrateModel none = must_parse("crate c { extern fn unsafe x::u sc [a];"
                                 " struct S { } fn n() constructor of S;"
                                 " fn m(&self) calls x::u; }");
    Upg g1 = build_upg(none);
    CHECK(bs_of_struct(g1.struct_groups.at(0), none).empty());

    CrateModel buf = testing::must_load("buf.facts");
    Upg g2 = build_upg(buf);
    CHECK(bs_of_struct(g2.struct_groups.at(0), buf) == FactSet{"len_ok"});

    CrateModel two = must_parse("crate c { extern fn unsafe x::u sc [a];"
                                " struct S { } fn n() constructor of S;"
                                " fn m(&self) calls x::u;"
                                " fn p(&mut self) breaks [a];"
                                " fn q(&mut self) breaks [b]; }");
    Upg g3 = build_upg(two);
    CHECK(bs_of_struct(g3.struct_groups.at(0), two) == FactSet{"a", "b"});
  }

  TEST_CASE("entails") {
    CHECK(entails(facts({}), {}).holds);
    CHECK(entails(facts({"a", "b"}), {"a"}).holds);
    Entailment e = entails(facts({"a"}), {"a", "c"});
    CHECK_FALSE(e.holds);
    CHECK(e.missing == FactSet{"c"});
  }

  TEST_CASE("facts_for_function") {
    FunctionDecl safe;
    safe.path = "c::f";
    CHECK(facts_for_function(safe).atoms.empty());

    FunctionDecl unsafe_f = safe;
    unsafe_f.unsafety = Unsafety::Unsafe;
    unsafe_f.sc = {"p"};
    AvailableFacts a = facts_for_function(unsafe_f);
    CHECK(a.atoms == FactSet{"p"});
    CHECK(a.provenance.at(Atom("p")) == FactSource::OwnSc);

    FunctionDecl est = safe;
    est.establishes = {"p"};
    AvailableFacts b = facts_for_function(est);
    CHECK(b.atoms == FactSet{"p"});
    CHECK(b.provenance.at(Atom("p")) == FactSource::Establishes);
  }

  TEST_CASE("facts_for_pair") {
    CrateModel sound = testing::must_load("buf_sound.facts");
    Upg gs = build_upg(sound);
    AvailableFacts a =
        facts_for_pair(*sound.find_function("c::Buf::new"),
                       *sound.find_function("c::Buf::get"), gs.struct_groups[0], sound);
    CHECK(a.atoms.contains(Atom("len_ok")));
    CHECK(a.provenance.at(Atom("len_ok")) == FactSource::ConstructorEstablishes);

    CrateModel buf = testing::must_load("buf.facts");
    Upg gb = build_upg(buf);
    AvailableFacts b =
        facts_for_pair(*buf.find_function("c::Buf::new"),
                       *buf.find_function("c::Buf::get"), gb.struct_groups[0], buf);
    CHECK_FALSE(b.atoms.contains(Atom("len_ok")));
    CHECK(b.removed == FactSet{"len_ok"});

    CrateModel ptr = must_parse("crate c { extern fn unsafe x::u sc [a];"
                                " struct S { } fn unsafe n() constructor of S sc [ptr_valid];"
                                " fn m(&self) calls x::u; }");
    Upg gp = build_upg(ptr);
    AvailableFacts c =
        facts_for_pair(*ptr.find_function("c::S::n"), *ptr.find_function("c::S::m"),
                       gp.struct_groups[0], ptr);
    CHECK(c.atoms.contains(Atom("ptr_valid")));
    CHECK(c.provenance.at(Atom("ptr_valid")) == FactSource::ConstructorSc);
  }

  TEST_CASE("hints are intersected over call sites") {
    CrateModel m = must_parse(
        "crate c { fn unsafe f() sc [a, b];"
        " fn g() calls f where { a: \"x\", b: \"y\" } calls f where { a: \"z\" }; }");
    CHECK(hinted_for_callee(*m.find_function("c::g"), "c::f") == FactSet{"a"});
    CHECK(hinted_for_callee(*m.find_function("c::g"), "c::other").empty());
  }

  TEST_CASE("add keeps the first provenance") {
    AvailableFacts a;
    a.add({"x"}, FactSource::OwnSc);
    a.add({"x", "y"}, FactSource::Auditor);
    CHECK(a.provenance.at(Atom("x")) == FactSource::OwnSc);
    CHECK(a.provenance.at(Atom("y")) == FactSource::Auditor);
    a.subtract({"x", "z"});
    CHECK(a.atoms == FactSet{"y"});
    CHECK(a.removed == FactSet{"x"});
    CHECK_FALSE(a.provenance.count(Atom("x")));
  }
}
