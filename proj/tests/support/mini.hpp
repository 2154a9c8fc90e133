//===- mini.hpp - Test-only crate models and reference evaluator ----------===//
//
// A flat model of a crate that test code can generate, print as facts text
// and evaluate without going through the library. The reference evaluator
// reimplements obligation generation and the bounded oracle from scratch so
// the library can be checked against it.
//
//===----------------------------------------------------------------------===//
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace mini {

using Atoms = std::set<std::string>;

enum class Kind { Free, Ctor, Static, Method, Dtor };

struct Call {
  std::string callee;
  Atoms hints;
};

struct Fn {
  std::string path;
  std::string name;
  std::string module;
  std::string owner; // empty for free functions
  Kind kind = Kind::Free;
  bool is_unsafe = false;
  bool is_pub = false;
  bool mut_self = false;
  bool implicit = false;
  Atoms sc, est, brk;
  std::vector<Call> calls;
};

struct Extern {
  std::string path;
  Atoms sc;
};

struct Struct {
  std::string path;
  std::string name;
  bool is_pub = false;
  Atoms inv;
  bool literal = false;
  bool field_access = false;
};

struct Crate {
  std::string name = "r";
  std::vector<Extern> externs;
  std::vector<Struct> structs;
  std::vector<Fn> fns; // sorted by path, implicit members included

  const Fn *fn(const std::string &path) const;
  const Extern *ext(const std::string &path) const;
  bool callee_unsafe(const std::string &path) const;
  Atoms callee_sc(const std::string &path) const;
  std::vector<const Fn *> members(const std::string &struct_path, Kind kind) const;
};

struct Limits {
  int max_functions = 6;
  int max_structs = 2;
  int max_atoms = 4;
  int max_dynamic = 3;
};

Crate random_crate(std::mt19937_64 &rng, const Limits &limits = {});
std::string to_facts(const Crate &crate);

//===-- Reference evaluator -----------------------------------------------===//

enum class RefKind { DeclareSc, CallDischarge, PairDischarge };

struct RefObligation {
  std::string id;
  RefKind kind;
  std::vector<std::string> subject;
  Atoms required;
  bool auto_discharged = false;
  std::string entity;  // function or struct the obligation is charged to
};

std::string ref_id(RefKind kind, const std::vector<std::string> &subject,
                   const Atoms &required);
std::vector<RefObligation> ref_obligations(const Crate &crate);

/// Module paths whose strong / weak verdict is sound given `resolved` ids.
bool ref_module_sound(const Crate &crate, const std::vector<RefObligation> &obs,
                      const std::set<std::string> &resolved,
                      const std::string &module, bool weak);

struct RefUb {
  std::vector<std::string> steps;
  Atoms assumptions;
  std::string step;
  std::string callee;
  Atoms missing;
};

std::optional<RefUb> ref_check_function(const Crate &crate, const Fn &f);
std::optional<RefUb> ref_check_struct(const Crate &crate,
                                      const std::string &struct_path, int k,
                                      std::uint64_t *traces = nullptr);
/// Functions first (constructors, statics and free functions by path), then
/// structs by path.
std::vector<RefUb> ref_oracle(const Crate &crate, int k);

} // namespace mini
