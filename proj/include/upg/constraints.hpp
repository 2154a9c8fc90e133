//===- constraints.hpp - Safety-constraint set algebra --------------------===//
//
// Entailment is set containment over atoms: a required set holds in a context
// when every atom is available there.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/graph.hpp"
#include "upg/model.hpp"

#include <map>

namespace upg {

enum class FactSource {
  OwnSc,
  Establishes,
  ConstructorSc,
  ConstructorEstablishes,
  MethodEstablishes,
  Auditor,
};

const char *to_string(FactSource source);

struct AvailableFacts {
  FactSet atoms;
  std::map<Atom, FactSource> provenance;
  /// Atoms dropped because some disruptive method may break them.
  FactSet removed;

  /// Adds `atoms` with `source`; atoms already present keep their source.
  void add(const FactSet &more, FactSource source);
  /// Removes `atoms`, recording the ones that were present in `removed`.
  void subtract(const FactSet &less);

  friend bool operator==(const AvailableFacts &, const AvailableFacts &) = default;
};

struct Entailment {
  bool holds = true;
  FactSet missing;
};

/// Invariants a dynamic method or destructor may leave broken:
/// its `breaks` minus its own constraints.
FactSet bs_of_method(const FunctionDecl &m);

/// Union of bs_of_method over the struct's disruptive methods.
FactSet bs_of_struct(const StructGroup &group, const CrateModel &model);

Entailment entails(const AvailableFacts &available, const FactSet &required);

/// sc(f) and establishes(f).
AvailableFacts facts_for_function(const FunctionDecl &f);

/// (establishes and sc of both c and m) minus bs_of_struct(group).
AvailableFacts facts_for_pair(const FunctionDecl &c, const FunctionDecl &m,
                              const StructGroup &group,
                              const CrateModel &model);

/// Atoms hinted at every call site of `f` that targets `callee`.
FactSet hinted_for_callee(const FunctionDecl &f, std::string_view callee);

} // namespace upg
