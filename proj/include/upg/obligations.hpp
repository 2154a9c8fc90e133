//===- obligations.hpp - Discharge obligations and soundness verdicts -----===//
//
// Obligation kinds:
//   declare_sc      an unsafe function must state its safety constraints;
//                   only an auditor can discharge it.
//   call_discharge  a constructor, static method or free function must make
//                   the constraints of one direct unsafe callee available.
//   pair_discharge  for constructor c and instance method m, the constraints
//                   of one unsafe callee of m must hold in the facts of c and
//                   m left after removing what any disruptive method breaks.
//
// Verdicts roll up function -> struct -> module -> crate. A module is
// strongly sound when all of its items are, weakly sound when its public
// items are; submodules always count.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/constraints.hpp"
#include "upg/diagnostics.hpp"
#include "upg/graph.hpp"
#include "upg/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace upg {

enum class ObligationKind { DeclareSc, CallDischarge, PairDischarge };
enum class Status { AutoDischarged, Open, ManuallyDischarged };

struct Obligation {
  std::string id;
  ObligationKind kind = ObligationKind::CallDischarge;
  /// declare_sc: [f]; call_discharge: [caller, callee];
  /// pair_discharge: [constructor, method, callee].
  std::vector<Path> subject;
  /// Function (declare/call) or struct (pair) the obligation is charged to.
  Path owner;
  FactSet required;
  AvailableFacts available;
  FactSet missing;
  Status status = Status::Open;
};

/// Hex digest prefix over kind, subject and required atoms.
std::string obligation_id(ObligationKind kind, const std::vector<Path> &subject,
                          const FactSet &required);

/// declare_sc for an unsafe function with no constraints, plus one
/// call_discharge per direct unsafe callee unless `f` is an instance method.
std::vector<Obligation> gen_function_obligations(const FunctionDecl &f,
                                                 const CrateModel &model);

struct StructObligations {
  std::vector<Obligation> obligations;
  std::vector<Diagnostic> diagnostics;
};

/// pair_discharge obligations for every constructor x instance method x
/// unsafe callee, plus the function obligations of every member.
StructObligations gen_struct_obligations(const StructGroup &group,
                                         const CrateModel &model);

struct ObligationSet {
  std::string model_fingerprint;
  std::vector<Obligation> items; // sorted by id, unique
  std::vector<Diagnostic> diagnostics;

  const Obligation *find(std::string_view id) const;
};

ObligationSet generate_obligations(const CrateModel &model, const Upg &upg);
ObligationSet generate_obligations(const CrateModel &model);

using StatusMap = std::map<std::string, Status>;

/// Generation-time statuses.
StatusMap initial_statuses(const ObligationSet &obligations);

enum class Mode { Strong, Weak };

struct Verdict {
  enum class State { Sound, Open, Invalid };
  State state = State::Sound;
  std::size_t unresolved = 0;
  std::vector<Diagnostic> diagnostics;

  bool sound() const { return state == State::Sound; }
  /// `sound`, `open (n unresolved)`, `invalid (n diagnostics)`.
  std::string describe() const;
};

struct VerdictTree {
  Mode mode = Mode::Strong;
  Verdict crate;
  std::map<Path, Verdict> modules;
  std::map<Path, Verdict> structs;
  std::map<Path, Verdict> functions;
};

Verdict module_verdict(const CrateModel &model, const ModuleDecl &mod,
                       Mode mode, const ObligationSet &obligations,
                       const StatusMap &statuses);

/// Error diagnostics of `validate(model)` mark their subjects invalid.
VerdictTree crate_verdict(const CrateModel &model, Mode mode,
                          const ObligationSet &obligations,
                          const StatusMap &statuses);

const char *to_string(ObligationKind kind);
const char *to_string(Status status);
const char *to_string(Mode mode);
const char *to_string(Verdict::State state);

Json to_json(const Obligation &obligation, Status effective);
Json to_json(const Verdict &verdict);
Json to_json(const VerdictTree &tree);

} // namespace upg
