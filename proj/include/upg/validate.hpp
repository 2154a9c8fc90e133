//===- validate.hpp - Structural and semantic model checks ----------------===//
#pragma once

#include "upg/diagnostics.hpp"
#include "upg/model.hpp"

#include <vector>

namespace upg {

/// A diagnostic plus the JSON pointer of the offending item in the model's
/// canonical serialization (`/root/functions/0/calls/1`).
struct LocatedDiagnostic {
  Diagnostic diag;
  std::string locus;
};

/// Checks every declaration-level invariant of the model. Errors: duplicate
/// paths, unresolved callees, misplaced roles or receivers, constraint sets
/// on safe functions, `breaks` on receiver-less functions, stray discharge
/// hints. Warnings: unsafe functions with no constraints, struct invariant
/// gaps. Output order follows the declaration tree.
std::vector<LocatedDiagnostic> validate_located(const CrateModel &model);

/// Same checks with `pointer` filled from the locus.
std::vector<Diagnostic> validate(const CrateModel &model);

} // namespace upg
