//===- report.hpp - Analysis pipeline and report rendering ----------------===//
#pragma once

#include "upg/audit.hpp"
#include "upg/graph.hpp"
#include "upg/obligations.hpp"

#include <string>
#include <vector>

namespace upg {

/// Everything derived from one validated model.
struct Analysis {
  CrateModel model;
  Upg upg;
  std::vector<Subgraph> subgraphs;
  ObligationSet obligations;
};

Analysis analyze(const CrateModel &model);

/// Verdict tree followed by the obligation table. Modules are listed by
/// path; within a module structs (with their members) precede free
/// functions. Open obligations precede discharged ones.
std::string render_check_text(const Analysis &analysis, const VerdictTree &tree,
                              const StatusMap &statuses);

Json render_check_json(const Analysis &analysis, const VerdictTree &tree,
                       const StatusMap &statuses);

std::string render_obligation_table(const ObligationSet &obligations,
                                    const StatusMap &statuses);

/// Obligations sorted by id, each with its effective status.
Json obligations_json(const ObligationSet &obligations,
                      const StatusMap &statuses);

/// `g -> f`, `c + m -> u` or `f`.
std::string describe_subject(const Obligation &ob);

} // namespace upg
