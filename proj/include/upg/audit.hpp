//===- audit.hpp - Persisted audit judgments ------------------------------===//
//
// Judgments live in an append-only file, one JSON object per line:
//
//   {"author":...,"id":...,"justification":...,"model":...,"ts":...,
//    "verdict":"discharged"|"reopened"}
//
// `model` is the fingerprint of the crate model the judgment was made
// against. Judgments recorded against another fingerprint are stale: they
// stay in the trail but no longer discharge anything.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/diagnostics.hpp"
#include "upg/obligations.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace upg {

enum class JudgmentVerdict { Discharged, Reopened };

struct Judgment {
  std::string obligation_id;
  JudgmentVerdict verdict = JudgmentVerdict::Discharged;
  std::string justification;
  std::string author;
  std::string timestamp;
  std::string model_fingerprint;

  friend bool operator==(const Judgment &, const Judgment &) = default;
};

struct AuditState {
  std::string model_fingerprint;
  /// Full trail in file order, stale and rejected lines included.
  std::vector<Judgment> judgments;
};

class AuditError : public std::runtime_error {
public:
  enum class Code {
    UnknownObligation,
    EmptyJustification,
    StaleFingerprint,
    AutoDischarged,
    Io,
  };
  AuditError(Code code, const std::string &message)
      : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

private:
  Code code_;
};

using Clock = std::function<std::string()>;

/// Current UTC time as `YYYY-MM-DDTHH:MM:SSZ`.
std::string utc_now();

/// Appends a judgment and returns the new state. Throws AuditError for an
/// unknown id, an empty justification, an auto-discharged obligation, or a
/// state bound to a different model than `obligations`.
AuditState mark(const AuditState &state, const ObligationSet &obligations,
                const std::string &obligation_id, JudgmentVerdict verdict,
                const std::string &justification, const std::string &author,
                const Clock &clock = utc_now);

struct EffectiveStatuses {
  StatusMap statuses;
  /// Ids whose most recent discharge was made against another model.
  std::vector<std::string> stale;
  std::vector<Diagnostic> diagnostics;
};

/// Auto-discharged obligations stay so; otherwise the last current judgment
/// wins and obligations without one are open.
EffectiveStatuses effective_statuses(const ObligationSet &obligations,
                                     const AuditState &state);

std::string serialize_judgment(const Judgment &j);

struct AuditLoad {
  AuditState state;
  std::vector<Diagnostic> diagnostics;
};

/// Reads an audit file bound to `fingerprint`. A missing file is an empty
/// trail. Malformed lines and current judgments naming unknown obligations
/// are reported and ignored for status purposes; stale lines are kept.
AuditLoad load_audit_file(const std::string &path,
                          const std::string &fingerprint,
                          const ObligationSet &obligations);

/// Appends one line and flushes it to stable storage. Throws AuditError(Io).
void append_judgment(const std::string &path, const Judgment &judgment);

const char *to_string(JudgmentVerdict verdict);

} // namespace upg
