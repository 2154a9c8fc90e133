//===- diagnostics.hpp - Positioned diagnostics ---------------------------===//
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace upg {

enum class Severity { Warn, Error };

struct SourcePos {
  int line = 0;
  int column = 0;
  friend bool operator==(const SourcePos &, const SourcePos &) = default;
};

/// A defect report. Diagnostics produced from a parsed model carry either a
/// source position (facts input) or a JSON pointer (JSON input); `subject`
/// names the declaration the diagnostic concerns, when there is one.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::string subject;
  std::optional<SourcePos> pos;
  std::string pointer;

  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

inline bool has_errors(const std::vector<Diagnostic> &diags) {
  for (const auto &d : diags)
    if (d.severity == Severity::Error)
      return true;
  return false;
}

const char *to_string(Severity severity);

/// `file:line:col: error: message (subject)`; `file` may be empty.
std::string format_diagnostic(const Diagnostic &diag, const std::string &file);

} // namespace upg
