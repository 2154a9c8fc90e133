//===- cli.hpp - Command-line driver --------------------------------------===//
//
// Exit codes: 0 sound / no undefined behavior / success, 1 open obligations
// or undefined-behavior witnesses, 2 diagnostics of error severity, I/O or
// usage errors, 3 oracle trace cap exceeded.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/loader.hpp"
#include "upg/obligations.hpp"
#include "upg/semantics.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace upg {

enum ExitCode : int {
  kExitOk = 0,
  kExitOpen = 1,
  kExitError = 2,
  kExitCapExceeded = 3,
};

enum class OutputFormat { Default, Text, Json, Dot };

struct RunConfig {
  std::string input;
  std::optional<InputFormat> input_format;
  Mode mode = Mode::Strong;
  int k = kDefaultBound;
  std::uint64_t cap = kDefaultTraceCap;
  OutputFormat format = OutputFormat::Default;
  std::string audit_path;
  std::string addr = "127.0.0.1:8080";
};

struct MarkArgs {
  std::string id;
  std::string verdict;
  std::string justification;
  std::string author;
};

int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_oracle(const RunConfig &config, std::ostream &out, std::ostream &err);
int cmd_obligations(const RunConfig &config, std::ostream &out,
                    std::ostream &err);
int cmd_mark(const RunConfig &config, const MarkArgs &args, std::ostream &out,
             std::ostream &err);
int cmd_export_dot(const RunConfig &config, std::ostream &out,
                   std::ostream &err);
/// Blocks until the server stops.
int cmd_serve(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses arguments and dispatches to a subcommand.
int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err);

} // namespace upg
