//===- semantics.hpp - Bounded abstract-execution oracle ------------------===//
//
// Executes call traces over sets of true atoms. A call to an unsafe function
// whose constraints are not all true (or hinted at the call site) is
// undefined behavior. A step adds its own `establishes` and constraints on
// entry, checks its calls in order, and on exit drops the invariants it
// breaks that are not among its own constraints: a caller satisfying an
// unsafe method's constraints also keeps them true across the call.
//
// Struct checks enumerate every constructor followed by every sequence of
// instance methods up to a length bound, each with and without the
// destructor appended. Shorter sequences come first; sequences of equal
// length are ordered lexicographically by method path.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/graph.hpp"
#include "upg/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace upg {

struct AbstractState {
  FactSet atoms;
  friend bool operator==(const AbstractState &, const AbstractState &) = default;
};

struct Trace {
  std::vector<Path> steps;
  FactSet context_assumptions;
  friend bool operator==(const Trace &, const Trace &) = default;
};

struct UbReport {
  Trace trace;
  Path failing_step;
  Path failing_callee;
  FactSet missing;
  friend bool operator==(const UbReport &, const UbReport &) = default;
};

/// Runs one step. On undefined behavior the report's trace is empty; callers
/// fill it in.
std::variant<AbstractState, UbReport>
exec_function(const FunctionDecl &f, const AbstractState &state,
              const CrateModel &model);

/// Runs `f` alone from a state holding exactly its own constraints.
std::optional<UbReport> oracle_check_function(const FunctionDecl &f,
                                              const CrateModel &model);

inline constexpr std::uint64_t kDefaultTraceCap = 1'000'000;
inline constexpr int kDefaultBound = 4;

class TraceCapExceeded : public std::runtime_error {
public:
  TraceCapExceeded(Path struct_path, std::uint64_t needed, std::uint64_t cap);
  const Path &struct_path() const { return struct_path_; }
  std::uint64_t needed() const { return needed_; }

private:
  Path struct_path_;
  std::uint64_t needed_;
};

struct StructCheck {
  std::optional<UbReport> witness;
  std::uint64_t traces = 0;
};

/// Throws std::invalid_argument for k < 1 and TraceCapExceeded when
/// |instance methods|^k exceeds `cap` for a struct that needs enumeration.
StructCheck oracle_check_struct(const StructGroup &group, int k,
                                const CrateModel &model,
                                std::uint64_t cap = kDefaultTraceCap);

struct OracleReport {
  std::size_t functions_checked = 0;
  std::size_t structs_checked = 0;
  std::uint64_t traces = 0;
  std::vector<UbReport> witnesses;
};

/// Every bodied non-instance function and every struct of the crate.
OracleReport run_oracle(const CrateModel &model, int k,
                        std::uint64_t cap = kDefaultTraceCap);

Json to_json(const UbReport &report);
Json to_json(const OracleReport &report);

} // namespace upg
