//===- graph.hpp - Unsafety propagation graph -----------------------------===//
//
// The graph holds every function that is unsafe or reaches an unsafe callee
// through crate-local calls, the call edges along which unsafety propagates,
// and one group per struct with a member that calls unsafe code directly.
// Group members are graph nodes as well.
//
// Edges between two safe functions are kept when the callee reaches unsafe
// code; obligations stay bound to direct unsafe callees.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/json_io.hpp"
#include "upg/model.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace upg {

struct UpgNode {
  Path function;
  FunctionKind kind = FunctionKind::StaticFn;
  Unsafety unsafety = Unsafety::Safe;
  bool external = false;
  friend bool operator==(const UpgNode &, const UpgNode &) = default;
};

struct UpgEdge {
  Path caller;
  Path callee;
  bool callee_unsafe = false;
  friend bool operator==(const UpgEdge &, const UpgEdge &) = default;
  friend auto operator<=>(const UpgEdge &a, const UpgEdge &b) {
    return std::tie(a.caller, a.callee) <=> std::tie(b.caller, b.callee);
  }
};

struct StructGroup {
  Path struct_path;
  std::set<Path> constructors;
  std::set<Path> static_methods;
  std::set<Path> dynamic_methods;
  std::optional<Path> destructor;
  /// Dynamic methods and destructor whose broken set is non-empty.
  std::set<Path> disruptive;

  /// Dynamic methods plus the destructor, sorted.
  std::vector<Path> instance_methods() const;
  friend bool operator==(const StructGroup &, const StructGroup &) = default;
};

struct Upg {
  std::vector<UpgNode> nodes;       // sorted by path
  std::vector<UpgEdge> edges;       // sorted by (caller, callee)
  std::vector<StructGroup> struct_groups; // sorted by struct path

  const UpgNode *find_node(std::string_view path) const;
  bool empty() const { return nodes.empty() && struct_groups.empty(); }
};

enum class SubgraphKind { UnsafeNode, CallWithUnsafeCallee, StructAudit };

struct Subgraph {
  std::string id;
  SubgraphKind kind = SubgraphKind::UnsafeNode;
  Path focus;
  std::set<Path> nodes;
  std::set<UpgEdge> edges;
};

/// Direct callees of `f` that are unsafe. Callees that do not resolve are
/// skipped; the validator reports them.
std::set<Path> unsafe_callees(const CrateModel &model, const FunctionDecl &f);
/// Throws std::out_of_range when `f` does not resolve.
std::set<Path> unsafe_callees(const CrateModel &model, std::string_view f);

/// The C/F/M/d partition of a struct's members, independent of whether the
/// struct qualifies for the graph.
StructGroup make_struct_group(const CrateModel &model,
                              std::string_view struct_path);

Upg build_upg(const CrateModel &model);

/// Audit subgraphs ordered by focus path, then kind name, then id.
std::vector<Subgraph> segment(const Upg &upg);

std::string export_dot(const Upg &upg);

const char *to_string(SubgraphKind kind);

Json to_json(const Upg &upg);
Json to_json(const Subgraph &subgraph);
Json to_json(const std::vector<Subgraph> &subgraphs);

} // namespace upg
