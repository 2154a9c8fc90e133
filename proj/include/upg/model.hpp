//===- model.hpp - Data model of an analyzed crate ------------------------===//
//
// A crate is a tree of modules holding functions, structs and external
// function declarations. Paths are `::`-qualified; the root module's path is
// the crate name. Functions owned by a struct live at `<module>::<Struct>::`.
//
// A CrateModel is immutable once built. Copies share the same storage.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/atoms.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace upg {

using Path = std::string;

enum class Visibility { Private, Public };
enum class Unsafety { Safe, Unsafe };
enum class Receiver { None, RefSelf, MutSelf };
enum class Role { Plain, Constructor, Destructor };

/// Position of a function inside its struct, derived from receiver and role.
enum class FunctionKind { Constructor, StaticFn, DynamicMethod, Destructor };

struct CallSite {
  Path callee;
  /// Atom name -> auditor-supplied reason the callee's atom holds here.
  std::map<std::string, std::string> discharge_hints;

  FactSet hinted_atoms() const;
  friend bool operator==(const CallSite &, const CallSite &) = default;
};

struct FunctionDecl {
  Path path;
  Visibility visibility = Visibility::Private;
  Unsafety unsafety = Unsafety::Safe;
  Receiver receiver = Receiver::None;
  Role role = Role::Plain;
  /// Owning struct for constructors, destructors and methods.
  std::optional<Path> owner;
  FactSet sc;
  FactSet establishes;
  FactSet breaks;
  std::vector<CallSite> calls;
  /// Declared with `extern fn` (or `static mut`); has no body in the crate.
  bool external = false;

  bool is_unsafe() const { return unsafety == Unsafety::Unsafe; }
  bool is_public() const { return visibility == Visibility::Public; }
  FunctionKind kind() const;
  /// Last path segment.
  std::string_view name() const;

  friend bool operator==(const FunctionDecl &, const FunctionDecl &) = default;
};

struct FieldDecl {
  std::string name;
  std::string type;
  friend bool operator==(const FieldDecl &, const FieldDecl &) = default;
};

struct StructDecl {
  Path name;
  Visibility visibility = Visibility::Private;
  std::vector<FieldDecl> fields;
  FactSet invariant_atoms;
  /// Struct literal syntax is reachable: adds an implicit safe constructor.
  bool literal_constructor = false;
  /// Fields are directly writable: adds an implicit `&mut self` method that
  /// breaks every invariant atom.
  bool field_access = false;

  bool is_public() const { return visibility == Visibility::Public; }
  friend bool operator==(const StructDecl &, const StructDecl &) = default;
};

struct ModuleDecl {
  Path path;
  std::vector<FunctionDecl> functions;
  std::vector<StructDecl> structs;
  std::vector<ModuleDecl> submodules;
  std::vector<FunctionDecl> externs;

  friend bool operator==(const ModuleDecl &, const ModuleDecl &) = default;
};

/// Names of the implicit members added by struct flags.
inline constexpr std::string_view kLiteralConstructorName = "__literal";
inline constexpr std::string_view kFieldAccessName = "__field_access";

/// Parent path (`a::b::c` -> `a::b`); empty for a single segment.
std::string_view parent_path(std::string_view path);
/// Last segment of a path.
std::string_view last_segment(std::string_view path);

class CrateModel {
public:
  CrateModel();
  CrateModel(std::string name, ModuleDecl root);

  const std::string &name() const;
  const ModuleDecl &root() const;

  /// Crate-local, external and implicit functions. Duplicate paths resolve
  /// to the first declaration.
  const FunctionDecl *find_function(std::string_view path) const;
  const StructDecl *find_struct(std::string_view path) const;
  const ModuleDecl *find_module(std::string_view path) const;
  /// Module that declares a function or struct.
  const ModuleDecl *module_of(std::string_view path) const;

  /// Every function with a body (declared plus implicit), sorted by path.
  const std::vector<const FunctionDecl *> &functions() const;
  /// Every external declaration, sorted by path.
  const std::vector<const FunctionDecl *> &externs() const;
  /// Every struct, sorted by path.
  const std::vector<const StructDecl *> &structs() const;
  /// Every module (root included), sorted by path.
  const std::vector<const ModuleDecl *> &modules() const;
  /// Functions owned by a struct, implicit members included, sorted by path.
  std::vector<const FunctionDecl *> members_of(std::string_view struct_path) const;

  friend bool operator==(const CrateModel &a, const CrateModel &b);

private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

const char *to_string(Visibility v);
const char *to_string(Unsafety u);
const char *to_string(Receiver r);
const char *to_string(Role r);
const char *to_string(FunctionKind k);

} // namespace upg
