#include "upg/model.hpp"
#include "upg/diagnostics.hpp"

#include <algorithm>

namespace upg {

FactSet CallSite::hinted_atoms() const {
  FactSet out;
  for (const auto &[atom, reason] : discharge_hints)
    out.insert(atom);
  return out;
}

FunctionKind FunctionDecl::kind() const {
  switch (role) {
  case Role::Constructor:
    return FunctionKind::Constructor;
  case Role::Destructor:
    return FunctionKind::Destructor;
  case Role::Plain:
    break;
  }
  return receiver == Receiver::None ? FunctionKind::StaticFn
                                    : FunctionKind::DynamicMethod;
}

std::string_view FunctionDecl::name() const { return last_segment(path); }

std::string_view parent_path(std::string_view path) {
  auto pos = path.rfind("::");
  if (pos == std::string_view::npos)
    return {};
  return path.substr(0, pos);
}

std::string_view last_segment(std::string_view path) {
  auto pos = path.rfind("::");
  if (pos == std::string_view::npos)
    return path;
  return path.substr(pos + 2);
}

struct CrateModel::Data {
  std::string name;
  ModuleDecl root;
  std::vector<FunctionDecl> implicit;

  std::map<std::string, const FunctionDecl *, std::less<>> function_index;
  std::map<std::string, const StructDecl *, std::less<>> struct_index;
  std::map<std::string, const ModuleDecl *, std::less<>> module_index;
  std::map<std::string, const ModuleDecl *, std::less<>> owner_module;

  std::vector<const FunctionDecl *> functions;
  std::vector<const FunctionDecl *> externs;
  std::vector<const StructDecl *> structs;
  std::vector<const ModuleDecl *> modules;

  void index_module(const ModuleDecl &mod);
  void add_implicit_members(const ModuleDecl &mod);
  void finish();
};

void CrateModel::Data::add_implicit_members(const ModuleDecl &mod) {
  for (const auto &s : mod.structs) {
    if (s.literal_constructor) {
      FunctionDecl ctor;
      ctor.path = s.name + "::" + std::string(kLiteralConstructorName);
      ctor.visibility = s.visibility;
      ctor.role = Role::Constructor;
      ctor.owner = s.name;
      implicit.push_back(std::move(ctor));
    }
    if (s.field_access) {
      FunctionDecl access;
      access.path = s.name + "::" + std::string(kFieldAccessName);
      access.visibility = s.visibility;
      access.receiver = Receiver::MutSelf;
      access.owner = s.name;
      access.breaks = s.invariant_atoms;
      implicit.push_back(std::move(access));
    }
  }
  for (const auto &sub : mod.submodules)
    add_implicit_members(sub);
}

void CrateModel::Data::index_module(const ModuleDecl &mod) {
  if (module_index.emplace(mod.path, &mod).second)
    modules.push_back(&mod);
  for (const auto &f : mod.functions) {
    if (function_index.emplace(f.path, &f).second)
      functions.push_back(&f);
    owner_module.emplace(f.path, &mod);
  }
  for (const auto &f : mod.externs) {
    if (function_index.emplace(f.path, &f).second)
      externs.push_back(&f);
    owner_module.emplace(f.path, &mod);
  }
  for (const auto &s : mod.structs) {
    if (struct_index.emplace(s.name, &s).second)
      structs.push_back(&s);
    owner_module.emplace(s.name, &mod);
  }
  for (const auto &sub : mod.submodules)
    index_module(sub);
}

void CrateModel::Data::finish() {
  add_implicit_members(root);
  index_module(root);
  for (const auto &f : implicit) {
    if (!function_index.emplace(f.path, &f).second)
      continue;
    functions.push_back(&f);
    if (auto it = owner_module.find(*f.owner); it != owner_module.end())
      owner_module.emplace(f.path, it->second);
  }
  auto by_path = [](const FunctionDecl *a, const FunctionDecl *b) {
    return a->path < b->path;
  };
  std::sort(functions.begin(), functions.end(), by_path);
  std::sort(externs.begin(), externs.end(), by_path);
  std::sort(structs.begin(), structs.end(),
            [](auto *a, auto *b) { return a->name < b->name; });
  std::sort(modules.begin(), modules.end(),
            [](auto *a, auto *b) { return a->path < b->path; });
}

CrateModel::CrateModel() : CrateModel("", ModuleDecl{}) {}

CrateModel::CrateModel(std::string name, ModuleDecl root) {
  auto data = std::make_shared<Data>();
  data->name = std::move(name);
  data->root = std::move(root);
  data->finish();
  data_ = std::move(data);
}

const std::string &CrateModel::name() const { return data_->name; }
const ModuleDecl &CrateModel::root() const { return data_->root; }

const FunctionDecl *CrateModel::find_function(std::string_view path) const {
  auto it = data_->function_index.find(path);
  return it == data_->function_index.end() ? nullptr : it->second;
}

const StructDecl *CrateModel::find_struct(std::string_view path) const {
  auto it = data_->struct_index.find(path);
  return it == data_->struct_index.end() ? nullptr : it->second;
}

const ModuleDecl *CrateModel::find_module(std::string_view path) const {
  auto it = data_->module_index.find(path);
  return it == data_->module_index.end() ? nullptr : it->second;
}

const ModuleDecl *CrateModel::module_of(std::string_view path) const {
  auto it = data_->owner_module.find(path);
  return it == data_->owner_module.end() ? nullptr : it->second;
}

const std::vector<const FunctionDecl *> &CrateModel::functions() const {
  return data_->functions;
}

const std::vector<const FunctionDecl *> &CrateModel::externs() const {
  return data_->externs;
}

const std::vector<const StructDecl *> &CrateModel::structs() const {
  return data_->structs;
}

const std::vector<const ModuleDecl *> &CrateModel::modules() const {
  return data_->modules;
}

std::vector<const FunctionDecl *>
CrateModel::members_of(std::string_view struct_path) const {
  std::vector<const FunctionDecl *> out;
  for (const auto *f : data_->functions)
    if (f->owner && *f->owner == struct_path)
      out.push_back(f);
  return out;
}

bool operator==(const CrateModel &a, const CrateModel &b) {
  return a.data_->name == b.data_->name && a.data_->root == b.data_->root;
}

const char *to_string(Visibility v) {
  return v == Visibility::Public ? "public" : "private";
}

const char *to_string(Unsafety u) {
  return u == Unsafety::Unsafe ? "unsafe" : "safe";
}

const char *to_string(Receiver r) {
  switch (r) {
  case Receiver::None:
    return "none";
  case Receiver::RefSelf:
    return "ref_self";
  case Receiver::MutSelf:
    return "mut_self";
  }
  return "none";
}

const char *to_string(Role r) {
  switch (r) {
  case Role::Plain:
    return "plain";
  case Role::Constructor:
    return "constructor";
  case Role::Destructor:
    return "destructor";
  }
  return "plain";
}

const char *to_string(FunctionKind k) {
  switch (k) {
  case FunctionKind::Constructor:
    return "constructor";
  case FunctionKind::StaticFn:
    return "static_fn";
  case FunctionKind::DynamicMethod:
    return "dynamic_method";
  case FunctionKind::Destructor:
    return "destructor";
  }
  return "static_fn";
}

const char *to_string(Severity severity) {
  return severity == Severity::Error ? "error" : "warn";
}

std::string format_diagnostic(const Diagnostic &diag, const std::string &file) {
  std::string out = file;
  if (diag.pos) {
    if (!out.empty())
      out += ":";
    out += std::to_string(diag.pos->line) + ":" +
           std::to_string(diag.pos->column);
  } else if (!diag.pointer.empty()) {
    if (!out.empty())
      out += ":";
    out += diag.pointer;
  }
  if (!out.empty())
    out += ": ";
  out += to_string(diag.severity);
  out += ": ";
  out += diag.message;
  if (!diag.subject.empty())
    out += " (" + diag.subject + ")";
  return out;
}

} // namespace upg
