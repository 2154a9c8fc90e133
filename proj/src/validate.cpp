#include "upg/validate.hpp"

#include <map>
#include <set>

namespace upg {
namespace {

class Validator {
public:
  explicit Validator(const CrateModel &model) : model_(model) {}

  std::vector<LocatedDiagnostic> run() {
    if (!is_identifier(model_.name()))
      error("/name", "crate name is not an identifier", model_.name());
    if (model_.root().path != model_.name())
      error("/root/path", "root module path must equal the crate name",
            model_.root().path);
    visit_module(model_.root(), "/root");
    return std::move(out_);
  }

private:
  void report(Severity sev, std::string locus, std::string message,
              std::string subject) {
    LocatedDiagnostic d;
    d.diag.severity = sev;
    d.diag.message = std::move(message);
    d.diag.subject = std::move(subject);
    d.locus = std::move(locus);
    out_.push_back(std::move(d));
  }
  void error(std::string locus, std::string message, std::string subject) {
    report(Severity::Error, std::move(locus), std::move(message),
           std::move(subject));
  }
  void warn(std::string locus, std::string message, std::string subject) {
    report(Severity::Warn, std::move(locus), std::move(message),
           std::move(subject));
  }

  void claim_path(const std::string &path, const std::string &locus) {
    if (!seen_.insert(path).second)
      error(locus, "duplicate path", path);
  }

  void check_atoms(const FactSet &atoms, const std::string &locus,
                   const std::string &subject) {
    for (const auto &atom : atoms)
      if (!is_identifier(atom.name()))
        error(locus, "invalid atom name '" + atom.name() + "'", subject);
  }

  void visit_module(const ModuleDecl &mod, const std::string &ptr) {
    claim_path(mod.path, ptr);
    for (std::size_t i = 0; i < mod.functions.size(); ++i)
      visit_function(mod, mod.functions[i],
                     ptr + "/functions/" + std::to_string(i));
    for (std::size_t i = 0; i < mod.structs.size(); ++i)
      visit_struct(mod, mod.structs[i], ptr + "/structs/" + std::to_string(i));
    for (std::size_t i = 0; i < mod.externs.size(); ++i)
      visit_extern(mod.externs[i], ptr + "/externs/" + std::to_string(i));
    for (std::size_t i = 0; i < mod.submodules.size(); ++i) {
      const auto &sub = mod.submodules[i];
      std::string sub_ptr = ptr + "/submodules/" + std::to_string(i);
      if (parent_path(sub.path) != mod.path)
        error(sub_ptr, "submodule path is not inside its parent module",
              sub.path);
      visit_module(sub, sub_ptr);
    }
  }

  void visit_function(const ModuleDecl &mod, const FunctionDecl &f,
                      const std::string &ptr) {
    claim_path(f.path, ptr);
    check_atoms(f.sc, ptr, f.path);
    check_atoms(f.establishes, ptr, f.path);
    check_atoms(f.breaks, ptr, f.path);

    const StructDecl *owner = nullptr;
    if (f.owner) {
      owner = model_.find_struct(*f.owner);
      if (!owner)
        error(ptr, "unknown owning struct '" + *f.owner + "'", f.path);
      else if (model_.module_of(owner->name) != &mod)
        error(ptr, "owning struct is declared in another module", f.path);
    }
    std::string_view expected_parent = f.owner ? *f.owner : mod.path;
    if (parent_path(f.path) != expected_parent ||
        !is_identifier(last_segment(f.path)))
      error(ptr, "function path is not inside its module or struct", f.path);

    if (!f.is_unsafe() && !f.sc.empty())
      error(ptr, "safe function declares non-empty sc", f.path);
    if (f.is_unsafe() && f.sc.empty())
      warn(ptr, "unsafe function declares no safety constraints", f.path);
    if (f.receiver != Receiver::None && !f.owner)
      error(ptr, "method has no owning struct", f.path);
    if (f.role != Role::Plain && !f.owner)
      error(ptr, std::string(to_string(f.role)) + " has no owning struct",
            f.path);
    if (f.role == Role::Destructor &&
        (f.receiver != Receiver::MutSelf || f.is_unsafe()))
      error(ptr, "destructor must be safe and take &mut self", f.path);
    if (f.role == Role::Constructor && f.receiver != Receiver::None)
      error(ptr, "constructor must not take a receiver", f.path);
    if (f.role == Role::Destructor && owner) {
      if (!destructors_.insert(owner->name).second)
        error(ptr, "struct has more than one destructor", f.path);
    }
    if (!f.breaks.empty() && f.receiver == Receiver::None)
      error(ptr, "breaks declared on a function without a receiver", f.path);

    for (std::size_t i = 0; i < f.calls.size(); ++i) {
      const auto &call = f.calls[i];
      std::string call_ptr = ptr + "/calls/" + std::to_string(i);
      const FunctionDecl *callee = model_.find_function(call.callee);
      if (!callee) {
        error(call_ptr, "unresolved callee '" + call.callee + "'", f.path);
        continue;
      }
      for (const auto &[atom, reason] : call.discharge_hints) {
        std::string hint_ptr = call_ptr + "/discharge_hints/" + atom;
        if (!is_identifier(atom))
          error(hint_ptr, "invalid atom name '" + atom + "'", f.path);
        else if (!callee->sc.contains(atom))
          error(hint_ptr,
                "discharge hint for atom '" + atom + "' not in callee sc",
                f.path);
      }
    }
  }

  void visit_struct(const ModuleDecl &mod, const StructDecl &s,
                    const std::string &ptr) {
    claim_path(s.name, ptr);
    check_atoms(s.invariant_atoms, ptr, s.name);
    if (parent_path(s.name) != mod.path || !is_identifier(last_segment(s.name)))
      error(ptr, "struct path is not inside its module", s.name);
    if (s.literal_constructor)
      claim_path(s.name + "::" + std::string(kLiteralConstructorName), ptr);
    if (s.field_access)
      claim_path(s.name + "::" + std::string(kFieldAccessName), ptr);

    FactSet established;
    FactSet required;
    for (const auto *member : model_.members_of(s.name)) {
      switch (member->kind()) {
      case FunctionKind::Constructor:
        established = established.united(member->establishes);
        break;
      case FunctionKind::DynamicMethod:
      case FunctionKind::Destructor:
        for (const auto &call : member->calls) {
          const FunctionDecl *callee = model_.find_function(call.callee);
          if (callee && callee->is_unsafe())
            required = required.united(callee->sc);
        }
        break;
      case FunctionKind::StaticFn:
        break;
      }
    }
    FactSet gap = established.intersected(required).minus(s.invariant_atoms);
    if (!gap.empty())
      warn(ptr,
           "invariant_atoms omits atoms established by a constructor and "
           "required by a method: " +
               gap.to_string(),
           s.name);
  }

  void visit_extern(const FunctionDecl &f, const std::string &ptr) {
    claim_path(f.path, ptr);
    check_atoms(f.sc, ptr, f.path);
    bool path_ok = !f.path.empty();
    for (std::string_view rest = f.path; path_ok && !rest.empty();) {
      auto pos = rest.find("::");
      path_ok = is_identifier(rest.substr(0, pos));
      rest = pos == std::string_view::npos ? std::string_view{}
                                           : rest.substr(pos + 2);
    }
    if (!path_ok)
      error(ptr, "extern path is not a valid path", f.path);
    if (!f.is_unsafe() && !f.sc.empty())
      error(ptr, "safe function declares non-empty sc", f.path);
    if (f.is_unsafe() && f.sc.empty())
      warn(ptr, "unsafe function declares no safety constraints", f.path);
  }

  const CrateModel &model_;
  std::set<std::string> seen_;
  std::set<std::string> destructors_;
  std::vector<LocatedDiagnostic> out_;
};

} // namespace

std::vector<LocatedDiagnostic> validate_located(const CrateModel &model) {
  return Validator(model).run();
}

std::vector<Diagnostic> validate(const CrateModel &model) {
  std::vector<Diagnostic> out;
  for (auto &located : validate_located(model)) {
    located.diag.pointer = located.locus;
    out.push_back(std::move(located.diag));
  }
  return out;
}

} // namespace upg
