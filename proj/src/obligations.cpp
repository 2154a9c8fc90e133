#include "upg/obligations.hpp"
#include "upg/json_io.hpp"
#include "upg/validate.hpp"

#include <algorithm>

namespace upg {

const char *to_string(ObligationKind kind) {
  switch (kind) {
  case ObligationKind::DeclareSc:
    return "declare_sc";
  case ObligationKind::CallDischarge:
    return "call_discharge";
  case ObligationKind::PairDischarge:
    return "pair_discharge";
  }
  return "call_discharge";
}

const char *to_string(Status status) {
  switch (status) {
  case Status::AutoDischarged:
    return "auto_discharged";
  case Status::Open:
    return "open";
  case Status::ManuallyDischarged:
    return "manually_discharged";
  }
  return "open";
}

const char *to_string(Mode mode) {
  return mode == Mode::Weak ? "weak" : "strong";
}

const char *to_string(Verdict::State state) {
  switch (state) {
  case Verdict::State::Sound:
    return "sound";
  case Verdict::State::Open:
    return "open";
  case Verdict::State::Invalid:
    return "invalid";
  }
  return "open";
}

std::string obligation_id(ObligationKind kind, const std::vector<Path> &subject,
                          const FactSet &required) {
  std::string key = to_string(kind);
  key += '|';
  for (std::size_t i = 0; i < subject.size(); ++i)
    key += (i ? "," : "") + subject[i];
  key += '|';
  bool first = true;
  for (const auto &atom : required) {
    key += (first ? "" : ",") + atom.name();
    first = false;
  }
  return sha256_hex(key).substr(0, 16);
}

namespace {

Obligation make_obligation(ObligationKind kind, std::vector<Path> subject,
                           Path owner, FactSet required,
                           AvailableFacts available) {
  Obligation ob;
  ob.kind = kind;
  ob.id = obligation_id(kind, subject, required);
  ob.subject = std::move(subject);
  ob.owner = std::move(owner);
  ob.required = std::move(required);
  ob.available = std::move(available);
  if (kind == ObligationKind::DeclareSc) {
    ob.status = Status::Open;
  } else {
    ob.missing = entails(ob.available, ob.required).missing;
    ob.status = ob.missing.empty() ? Status::AutoDischarged : Status::Open;
  }
  return ob;
}

} // namespace

std::vector<Obligation> gen_function_obligations(const FunctionDecl &f,
                                                 const CrateModel &model) {
  std::vector<Obligation> out;
  if (f.external)
    return out;
  if (f.is_unsafe() && f.sc.empty())
    out.push_back(make_obligation(ObligationKind::DeclareSc, {f.path}, f.path,
                                  {}, facts_for_function(f)));
  FunctionKind kind = f.kind();
  if (kind != FunctionKind::Constructor && kind != FunctionKind::StaticFn)
    return out;
  for (const auto &callee_path : unsafe_callees(model, f)) {
    const FunctionDecl *callee = model.find_function(callee_path);
    AvailableFacts available = facts_for_function(f);
    available.add(hinted_for_callee(f, callee_path), FactSource::Auditor);
    out.push_back(make_obligation(ObligationKind::CallDischarge,
                                  {f.path, callee_path}, f.path, callee->sc,
                                  std::move(available)));
  }
  return out;
}

StructObligations gen_struct_obligations(const StructGroup &group,
                                         const CrateModel &model) {
  StructObligations out;
  for (const auto *member : model.members_of(group.struct_path))
    for (auto &ob : gen_function_obligations(*member, model))
      out.obligations.push_back(std::move(ob));

  for (const auto &m_path : group.instance_methods()) {
    const FunctionDecl *m = model.find_function(m_path);
    std::set<Path> callees = unsafe_callees(model, *m);
    if (callees.empty())
      continue;
    if (group.constructors.empty()) {
      Diagnostic d;
      d.severity = Severity::Warn;
      d.message = "struct has no constructor; method " + m_path +
                  " calls unsafe code but is unreachable";
      d.subject = group.struct_path;
      out.diagnostics.push_back(std::move(d));
      continue;
    }
    for (const auto &c_path : group.constructors) {
      const FunctionDecl *c = model.find_function(c_path);
      for (const auto &u_path : callees) {
        const FunctionDecl *u = model.find_function(u_path);
        AvailableFacts available = facts_for_pair(*c, *m, group, model);
        available.add(hinted_for_callee(*m, u_path), FactSource::Auditor);
        out.obligations.push_back(make_obligation(
            ObligationKind::PairDischarge, {c_path, m_path, u_path},
            group.struct_path, u->sc, std::move(available)));
      }
    }
  }
  return out;
}

const Obligation *ObligationSet::find(std::string_view id) const {
  auto it = std::lower_bound(
      items.begin(), items.end(), id,
      [](const Obligation &ob, std::string_view key) { return ob.id < key; });
  if (it == items.end() || it->id != id)
    return nullptr;
  return &*it;
}

ObligationSet generate_obligations(const CrateModel &model, const Upg &upg) {
  ObligationSet set;
  set.model_fingerprint = fingerprint(model);
  std::map<std::string, Obligation> by_id;
  for (const auto *f : model.functions())
    for (auto &ob : gen_function_obligations(*f, model))
      by_id.emplace(ob.id, std::move(ob));
  for (const auto &group : upg.struct_groups) {
    StructObligations so = gen_struct_obligations(group, model);
    for (auto &ob : so.obligations)
      by_id.emplace(ob.id, std::move(ob));
    for (auto &d : so.diagnostics)
      set.diagnostics.push_back(std::move(d));
  }
  for (auto &[id, ob] : by_id)
    set.items.push_back(std::move(ob));
  return set;
}

ObligationSet generate_obligations(const CrateModel &model) {
  return generate_obligations(model, build_upg(model));
}

StatusMap initial_statuses(const ObligationSet &obligations) {
  StatusMap out;
  for (const auto &ob : obligations.items)
    out.emplace(ob.id, ob.status);
  return out;
}

std::string Verdict::describe() const {
  switch (state) {
  case State::Sound:
    return "sound";
  case State::Open:
    return "open (" + std::to_string(unresolved) + " unresolved)";
  case State::Invalid:
    return "invalid (" + std::to_string(diagnostics.size()) + " diagnostics)";
  }
  return "open";
}

namespace {

Verdict::State worst(Verdict::State a, Verdict::State b) {
  return static_cast<int>(a) > static_cast<int>(b) ? a : b;
}

void absorb(Verdict &parent, const Verdict &child) {
  parent.unresolved += child.unresolved;
  parent.state = worst(parent.state, child.state);
}

class VerdictBuilder {
public:
  VerdictBuilder(const CrateModel &model, Mode mode,
                 const ObligationSet &obligations, const StatusMap &statuses)
      : model_(model), mode_(mode) {
    for (const auto &ob : obligations.items) {
      auto it = statuses.find(ob.id);
      Status st = it == statuses.end() ? ob.status : it->second;
      if (st == Status::Open)
        ++open_by_owner_[ob.owner];
    }
    for (auto &d : validate(model)) {
      if (d.severity != Severity::Error)
        continue;
      if (d.subject.empty() || !(model.find_function(d.subject) ||
                                 model.find_struct(d.subject) ||
                                 model.find_module(d.subject)))
        stray_errors_.push_back(d);
      else
        errors_by_subject_[d.subject].push_back(std::move(d));
    }
  }

  VerdictTree run() {
    VerdictTree tree;
    tree.mode = mode_;
    tree.crate = module(model_.root(), tree);
    for (auto &d : stray_errors_) {
      tree.crate.state = Verdict::State::Invalid;
      tree.crate.diagnostics.push_back(d);
    }
    return tree;
  }

  Verdict module(const ModuleDecl &mod, VerdictTree &tree) {
    Verdict v = leaf(mod.path);
    bool weak = mode_ == Mode::Weak;
    for (const auto &s : mod.structs) {
      Verdict sv = structure(s, tree);
      tree.structs[s.name] = sv;
      if (!weak || s.is_public())
        absorb(v, sv);
    }
    for (const auto &f : mod.functions) {
      if (f.owner)
        continue;
      Verdict fv = leaf(f.path);
      tree.functions[f.path] = fv;
      if (!weak || f.is_public())
        absorb(v, fv);
    }
    for (const auto &sub : mod.submodules)
      absorb(v, module(sub, tree));
    tree.modules[mod.path] = v;
    return v;
  }

private:
  Verdict leaf(const Path &path) {
    Verdict v;
    if (auto it = open_by_owner_.find(path); it != open_by_owner_.end())
      v.unresolved = it->second;
    if (v.unresolved)
      v.state = Verdict::State::Open;
    if (auto it = errors_by_subject_.find(path);
        it != errors_by_subject_.end()) {
      v.state = Verdict::State::Invalid;
      v.diagnostics = it->second;
    }
    return v;
  }

  Verdict structure(const StructDecl &s, VerdictTree &tree) {
    Verdict v = leaf(s.name);
    for (const auto *member : model_.members_of(s.name)) {
      Verdict mv = leaf(member->path);
      tree.functions[member->path] = mv;
      absorb(v, mv);
    }
    return v;
  }

  const CrateModel &model_;
  Mode mode_;
  std::map<Path, std::size_t> open_by_owner_;
  std::map<Path, std::vector<Diagnostic>> errors_by_subject_;
  std::vector<Diagnostic> stray_errors_;
};

} // namespace

Verdict module_verdict(const CrateModel &model, const ModuleDecl &mod,
                       Mode mode, const ObligationSet &obligations,
                       const StatusMap &statuses) {
  VerdictTree scratch;
  return VerdictBuilder(model, mode, obligations, statuses).module(mod, scratch);
}

VerdictTree crate_verdict(const CrateModel &model, Mode mode,
                          const ObligationSet &obligations,
                          const StatusMap &statuses) {
  return VerdictBuilder(model, mode, obligations, statuses).run();
}

Json to_json(const Obligation &ob, Status effective) {
  Json provenance = Json::object();
  for (const auto &[atom, source] : ob.available.provenance)
    provenance[atom.name()] = to_string(source);
  return {{"id", ob.id},
          {"kind", to_string(ob.kind)},
          {"subject", ob.subject},
          {"owner", ob.owner},
          {"required", to_json(ob.required)},
          {"available",
           {{"atoms", to_json(ob.available.atoms)},
            {"provenance", provenance},
            {"removed", to_json(ob.available.removed)}}},
          {"missing", to_json(ob.missing)},
          {"generated_status", to_string(ob.status)},
          {"status", to_string(effective)}};
}

Json to_json(const Verdict &v) {
  Json j{{"verdict", to_string(v.state)}, {"unresolved", v.unresolved}};
  if (!v.diagnostics.empty()) {
    Json diags = Json::array();
    for (const auto &d : v.diagnostics)
      diags.push_back(d.message);
    j["diagnostics"] = diags;
  }
  return j;
}

Json to_json(const VerdictTree &tree) {
  Json j;
  j["mode"] = to_string(tree.mode);
  j["crate"] = to_string(tree.crate.state);
  j["unresolved"] = tree.crate.unresolved;
  for (const char *level : {"modules", "structs", "functions"})
    j[level] = Json::object();
  for (const auto &[path, v] : tree.modules)
    j["modules"][path] = to_json(v);
  for (const auto &[path, v] : tree.structs)
    j["structs"][path] = to_json(v);
  for (const auto &[path, v] : tree.functions)
    j["functions"][path] = to_json(v);
  return j;
}

} // namespace upg
