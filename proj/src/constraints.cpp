#include "upg/constraints.hpp"

namespace upg {

const char *to_string(FactSource source) {
  switch (source) {
  case FactSource::OwnSc:
    return "own_sc";
  case FactSource::Establishes:
    return "establishes";
  case FactSource::ConstructorSc:
    return "constructor_sc";
  case FactSource::ConstructorEstablishes:
    return "constructor_establishes";
  case FactSource::MethodEstablishes:
    return "method_establishes";
  case FactSource::Auditor:
    return "auditor";
  }
  return "auditor";
}

void AvailableFacts::add(const FactSet &more, FactSource source) {
  for (const auto &atom : more) {
    atoms.insert(atom);
    provenance.emplace(atom, source);
  }
}

void AvailableFacts::subtract(const FactSet &less) {
  for (const auto &atom : less) {
    if (atoms.erase(atom)) {
      provenance.erase(atom);
      removed.insert(atom);
    }
  }
}

FactSet bs_of_method(const FunctionDecl &m) { return m.breaks.minus(m.sc); }

FactSet bs_of_struct(const StructGroup &group, const CrateModel &model) {
  FactSet out;
  for (const auto &path : group.disruptive)
    if (const FunctionDecl *m = model.find_function(path))
      out = out.united(bs_of_method(*m));
  return out;
}

Entailment entails(const AvailableFacts &available, const FactSet &required) {
  Entailment out;
  out.missing = required.minus(available.atoms);
  out.holds = out.missing.empty();
  return out;
}

AvailableFacts facts_for_function(const FunctionDecl &f) {
  AvailableFacts out;
  out.add(f.sc, FactSource::OwnSc);
  out.add(f.establishes, FactSource::Establishes);
  return out;
}

AvailableFacts facts_for_pair(const FunctionDecl &c, const FunctionDecl &m,
                              const StructGroup &group,
                              const CrateModel &model) {
  AvailableFacts out;
  out.add(m.sc, FactSource::OwnSc);
  out.add(m.establishes, FactSource::MethodEstablishes);
  out.add(c.sc, FactSource::ConstructorSc);
  out.add(c.establishes, FactSource::ConstructorEstablishes);
  out.subtract(bs_of_struct(group, model));
  return out;
}

FactSet hinted_for_callee(const FunctionDecl &f, std::string_view callee) {
  std::optional<FactSet> common;
  for (const auto &call : f.calls) {
    if (call.callee != callee)
      continue;
    FactSet hinted = call.hinted_atoms();
    common = common ? common->intersected(hinted) : hinted;
  }
  return common.value_or(FactSet{});
}

} // namespace upg
