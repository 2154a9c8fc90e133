#include "upg/report.hpp"

#include <algorithm>
#include <sstream>

namespace upg {

Analysis analyze(const CrateModel &model) {
  Analysis a{model, build_upg(model), {}, {}};
  a.subgraphs = segment(a.upg);
  a.obligations = generate_obligations(model, a.upg);
  return a;
}

std::string describe_subject(const Obligation &ob) {
  switch (ob.kind) {
  case ObligationKind::DeclareSc:
    return ob.subject.at(0);
  case ObligationKind::CallDischarge:
    return ob.subject.at(0) + " -> " + ob.subject.at(1);
  case ObligationKind::PairDischarge:
    return ob.subject.at(0) + " + " + ob.subject.at(1) + " -> " +
           ob.subject.at(2);
  }
  return {};
}

namespace {

Status status_of(const Obligation &ob, const StatusMap &statuses) {
  auto it = statuses.find(ob.id);
  return it == statuses.end() ? ob.status : it->second;
}

int listing_rank(Status s) {
  switch (s) {
  case Status::Open:
    return 0;
  case Status::ManuallyDischarged:
    return 1;
  case Status::AutoDischarged:
    return 2;
  }
  return 0;
}

const char *short_status(Status s) {
  switch (s) {
  case Status::Open:
    return "open  ";
  case Status::ManuallyDischarged:
    return "manual";
  case Status::AutoDischarged:
    return "auto  ";
  }
  return "open  ";
}

std::vector<const Obligation *> listing_order(const ObligationSet &obligations,
                                              const StatusMap &statuses) {
  std::vector<const Obligation *> out;
  for (const auto &ob : obligations.items)
    out.push_back(&ob);
  std::stable_sort(out.begin(), out.end(), [&](auto *a, auto *b) {
    return listing_rank(status_of(*a, statuses)) <
           listing_rank(status_of(*b, statuses));
  });
  return out;
}

} // namespace

std::string render_obligation_table(const ObligationSet &obligations,
                                    const StatusMap &statuses) {
  std::size_t counts[3] = {0, 0, 0};
  for (const auto &ob : obligations.items)
    ++counts[listing_rank(status_of(ob, statuses))];
  std::ostringstream out;
  out << "obligations: " << counts[0] << " open, " << counts[1]
      << " manually discharged, " << counts[2] << " auto-discharged\n";
  for (const auto *ob : listing_order(obligations, statuses)) {
    out << "  " << short_status(status_of(*ob, statuses)) << "  " << ob->id
        << "  " << to_string(ob->kind) << "  " << describe_subject(*ob);
    if (ob->kind == ObligationKind::DeclareSc)
      out << "  no safety constraints declared";
    else
      out << "  required " << ob->required.to_string();
    if (!ob->missing.empty())
      out << "  missing " << ob->missing.to_string();
    if (!ob->available.removed.empty())
      out << "  broken-by-disruptive " << ob->available.removed.to_string();
    out << "\n";
  }
  return out.str();
}

std::string render_check_text(const Analysis &analysis, const VerdictTree &tree,
                              const StatusMap &statuses) {
  std::ostringstream out;
  out << "crate: " << tree.crate.describe() << "\n";
  out << "mode: " << to_string(tree.mode) << "\n";
  for (const auto *mod : analysis.model.modules()) {
    out << "module " << mod->path << ": " << tree.modules.at(mod->path).describe()
        << "\n";
    std::vector<const StructDecl *> structs;
    for (const auto &s : mod->structs)
      structs.push_back(&s);
    std::sort(structs.begin(), structs.end(),
              [](auto *a, auto *b) { return a->name < b->name; });
    for (const auto *s : structs) {
      out << "  struct " << s->name << (s->is_public() ? "" : " (private)")
          << ": " << tree.structs.at(s->name).describe() << "\n";
      for (const auto *member : analysis.model.members_of(s->name))
        out << "    fn " << member->path << ": "
            << tree.functions.at(member->path).describe() << "\n";
    }
    std::vector<const FunctionDecl *> free_fns;
    for (const auto &f : mod->functions)
      if (!f.owner)
        free_fns.push_back(&f);
    std::sort(free_fns.begin(), free_fns.end(),
              [](auto *a, auto *b) { return a->path < b->path; });
    for (const auto *f : free_fns)
      out << "  fn " << f->path << (f->is_public() ? "" : " (private)") << ": "
          << tree.functions.at(f->path).describe() << "\n";
  }
  out << render_obligation_table(analysis.obligations, statuses);
  return out.str();
}

Json obligations_json(const ObligationSet &obligations,
                      const StatusMap &statuses) {
  Json out = Json::array();
  for (const auto &ob : obligations.items)
    out.push_back(to_json(ob, status_of(ob, statuses)));
  return out;
}

Json render_check_json(const Analysis &analysis, const VerdictTree &tree,
                       const StatusMap &statuses) {
  return {{"crate_name", analysis.model.name()},
          {"fingerprint", analysis.obligations.model_fingerprint},
          {"verdict", to_json(tree)},
          {"obligations", obligations_json(analysis.obligations, statuses)}};
}

} // namespace upg
