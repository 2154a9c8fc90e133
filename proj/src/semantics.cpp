#include "upg/semantics.hpp"
#include "upg/constraints.hpp"

#include <limits>

namespace upg {

std::variant<AbstractState, UbReport>
exec_function(const FunctionDecl &f, const AbstractState &state,
              const CrateModel &model) {
  FactSet live = state.atoms.united(f.establishes).united(f.sc);
  for (const auto &call : f.calls) {
    const FunctionDecl *callee = model.find_function(call.callee);
    if (!callee || !callee->is_unsafe())
      continue;
    FactSet missing = callee->sc.minus(live.united(call.hinted_atoms()));
    if (!missing.empty()) {
      UbReport report;
      report.failing_step = f.path;
      report.failing_callee = callee->path;
      report.missing = std::move(missing);
      return report;
    }
  }
  return AbstractState{live.minus(bs_of_method(f))};
}

std::optional<UbReport> oracle_check_function(const FunctionDecl &f,
                                              const CrateModel &model) {
  Trace trace{{f.path}, f.sc};
  auto result = exec_function(f, AbstractState{f.sc}, model);
  if (auto *ub = std::get_if<UbReport>(&result)) {
    ub->trace = std::move(trace);
    return std::move(*ub);
  }
  return std::nullopt;
}

TraceCapExceeded::TraceCapExceeded(Path struct_path, std::uint64_t needed,
                                   std::uint64_t cap)
    : std::runtime_error("trace cap exceeded for struct " + struct_path +
                         ": " + std::to_string(needed) + " traces per "
                         "constructor, cap " + std::to_string(cap)),
      struct_path_(std::move(struct_path)), needed_(needed) {}

namespace {

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    out *= base;
  }
  return out;
}

std::optional<UbReport> run_trace(const std::vector<const FunctionDecl *> &steps,
                                  const CrateModel &model) {
  Trace trace;
  for (const auto *step : steps) {
    trace.steps.push_back(step->path);
    trace.context_assumptions = trace.context_assumptions.united(step->sc);
  }
  AbstractState state{trace.context_assumptions};
  for (const auto *step : steps) {
    auto result = exec_function(*step, state, model);
    if (auto *ub = std::get_if<UbReport>(&result)) {
      ub->trace = std::move(trace);
      return std::move(*ub);
    }
    state = std::get<AbstractState>(std::move(result));
  }
  return std::nullopt;
}

} // namespace

StructCheck oracle_check_struct(const StructGroup &group, int k,
                                const CrateModel &model, std::uint64_t cap) {
  if (k < 1)
    throw std::invalid_argument("oracle bound must be at least 1");
  StructCheck out;

  auto resolve = [&](const Path &p) { return model.find_function(p); };
  std::vector<const FunctionDecl *> ctors, methods;
  for (const auto &p : group.constructors)
    ctors.push_back(resolve(p));
  for (const auto &p : group.dynamic_methods)
    methods.push_back(resolve(p));
  const FunctionDecl *dtor = group.destructor ? resolve(*group.destructor)
                                              : nullptr;

  bool any_unsafe_calls = false;
  for (const auto &list : {ctors, methods})
    for (const auto *f : list)
      any_unsafe_calls |= !unsafe_callees(model, *f).empty();
  if (dtor)
    any_unsafe_calls |= !unsafe_callees(model, *dtor).empty();
  if (!any_unsafe_calls || ctors.empty())
    return out;

  std::uint64_t width = methods.size() + (dtor ? 1 : 0);
  std::uint64_t needed = saturating_pow(width, k);
  if (needed > cap)
    throw TraceCapExceeded(group.struct_path, needed, cap);

  std::vector<const FunctionDecl *> steps;
  for (const auto *ctor : ctors) {
    for (int len = 0; len <= k; ++len) {
      if (len > 0 && methods.empty())
        break;
      std::vector<std::size_t> digits(len, 0);
      for (;;) {
        steps.assign(1, ctor);
        for (std::size_t d : digits)
          steps.push_back(methods[d]);
        ++out.traces;
        if (auto ub = run_trace(steps, model)) {
          out.witness = std::move(ub);
          return out;
        }
        if (dtor) {
          steps.push_back(dtor);
          ++out.traces;
          if (auto ub = run_trace(steps, model)) {
            out.witness = std::move(ub);
            return out;
          }
        }
        // Odometer increment: last position fastest, giving lexicographic
        // order within a length.
        int pos = len - 1;
        while (pos >= 0 && ++digits[pos] == methods.size())
          digits[pos--] = 0;
        if (pos < 0)
          break;
      }
    }
  }
  return out;
}

OracleReport run_oracle(const CrateModel &model, int k, std::uint64_t cap) {
  OracleReport report;
  for (const auto *f : model.functions()) {
    FunctionKind kind = f->kind();
    if (kind != FunctionKind::Constructor && kind != FunctionKind::StaticFn)
      continue;
    ++report.functions_checked;
    if (auto ub = oracle_check_function(*f, model))
      report.witnesses.push_back(std::move(*ub));
  }
  for (const auto *s : model.structs()) {
    ++report.structs_checked;
    StructCheck check =
        oracle_check_struct(make_struct_group(model, s->name), k, model, cap);
    report.traces += check.traces;
    if (check.witness)
      report.witnesses.push_back(std::move(*check.witness));
  }
  return report;
}

Json to_json(const UbReport &r) {
  return {{"trace",
           {{"steps", r.trace.steps},
            {"context_assumptions", to_json(r.trace.context_assumptions)}}},
          {"failing_step", r.failing_step},
          {"failing_callee", r.failing_callee},
          {"missing", to_json(r.missing)}};
}

Json to_json(const OracleReport &report) {
  Json witnesses = Json::array();
  for (const auto &w : report.witnesses)
    witnesses.push_back(to_json(w));
  return {{"checked",
           {{"functions", report.functions_checked},
            {"structs", report.structs_checked},
            {"traces", report.traces}}},
          {"ub_witnesses", witnesses}};
}

} // namespace upg
