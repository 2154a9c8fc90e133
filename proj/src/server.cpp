#include "upg/server.hpp"

#include <httplib.h>

namespace upg {

AuditService::AuditService(Analysis analysis, std::string audit_path,
                           AuditState state, Clock clock)
    : analysis_(std::move(analysis)), audit_path_(std::move(audit_path)),
      clock_(std::move(clock)), state_(std::move(state)) {
  // Judgments carry their own fingerprint; the state tracks the served model.
  state_.model_fingerprint = analysis_.obligations.model_fingerprint;
}

HttpResponse AuditService::get_model() const {
  return {200, to_json(analysis_.model)};
}

HttpResponse AuditService::get_upg() const {
  return {200, to_json(analysis_.upg)};
}

HttpResponse AuditService::get_subgraphs() const {
  return {200, to_json(analysis_.subgraphs)};
}

HttpResponse AuditService::get_obligations() const {
  std::lock_guard lock(mu_);
  EffectiveStatuses eff = effective_statuses(analysis_.obligations, state_);
  return {200,
          {{"obligations", obligations_json(analysis_.obligations, eff.statuses)},
           {"stale", eff.stale}}};
}

HttpResponse AuditService::get_verdict(const std::string &mode) const {
  Mode m;
  if (mode.empty() || mode == "strong")
    m = Mode::Strong;
  else if (mode == "weak")
    m = Mode::Weak;
  else
    return {400, {{"error", "mode must be 'strong' or 'weak'"}}};
  std::lock_guard lock(mu_);
  EffectiveStatuses eff = effective_statuses(analysis_.obligations, state_);
  return {200, to_json(crate_verdict(analysis_.model, m, analysis_.obligations,
                                     eff.statuses))};
}

HttpResponse AuditService::post_judgment(const std::string &body) {
  Json req = Json::parse(body, nullptr, false);
  auto field = [&](const char *key) -> std::optional<std::string> {
    if (!req.is_object() || !req.contains(key) || !req[key].is_string())
      return std::nullopt;
    return req[key].get<std::string>();
  };
  auto id = field("id");
  auto verdict = field("verdict");
  auto justification = field("justification");
  if (req.is_discarded() || !id || !verdict || !justification)
    return {400, {{"error", "body must carry string fields id, verdict, "
                            "justification and author"}}};
  if (*verdict != "discharged" && *verdict != "reopened")
    return {400, {{"error", "verdict must be 'discharged' or 'reopened'"}}};
  std::string author = field("author").value_or("");

  std::lock_guard lock(mu_);
  AuditState next;
  try {
    next = mark(state_, analysis_.obligations, *id,
                *verdict == "reopened" ? JudgmentVerdict::Reopened
                                       : JudgmentVerdict::Discharged,
                *justification, author, clock_);
    append_judgment(audit_path_, next.judgments.back());
  } catch (const AuditError &err) {
    int status = 500;
    switch (err.code()) {
    case AuditError::Code::UnknownObligation:
      status = 404;
      break;
    case AuditError::Code::EmptyJustification:
      status = 400;
      break;
    case AuditError::Code::StaleFingerprint:
    case AuditError::Code::AutoDischarged:
      status = 409;
      break;
    case AuditError::Code::Io:
      status = 500;
      break;
    }
    return {status, {{"error", err.what()}}};
  }
  state_ = std::move(next);
  const Judgment &j = state_.judgments.back();
  EffectiveStatuses eff = effective_statuses(analysis_.obligations, state_);
  const Obligation *ob = analysis_.obligations.find(*id);
  return {201,
          {{"judgment", Json::parse(serialize_judgment(j))},
           {"obligation", to_json(*ob, eff.statuses.at(*id))}}};
}

void AuditService::mount(httplib::Server &server) {
  auto reply = [](httplib::Response &res, const HttpResponse &r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Get("/api/model", [this, reply](const httplib::Request &,
                                         httplib::Response &res) {
    reply(res, get_model());
  });
  server.Get("/api/upg", [this, reply](const httplib::Request &,
                                       httplib::Response &res) {
    reply(res, get_upg());
  });
  server.Get("/api/subgraphs", [this, reply](const httplib::Request &,
                                             httplib::Response &res) {
    reply(res, get_subgraphs());
  });
  server.Get("/api/obligations", [this, reply](const httplib::Request &,
                                               httplib::Response &res) {
    reply(res, get_obligations());
  });
  server.Get("/api/verdict", [this, reply](const httplib::Request &req,
                                           httplib::Response &res) {
    reply(res, get_verdict(req.get_param_value("mode")));
  });
  server.Post("/api/judgments", [this, reply](const httplib::Request &req,
                                              httplib::Response &res) {
    reply(res, post_judgment(req.body));
  });
  server.Options(R"(/api/.*)", [](const httplib::Request &,
                                  httplib::Response &res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

} // namespace upg
