#include "upg/audit.hpp"
#include "upg/json_io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <map>

namespace upg {

const char *to_string(JudgmentVerdict verdict) {
  return verdict == JudgmentVerdict::Reopened ? "reopened" : "discharged";
}

std::string utc_now() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

static bool blank(const std::string &s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

AuditState mark(const AuditState &state, const ObligationSet &obligations,
                const std::string &obligation_id, JudgmentVerdict verdict,
                const std::string &justification, const std::string &author,
                const Clock &clock) {
  if (state.model_fingerprint != obligations.model_fingerprint)
    throw AuditError(AuditError::Code::StaleFingerprint,
                     "audit state belongs to a different model");
  const Obligation *ob = obligations.find(obligation_id);
  if (!ob)
    throw AuditError(AuditError::Code::UnknownObligation,
                     "unknown obligation '" + obligation_id + "'");
  if (blank(justification))
    throw AuditError(AuditError::Code::EmptyJustification,
                     "justification must not be empty");
  if (ob->status == Status::AutoDischarged)
    throw AuditError(AuditError::Code::AutoDischarged,
                     "obligation '" + obligation_id +
                         "' is discharged automatically");
  AuditState next = state;
  next.judgments.push_back({obligation_id, verdict, justification, author,
                            clock(), state.model_fingerprint});
  return next;
}

EffectiveStatuses effective_statuses(const ObligationSet &obligations,
                                     const AuditState &state) {
  EffectiveStatuses out;
  out.statuses = initial_statuses(obligations);
  std::map<std::string, const Judgment *> last_current;
  std::map<std::string, const Judgment *> last_any;
  for (const auto &j : state.judgments) {
    if (!obligations.find(j.obligation_id))
      continue;
    last_any[j.obligation_id] = &j;
    if (j.model_fingerprint == obligations.model_fingerprint)
      last_current[j.obligation_id] = &j;
  }
  for (const auto &[id, j] : last_current) {
    Status &st = out.statuses[id];
    if (st == Status::AutoDischarged)
      continue;
    st = j->verdict == JudgmentVerdict::Discharged ? Status::ManuallyDischarged
                                                   : Status::Open;
  }
  for (const auto &[id, j] : last_any) {
    if (j->model_fingerprint == obligations.model_fingerprint ||
        j->verdict != JudgmentVerdict::Discharged ||
        out.statuses[id] == Status::AutoDischarged)
      continue;
    if (last_current.count(id))
      continue;
    out.stale.push_back(id);
    Diagnostic d;
    d.severity = Severity::Warn;
    d.message = "stale discharge of obligation " + id +
                " (made against a different model) is treated as open";
    d.subject = id;
    out.diagnostics.push_back(std::move(d));
  }
  return out;
}

std::string serialize_judgment(const Judgment &j) {
  Json line{{"id", j.obligation_id},
            {"verdict", to_string(j.verdict)},
            {"justification", j.justification},
            {"author", j.author},
            {"ts", j.timestamp},
            {"model", j.model_fingerprint}};
  return line.dump();
}

AuditLoad load_audit_file(const std::string &path,
                          const std::string &fingerprint,
                          const ObligationSet &obligations) {
  AuditLoad out;
  out.state.model_fingerprint = fingerprint;
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return out;
  auto warn = [&](int line_no, std::string message) {
    Diagnostic d;
    d.severity = Severity::Warn;
    d.message = std::move(message);
    d.subject = path;
    d.pos = SourcePos{line_no, 1};
    out.diagnostics.push_back(std::move(d));
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line))
      continue;
    Json j = Json::parse(line, nullptr, false);
    auto str = [&](const char *key) -> const std::string * {
      if (!j.is_object() || !j.contains(key) || !j[key].is_string())
        return nullptr;
      return j[key].get_ptr<const std::string *>();
    };
    const std::string *verdict = str("verdict");
    if (j.is_discarded() || !str("id") || !verdict || !str("justification") ||
        !str("author") || !str("ts") ||
        (*verdict != "discharged" && *verdict != "reopened")) {
      warn(line_no, "malformed judgment ignored");
      continue;
    }
    Judgment judgment;
    judgment.obligation_id = *str("id");
    judgment.verdict = *verdict == "reopened" ? JudgmentVerdict::Reopened
                                              : JudgmentVerdict::Discharged;
    judgment.justification = *str("justification");
    judgment.author = *str("author");
    judgment.timestamp = *str("ts");
    if (const std::string *model = str("model"))
      judgment.model_fingerprint = *model;
    bool current = judgment.model_fingerprint == fingerprint;
    if (current && !obligations.find(judgment.obligation_id)) {
      warn(line_no, "judgment names unknown obligation '" +
                        judgment.obligation_id + "'");
      continue;
    }
    out.state.judgments.push_back(std::move(judgment));
  }
  return out;
}

void append_judgment(const std::string &path, const Judgment &judgment) {
  std::string line = serialize_judgment(judgment) + "\n";
  std::FILE *file = std::fopen(path.c_str(), "ab");
  if (!file)
    throw AuditError(AuditError::Code::Io, "cannot open audit file '" + path +
                                               "': " + std::strerror(errno));
  bool ok = std::fwrite(line.data(), 1, line.size(), file) == line.size() &&
            std::fflush(file) == 0 && ::fsync(fileno(file)) == 0;
  int err = errno;
  std::fclose(file);
  if (!ok)
    throw AuditError(AuditError::Code::Io, "cannot write audit file '" + path +
                                               "': " + std::strerror(err));
}

} // namespace upg
