//===- server.hpp - HTTP audit API ----------------------------------------===//
//
//   GET  /api/model
//   GET  /api/upg
//   GET  /api/subgraphs
//   GET  /api/obligations
//   GET  /api/verdict?mode=strong|weak
//   POST /api/judgments   {id, verdict, justification, author}
//
// The service is the single writer of its audit file. A judgment is flushed
// to the file before the request is acknowledged.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/audit.hpp"
#include "upg/report.hpp"

#include <mutex>
#include <string>

namespace httplib {
class Server;
}

namespace upg {

struct HttpResponse {
  int status = 200;
  Json body;
};

class AuditService {
public:
  AuditService(Analysis analysis, std::string audit_path, AuditState state,
               Clock clock = utc_now);

  HttpResponse get_model() const;
  HttpResponse get_upg() const;
  HttpResponse get_subgraphs() const;
  HttpResponse get_obligations() const;
  HttpResponse get_verdict(const std::string &mode) const;
  HttpResponse post_judgment(const std::string &body);

  /// Registers the API routes on `server`.
  void mount(httplib::Server &server);

private:
  Analysis analysis_;
  std::string audit_path_;
  Clock clock_;
  mutable std::mutex mu_;
  AuditState state_;
};

} // namespace upg
