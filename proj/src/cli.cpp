#include "upg/cli.hpp"
#include "upg/audit.hpp"
#include "upg/report.hpp"
#include "upg/server.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <ostream>

namespace upg {
namespace {

std::optional<CrateModel> load_or_report(const RunConfig &config,
                                         std::ostream &err) {
  LoadResult loaded = load_file(config.input, config.input_format);
  for (const auto &d : loaded.diagnostics)
    err << format_diagnostic(d, config.input) << "\n";
  return std::move(loaded.model);
}

struct AuditView {
  AuditState state;
  EffectiveStatuses effective;
};

AuditView load_audit(const RunConfig &config, const Analysis &analysis,
                     std::ostream &err) {
  AuditView view;
  view.state.model_fingerprint = analysis.obligations.model_fingerprint;
  if (!config.audit_path.empty()) {
    AuditLoad load = load_audit_file(config.audit_path,
                                     analysis.obligations.model_fingerprint,
                                     analysis.obligations);
    for (const auto &d : load.diagnostics)
      err << format_diagnostic(d, config.audit_path) << "\n";
    view.state = std::move(load.state);
  }
  view.effective = effective_statuses(analysis.obligations, view.state);
  for (const auto &d : view.effective.diagnostics)
    err << format_diagnostic(d, config.audit_path) << "\n";
  return view;
}

void report_generation_diagnostics(const Analysis &analysis,
                                   const RunConfig &config, std::ostream &err) {
  for (const auto &d : analysis.obligations.diagnostics)
    err << format_diagnostic(d, config.input) << "\n";
}

} // namespace

int cmd_check(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.format == OutputFormat::Dot) {
    err << "error: check supports --format text or json\n";
    return kExitError;
  }
  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  Analysis analysis = analyze(*model);
  report_generation_diagnostics(analysis, config, err);
  AuditView audit = load_audit(config, analysis, err);
  VerdictTree tree = crate_verdict(analysis.model, config.mode,
                                   analysis.obligations,
                                   audit.effective.statuses);
  if (config.format == OutputFormat::Json)
    out << render_check_json(analysis, tree, audit.effective.statuses).dump(2)
        << "\n";
  else
    out << render_check_text(analysis, tree, audit.effective.statuses);
  switch (tree.crate.state) {
  case Verdict::State::Sound:
    return kExitOk;
  case Verdict::State::Open:
    return kExitOpen;
  case Verdict::State::Invalid:
    return kExitError;
  }
  return kExitError;
}

int cmd_oracle(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.k < 1 || config.cap < 1) {
    err << "error: --k and --cap must be at least 1\n";
    return kExitError;
  }
  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  OracleReport report;
  try {
    report = run_oracle(*model, config.k, config.cap);
  } catch (const TraceCapExceeded &e) {
    err << "error: " << e.what() << "\n";
    out << Json{{"error", "trace cap exceeded"},
                {"struct", e.struct_path()},
                {"traces_per_constructor", e.needed()},
                {"cap", config.cap}}
               .dump(2)
        << "\n";
    return kExitCapExceeded;
  }
  if (config.format == OutputFormat::Text) {
    out << "checked " << report.functions_checked << " functions, "
        << report.structs_checked << " structs, " << report.traces
        << " traces (k=" << config.k << ")\n";
    for (const auto &w : report.witnesses) {
      out << "ub: ";
      for (std::size_t i = 0; i < w.trace.steps.size(); ++i)
        out << (i ? " ; " : "") << w.trace.steps[i];
      out << "  at " << w.failing_step << " -> " << w.failing_callee
          << "  missing " << w.missing.to_string() << "\n";
    }
  } else {
    out << to_json(report).dump(2) << "\n";
  }
  return report.witnesses.empty() ? kExitOk : kExitOpen;
}

int cmd_obligations(const RunConfig &config, std::ostream &out,
                    std::ostream &err) {
  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  Analysis analysis = analyze(*model);
  report_generation_diagnostics(analysis, config, err);
  AuditView audit = load_audit(config, analysis, err);
  if (config.format == OutputFormat::Json)
    out << obligations_json(analysis.obligations, audit.effective.statuses)
               .dump(2)
        << "\n";
  else
    out << render_obligation_table(analysis.obligations,
                                   audit.effective.statuses);
  return kExitOk;
}

int cmd_mark(const RunConfig &config, const MarkArgs &args, std::ostream &out,
             std::ostream &err) {
  if (config.audit_path.empty()) {
    err << "error: mark needs --audit or UPG_AUDIT_FILE\n";
    return kExitError;
  }
  JudgmentVerdict verdict;
  if (args.verdict == "discharged")
    verdict = JudgmentVerdict::Discharged;
  else if (args.verdict == "reopened")
    verdict = JudgmentVerdict::Reopened;
  else {
    err << "error: --verdict must be 'discharged' or 'reopened'\n";
    return kExitError;
  }
  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  Analysis analysis = analyze(*model);
  AuditView audit = load_audit(config, analysis, err);
  try {
    AuditState next = mark(audit.state, analysis.obligations, args.id, verdict,
                           args.justification, args.author);
    append_judgment(config.audit_path, next.judgments.back());
    EffectiveStatuses eff = effective_statuses(analysis.obligations, next);
    out << args.id << ": " << to_string(eff.statuses.at(args.id)) << "\n";
  } catch (const AuditError &e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

int cmd_export_dot(const RunConfig &config, std::ostream &out,
                   std::ostream &err) {
  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  Upg upg = build_upg(*model);
  if (config.format == OutputFormat::Json)
    out << Json{{"upg", to_json(upg)}, {"subgraphs", to_json(segment(upg))}}
               .dump(2)
        << "\n";
  else
    out << export_dot(upg);
  return kExitOk;
}

namespace {
httplib::Server *g_server = nullptr;
extern "C" void stop_server(int) {
  if (g_server)
    g_server->stop();
}
} // namespace

int cmd_serve(const RunConfig &config, std::ostream &out, std::ostream &err) {
  if (config.audit_path.empty()) {
    err << "error: serve needs --audit or UPG_AUDIT_FILE\n";
    return kExitError;
  }
  auto colon = config.addr.rfind(':');
  int port = 0;
  try {
    if (colon == std::string::npos)
      throw std::invalid_argument("no port");
    port = std::stoi(config.addr.substr(colon + 1));
  } catch (const std::exception &) {
    err << "error: --addr must be host:port\n";
    return kExitError;
  }
  std::string host = config.addr.substr(0, colon);

  auto model = load_or_report(config, err);
  if (!model)
    return kExitError;
  Analysis analysis = analyze(*model);
  report_generation_diagnostics(analysis, config, err);
  AuditView audit = load_audit(config, analysis, err);

  AuditService service(std::move(analysis), config.audit_path,
                       std::move(audit.state));
  httplib::Server server;
  // The library default adds SO_REUSEPORT, which lets a second instance
  // share the port instead of failing.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const char *>(&yes), sizeof(yes));
  });
  service.mount(server);
  if (!server.bind_to_port(host, port)) {
    err << "error: cannot listen on " << config.addr << "\n";
    return kExitError;
  }
  out << "serving on http://" << config.addr << "\n" << std::flush;
  g_server = &server;
  std::signal(SIGINT, stop_server);
  std::signal(SIGTERM, stop_server);
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

int run_cli(int argc, const char *const *argv, std::ostream &out,
            std::ostream &err) {
  CLI::App app{"Unsafety propagation graph auditor"};
  app.require_subcommand(1);

  RunConfig config;
  MarkArgs mark_args;
  std::string mode = "strong";
  std::string format;
  std::string input_format;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("input", config.input, "crate facts or JSON file")
        ->required();
    sub->add_option("--input-format", input_format,
                    "facts or json (default: by extension)")
        ->check(CLI::IsMember({"facts", "json"}));
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json", "dot"}));
  };
  auto add_audit = [&](CLI::App *sub) {
    sub->add_option("--audit", config.audit_path, "audit judgment file")
        ->envname("UPG_AUDIT_FILE");
  };
  auto add_mode = [&](CLI::App *sub) {
    sub->add_option("--mode", mode, "module soundness mode")
        ->check(CLI::IsMember({"strong", "weak"}));
  };

  auto *check = app.add_subcommand("check", "report verdicts and obligations");
  add_common(check);
  add_mode(check);
  add_audit(check);

  auto *oracle = app.add_subcommand("oracle", "run the abstract-execution oracle");
  add_common(oracle);
  oracle->add_option("--k", config.k, "method sequence bound");
  oracle->add_option("--cap", config.cap, "trace cap per constructor");

  auto *obligations = app.add_subcommand("obligations", "list obligations");
  add_common(obligations);
  add_audit(obligations);

  auto *mark_cmd = app.add_subcommand("mark", "record an audit judgment");
  add_common(mark_cmd);
  add_audit(mark_cmd);
  mark_cmd->add_option("--id", mark_args.id, "obligation id")->required();
  mark_cmd->add_option("--verdict", mark_args.verdict, "discharged or reopened")
      ->required();
  mark_cmd->add_option("--justification", mark_args.justification)->required();
  mark_cmd->add_option("--author", mark_args.author);

  auto *dot = app.add_subcommand("export-dot", "print the graph as DOT");
  add_common(dot);

  auto *serve = app.add_subcommand("serve", "serve the HTTP audit API");
  add_common(serve);
  add_mode(serve);
  add_audit(serve);
  serve->add_option("--addr", config.addr, "host:port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  config.mode = mode == "weak" ? Mode::Weak : Mode::Strong;
  if (format == "text")
    config.format = OutputFormat::Text;
  else if (format == "json")
    config.format = OutputFormat::Json;
  else if (format == "dot")
    config.format = OutputFormat::Dot;
  if (input_format == "facts")
    config.input_format = InputFormat::Facts;
  else if (input_format == "json")
    config.input_format = InputFormat::Json;

  if (*check)
    return cmd_check(config, out, err);
  if (*oracle)
    return cmd_oracle(config, out, err);
  if (*obligations)
    return cmd_obligations(config, out, err);
  if (*mark_cmd)
    return cmd_mark(config, mark_args, out, err);
  if (*dot)
    return cmd_export_dot(config, out, err);
  return cmd_serve(config, out, err);
}

} // namespace upg
