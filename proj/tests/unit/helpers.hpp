#pragma once

#include "upg/loader.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline upg::CrateModel must_parse(std::string_view text) {
  upg::LoadResult r = upg::parse_facts(text);
  for (const auto &d : r.diagnostics)
    if (d.severity == upg::Severity::Error)
      FAIL_CHECK(upg::format_diagnostic(d, "<input>"));
  REQUIRE(r.ok());
  return *r.model;
}

inline std::string fixture(const std::string &name) {
  return std::string(UPG_FIXTURE_DIR) + "/" + name;
}

inline std::string golden(const std::string &name) {
  return std::string(UPG_GOLDEN_DIR) + "/" + name;
}

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline upg::CrateModel must_load(const std::string &fixture_name) {
  return must_parse(slurp(fixture(fixture_name)));
}

inline bool has_message(const std::vector<upg::Diagnostic> &diags,
                        std::string_view needle) {
  return std::any_of(diags.begin(), diags.end(), [&](const auto &d) {
    return d.message.find(needle) != std::string::npos;
  });
}

} // namespace testing
