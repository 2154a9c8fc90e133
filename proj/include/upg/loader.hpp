//===- loader.hpp - Facts-language and JSON front ends --------------------===//
//
// Facts language:
//
//   crate      := "crate" IDENT "{" item* "}"
//   item       := module | structdecl | fndecl | externfn | staticmut
//   module     := "module" IDENT "{" item* "}"
//   structdecl := "struct" "pub"? IDENT "{" structline* "}"
//   structline := "field" IDENT ":" PATH ";" | "invariants" atomset ";"
//               | "literal_constructor" ";" | "field_access" ";"
//   fndecl     := "fn" "unsafe"? "pub"? IDENT recv? roleclause? clause* ";"
//   recv       := "(" ("&self" | "&mut self")? ")"
//   roleclause := ("constructor" | "destructor" | "method") "of" IDENT
//   clause     := "sc" atomset | "establishes" atomset | "breaks" atomset
//               | "calls" PATH ("where" "{" (IDENT ":" STRING ","?)* "}")?
//   externfn   := "extern" "fn" "unsafe"? PATH "()"? "sc" atomset ";"
//   staticmut  := "static" "mut" IDENT "sc" atomset ";"
//   atomset    := "[" (IDENT ","?)* "]"
//
// `#` starts a line comment. A function with a receiver and no role clause
// belongs to the only struct of its module. Callees resolve against the
// caller's struct, then each enclosing module from the innermost outwards,
// then as an absolute path. `static mut X` declares an external unsafe
// accessor `<module>::X` carrying the variable's constraints.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/diagnostics.hpp"
#include "upg/model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace upg {

struct LoadResult {
  /// Set iff no diagnostic has error severity.
  std::optional<CrateModel> model;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

LoadResult parse_facts(std::string_view text);
LoadResult load_json(std::string_view bytes);

enum class InputFormat { Facts, Json };

/// `.json` selects JSON, anything else the facts language.
InputFormat format_for_path(const std::string &path);

/// Reads and loads a file. I/O failures become an error diagnostic.
LoadResult load_file(const std::string &path,
                     std::optional<InputFormat> format = std::nullopt);

} // namespace upg
