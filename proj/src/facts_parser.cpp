//===- facts_parser.cpp - Facts-language front end ------------------------===//
//
// Parsing runs in two passes: the recursive-descent parser builds a raw item
// tree with source positions, then the builder assigns owners and paths,
// resolves callees and hands the model to the validator. Validator loci are
// mapped back to source positions through the table the builder records.
//
//===----------------------------------------------------------------------===//
#include "upg/loader.hpp"
#include "upg/validate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace upg {
namespace {

enum class Tok { Ident, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(SourcePos p, const std::string &msg)
      : std::runtime_error(msg), pos(p) {}
  SourcePos pos;
};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80)
      extra = 0;
    else if ((c >> 5) == 0x6)
      extra = 1;
    else if ((c >> 4) == 0xE)
      extra = 2;
    else if ((c >> 3) == 0x1E)
      extra = 3;
    else
      return false;
    if (extra > 0 && i + extra >= s.size())
      return false;
    for (std::size_t k = 1; k <= extra; ++k)
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2)
        return false;
    i += extra + 1;
  }
  return true;
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                             peek() == '_'))
          t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::String;
        t.text = string_literal();
      } else if (c == ':' && peek(1) == ':') {
        t.kind = Tok::Punct;
        t.text = "::";
        advance();
        advance();
      } else if (std::string_view("{}[]();,:&").find(c) !=
                 std::string_view::npos) {
        t.kind = Tok::Punct;
        t.text = std::string(1, advance());
      } else {
        throw SyntaxError(t.pos, std::string("unexpected character '") + c +
                                     "'");
      }
      out.push_back(std::move(t));
    }
  }

private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string string_literal() {
    SourcePos start{line_, col_};
    advance();
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n')
        throw SyntaxError(start, "unterminated string literal");
      char c = advance();
      if (c == '"')
        break;
      if (c == '\\') {
        if (at_end())
          throw SyntaxError(start, "unterminated string literal");
        char e = advance();
        switch (e) {
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        case '"':
        case '\\':
          out += e;
          break;
        default:
          throw SyntaxError({line_, col_ - 1},
                            std::string("unknown escape '\\") + e + "'");
        }
        continue;
      }
      out += c;
    }
    if (!valid_utf8(out))
      throw SyntaxError(start, "string literal is not valid UTF-8");
    return out;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct RawCall {
  std::string path;
  std::map<std::string, std::string> hints;
  SourcePos pos;
};

enum class RawRole { None, Constructor, Destructor, Method };

struct RawFn {
  std::string name;
  bool is_unsafe = false;
  bool is_pub = false;
  Receiver receiver = Receiver::None;
  RawRole role = RawRole::None;
  std::string role_struct;
  SourcePos role_pos;
  FactSet sc, establishes, breaks;
  std::vector<RawCall> calls;
  SourcePos pos;
};

struct RawStruct {
  std::string name;
  bool is_pub = false;
  std::vector<FieldDecl> fields;
  FactSet invariants;
  bool literal_constructor = false;
  bool field_access = false;
  SourcePos pos;
};

struct RawExtern {
  std::string path;
  bool is_unsafe = false;
  bool static_mut = false;
  FactSet sc;
  SourcePos pos;
};

struct RawModule {
  std::string name;
  SourcePos pos;
  std::vector<RawFn> fns;
  std::vector<RawStruct> structs;
  std::vector<RawExtern> externs;
  std::vector<RawModule> submodules;
};

class Parser {
public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  RawModule crate() {
    expect_keyword("crate");
    RawModule root;
    root.pos = cur().pos;
    root.name = ident("crate name");
    expect("{");
    items(root);
    expect("}");
    if (cur().kind != Tok::End)
      fail("expected end of input after crate");
    return root;
  }

private:
  const Token &cur() const { return toks_[i_]; }
  const Token &ahead(std::size_t n) const {
    return toks_[std::min(i_ + n, toks_.size() - 1)];
  }
  [[noreturn]] void fail(const std::string &msg) const {
    std::string got = cur().kind == Tok::End ? "end of input"
                                             : "'" + cur().text + "'";
    throw SyntaxError(cur().pos, msg + ", found " + got);
  }
  bool is_punct(std::string_view p) const {
    return cur().kind == Tok::Punct && cur().text == p;
  }
  bool is_keyword(std::string_view k) const {
    return cur().kind == Tok::Ident && cur().text == k;
  }
  void expect(std::string_view p) {
    if (!is_punct(p))
      fail("expected '" + std::string(p) + "'");
    ++i_;
  }
  void expect_keyword(std::string_view k) {
    if (!is_keyword(k))
      fail("expected '" + std::string(k) + "'");
    ++i_;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p))
      return false;
    ++i_;
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(k))
      return false;
    ++i_;
    return true;
  }
  std::string ident(const char *what) {
    if (cur().kind != Tok::Ident)
      fail(std::string("expected ") + what);
    return toks_[i_++].text;
  }
  std::string path() {
    std::string out = ident("path");
    while (accept("::"))
      out += "::" + ident("path segment");
    return out;
  }

  FactSet atomset() {
    expect("[");
    FactSet out;
    while (!accept("]")) {
      out.insert(ident("atom name"));
      accept(",");
    }
    return out;
  }

  void items(RawModule &mod) {
    while (!is_punct("}")) {
      if (cur().kind != Tok::Ident)
        fail("expected item");
      const std::string &kw = cur().text;
      if (kw == "module")
        mod.submodules.push_back(module());
      else if (kw == "struct")
        mod.structs.push_back(structdecl());
      else if (kw == "fn")
        mod.fns.push_back(fndecl());
      else if (kw == "extern")
        mod.externs.push_back(externfn());
      else if (kw == "static")
        mod.externs.push_back(staticmut());
      else
        fail("expected 'module', 'struct', 'fn', 'extern' or 'static'");
    }
  }

  RawModule module() {
    expect_keyword("module");
    RawModule mod;
    mod.pos = cur().pos;
    mod.name = ident("module name");
    expect("{");
    items(mod);
    expect("}");
    return mod;
  }

  RawStruct structdecl() {
    expect_keyword("struct");
    RawStruct s;
    s.is_pub = accept_keyword("pub");
    s.pos = cur().pos;
    s.name = ident("struct name");
    expect("{");
    while (!accept("}")) {
      if (accept_keyword("field")) {
        FieldDecl field;
        field.name = ident("field name");
        expect(":");
        field.type = path();
        expect(";");
        s.fields.push_back(std::move(field));
      } else if (accept_keyword("invariants")) {
        s.invariants = s.invariants.united(atomset());
        expect(";");
      } else if (accept_keyword("literal_constructor")) {
        s.literal_constructor = true;
        expect(";");
      } else if (accept_keyword("field_access")) {
        s.field_access = true;
        expect(";");
      } else {
        fail("expected 'field', 'invariants', 'literal_constructor' or "
             "'field_access'");
      }
    }
    return s;
  }

  RawFn fndecl() {
    expect_keyword("fn");
    RawFn f;
    f.is_unsafe = accept_keyword("unsafe");
    f.is_pub = accept_keyword("pub");
    f.pos = cur().pos;
    f.name = ident("function name");
    if (accept("(")) {
      if (accept("&")) {
        if (accept_keyword("mut"))
          f.receiver = Receiver::MutSelf;
        else
          f.receiver = Receiver::RefSelf;
        expect_keyword("self");
      }
      expect(")");
    }
    if (cur().kind == Tok::Ident && ahead(1).kind == Tok::Ident &&
        ahead(1).text == "of") {
      const std::string &kw = cur().text;
      if (kw == "constructor")
        f.role = RawRole::Constructor;
      else if (kw == "destructor")
        f.role = RawRole::Destructor;
      else if (kw == "method")
        f.role = RawRole::Method;
      if (f.role != RawRole::None) {
        i_ += 2;
        f.role_pos = cur().pos;
        f.role_struct = ident("struct name");
      }
    }
    while (!accept(";")) {
      if (accept_keyword("sc")) {
        f.sc = f.sc.united(atomset());
      } else if (accept_keyword("establishes")) {
        f.establishes = f.establishes.united(atomset());
      } else if (accept_keyword("breaks")) {
        f.breaks = f.breaks.united(atomset());
      } else if (is_keyword("calls")) {
        ++i_;
        RawCall call;
        call.pos = cur().pos;
        call.path = path();
        if (accept_keyword("where")) {
          expect("{");
          while (!accept("}")) {
            SourcePos hint_pos = cur().pos;
            std::string atom = ident("atom name");
            expect(":");
            if (cur().kind != Tok::String)
              fail("expected string justification");
            std::string reason = toks_[i_++].text;
            if (!call.hints.emplace(atom, std::move(reason)).second)
              throw SyntaxError(hint_pos,
                                "duplicate discharge hint for '" + atom + "'");
            accept(",");
          }
        }
        f.calls.push_back(std::move(call));
      } else {
        fail("expected 'sc', 'establishes', 'breaks', 'calls' or ';'");
      }
    }
    return f;
  }

  RawExtern externfn() {
    expect_keyword("extern");
    expect_keyword("fn");
    RawExtern e;
    e.is_unsafe = accept_keyword("unsafe");
    e.pos = cur().pos;
    e.path = path();
    if (accept("("))
      expect(")");
    expect_keyword("sc");
    e.sc = atomset();
    expect(";");
    return e;
  }

  RawExtern staticmut() {
    expect_keyword("static");
    expect_keyword("mut");
    RawExtern e;
    e.is_unsafe = true;
    e.static_mut = true;
    e.pos = cur().pos;
    e.path = ident("static name");
    expect_keyword("sc");
    e.sc = atomset();
    expect(";");
    return e;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

/// Builds the model from the raw tree and records where every JSON-pointer
/// locus came from.
class Builder {
public:
  std::vector<Diagnostic> diags;
  std::map<std::string, SourcePos> positions;

  ModuleDecl build(const RawModule &root) {
    ModuleDecl out = assign_paths(root, root.name, "/root");
    resolve_calls(out, root, {});
    return out;
  }

private:
  void error(SourcePos pos, std::string msg, std::string subject) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = std::move(msg);
    d.subject = std::move(subject);
    d.pos = pos;
    diags.push_back(std::move(d));
  }

  ModuleDecl assign_paths(const RawModule &raw, const std::string &path,
                          const std::string &ptr) {
    ModuleDecl mod;
    mod.path = path;
    positions[ptr] = raw.pos;

    std::set<std::string> struct_names;
    for (std::size_t i = 0; i < raw.structs.size(); ++i) {
      const auto &rs = raw.structs[i];
      StructDecl s;
      s.name = path + "::" + rs.name;
      s.visibility = rs.is_pub ? Visibility::Public : Visibility::Private;
      s.fields = rs.fields;
      s.invariant_atoms = rs.invariants;
      s.literal_constructor = rs.literal_constructor;
      s.field_access = rs.field_access;
      struct_names.insert(rs.name);
      positions[ptr + "/structs/" + std::to_string(i)] = rs.pos;
      mod.structs.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < raw.fns.size(); ++i) {
      const auto &rf = raw.fns[i];
      std::string fptr = ptr + "/functions/" + std::to_string(i);
      FunctionDecl f;
      f.visibility = rf.is_pub ? Visibility::Public : Visibility::Private;
      f.unsafety = rf.is_unsafe ? Unsafety::Unsafe : Unsafety::Safe;
      f.receiver = rf.receiver;
      f.sc = rf.sc;
      f.establishes = rf.establishes;
      f.breaks = rf.breaks;
      if (rf.role == RawRole::Constructor)
        f.role = Role::Constructor;
      else if (rf.role == RawRole::Destructor)
        f.role = Role::Destructor;

      if (rf.role != RawRole::None) {
        if (struct_names.count(rf.role_struct))
          f.owner = path + "::" + rf.role_struct;
        else
          error(rf.role_pos,
                "unknown struct '" + rf.role_struct + "' in module " + path,
                path + "::" + rf.name);
      } else if (rf.receiver != Receiver::None) {
        if (struct_names.size() == 1)
          f.owner = path + "::" + *struct_names.begin();
        else
          error(rf.pos,
                struct_names.empty()
                    ? "method declared in a module without structs"
                    : "ambiguous owning struct; add 'method of <Struct>'",
                path + "::" + rf.name);
      }
      f.path = (f.owner ? *f.owner : path) + "::" + rf.name;
      positions[fptr] = rf.pos;
      for (std::size_t j = 0; j < rf.calls.size(); ++j) {
        CallSite call;
        call.callee = rf.calls[j].path;
        call.discharge_hints = rf.calls[j].hints;
        std::string cptr = fptr + "/calls/" + std::to_string(j);
        positions[cptr] = rf.calls[j].pos;
        for (const auto &[atom, reason] : call.discharge_hints)
          positions[cptr + "/discharge_hints/" + atom] = rf.calls[j].pos;
        f.calls.push_back(std::move(call));
      }
      declared_.insert(f.path);
      mod.functions.push_back(std::move(f));
    }

    for (std::size_t i = 0; i < raw.externs.size(); ++i) {
      const auto &re = raw.externs[i];
      FunctionDecl e;
      e.path = re.static_mut ? path + "::" + re.path : re.path;
      e.unsafety = re.is_unsafe ? Unsafety::Unsafe : Unsafety::Safe;
      e.visibility = Visibility::Public;
      e.sc = re.sc;
      e.external = true;
      positions[ptr + "/externs/" + std::to_string(i)] = re.pos;
      declared_.insert(e.path);
      mod.externs.push_back(std::move(e));
    }

    for (const auto &s : mod.structs) {
      const auto &rs = raw.structs[&s - mod.structs.data()];
      if (rs.literal_constructor)
        declared_.insert(s.name + "::" + std::string(kLiteralConstructorName));
      if (rs.field_access)
        declared_.insert(s.name + "::" + std::string(kFieldAccessName));
    }

    for (std::size_t i = 0; i < raw.submodules.size(); ++i) {
      const auto &sub = raw.submodules[i];
      mod.submodules.push_back(
          assign_paths(sub, path + "::" + sub.name,
                       ptr + "/submodules/" + std::to_string(i)));
    }
    return mod;
  }

  void resolve_calls(ModuleDecl &mod, const RawModule &raw,
                     std::vector<std::string> scopes) {
    scopes.insert(scopes.begin(), mod.path);
    for (auto &f : mod.functions) {
      for (auto &call : f.calls) {
        std::vector<std::string> candidates;
        if (f.owner)
          candidates.push_back(*f.owner + "::" + call.callee);
        for (const auto &scope : scopes)
          candidates.push_back(scope + "::" + call.callee);
        candidates.push_back(call.callee);
        for (const auto &candidate : candidates) {
          if (declared_.count(candidate)) {
            call.callee = candidate;
            break;
          }
        }
      }
    }
    for (std::size_t i = 0; i < mod.submodules.size(); ++i)
      resolve_calls(mod.submodules[i], raw.submodules[i], scopes);
  }

  std::set<std::string> declared_;
};

SourcePos position_for(const std::map<std::string, SourcePos> &positions,
                       std::string locus) {
  // Walk up the pointer until a recorded item is found.
  for (;;) {
    if (auto it = positions.find(locus); it != positions.end())
      return it->second;
    auto slash = locus.rfind('/');
    if (slash == std::string::npos || slash == 0)
      break;
    locus.resize(slash);
  }
  if (auto it = positions.find("/root"); it != positions.end())
    return it->second;
  return {1, 1};
}

} // namespace

LoadResult parse_facts(std::string_view text) {
  LoadResult result;
  RawModule raw;
  try {
    raw = Parser(Lexer(text).run()).crate();
  } catch (const SyntaxError &err) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = std::string("syntax error: ") + err.what();
    d.pos = err.pos;
    result.diagnostics.push_back(std::move(d));
    return result;
  }

  Builder builder;
  ModuleDecl root = builder.build(raw);
  CrateModel model(raw.name, std::move(root));

  std::vector<Diagnostic> diags = std::move(builder.diags);
  for (auto &located : validate_located(model)) {
    located.diag.pos = position_for(builder.positions, located.locus);
    located.diag.pointer = located.locus;
    diags.push_back(std::move(located.diag));
  }
  std::stable_sort(diags.begin(), diags.end(),
                   [](const Diagnostic &a, const Diagnostic &b) {
                     return std::pair(a.pos->line, a.pos->column) <
                            std::pair(b.pos->line, b.pos->column);
                   });
  result.diagnostics = std::move(diags);
  if (!has_errors(result.diagnostics))
    result.model = std::move(model);
  return result;
}

} // namespace upg
