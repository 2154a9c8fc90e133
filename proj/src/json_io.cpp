#include "upg/json_io.hpp"
#include "upg/loader.hpp"
#include "upg/validate.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>

namespace upg {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char *hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

Json to_json(const FactSet &atoms) { return Json(atoms.names()); }

Json to_json(const FunctionDecl &f) {
  Json j;
  j["path"] = f.path;
  j["unsafety"] = to_string(f.unsafety);
  j["sc"] = to_json(f.sc);
  if (f.external)
    return j;
  j["visibility"] = to_string(f.visibility);
  j["receiver"] = to_string(f.receiver);
  j["role"] = to_string(f.role);
  if (f.owner)
    j["owner"] = *f.owner;
  j["establishes"] = to_json(f.establishes);
  j["breaks"] = to_json(f.breaks);
  Json calls = Json::array();
  for (const auto &call : f.calls) {
    Json c;
    c["callee"] = call.callee;
    c["discharge_hints"] = Json(call.discharge_hints);
    calls.push_back(std::move(c));
  }
  j["calls"] = std::move(calls);
  return j;
}

static Json to_json(const StructDecl &s) {
  Json j;
  j["name"] = s.name;
  j["visibility"] = to_string(s.visibility);
  Json fields = Json::array();
  for (const auto &field : s.fields)
    fields.push_back({{"name", field.name}, {"type", field.type}});
  j["fields"] = std::move(fields);
  j["invariant_atoms"] = to_json(s.invariant_atoms);
  j["literal_constructor"] = s.literal_constructor;
  j["field_access"] = s.field_access;
  return j;
}

Json to_json(const ModuleDecl &mod) {
  Json j;
  j["path"] = mod.path;
  j["functions"] = Json::array();
  for (const auto &f : mod.functions)
    j["functions"].push_back(to_json(f));
  j["structs"] = Json::array();
  for (const auto &s : mod.structs)
    j["structs"].push_back(to_json(s));
  j["submodules"] = Json::array();
  for (const auto &sub : mod.submodules)
    j["submodules"].push_back(to_json(sub));
  j["externs"] = Json::array();
  for (const auto &e : mod.externs)
    j["externs"].push_back(to_json(e));
  return j;
}

Json to_json(const CrateModel &model) {
  return Json{{"name", model.name()}, {"root", to_json(model.root())}};
}

std::string canonical_json(const CrateModel &model) {
  return to_json(model).dump();
}

std::string fingerprint(const CrateModel &model) {
  return sha256_hex(canonical_json(model));
}

namespace {

/// Reads the JSON document into a model, collecting schema violations.
class SchemaReader {
public:
  std::vector<Diagnostic> diags;

  std::optional<CrateModel> read(const Json &doc) {
    if (!object(doc, "", {"name", "root"}, {}))
      return std::nullopt;
    std::string name = string_at(doc, "", "name");
    ModuleDecl root;
    if (doc.contains("root"))
      root = module(doc["root"], "/root");
    if (!diags.empty())
      return std::nullopt;
    return CrateModel(std::move(name), std::move(root));
  }

private:
  void schema_error(const std::string &pointer, std::string message) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = "schema violation: " + std::move(message);
    d.pointer = pointer.empty() ? "/" : pointer;
    diags.push_back(std::move(d));
  }

  bool object(const Json &j, const std::string &ptr,
              std::initializer_list<const char *> required,
              std::initializer_list<const char *> optional) {
    if (!j.is_object()) {
      schema_error(ptr, "expected an object");
      return false;
    }
    std::set<std::string> allowed;
    for (const char *key : required) {
      allowed.insert(key);
      if (!j.contains(key))
        schema_error(ptr + "/" + key, std::string("missing key '") + key + "'");
    }
    for (const char *key : optional)
      allowed.insert(key);
    for (const auto &[key, value] : j.items())
      if (!allowed.count(key))
        schema_error(ptr + "/" + key, "unexpected key '" + key + "'");
    return true;
  }

  std::string string_at(const Json &j, const std::string &ptr,
                        const char *key) {
    if (!j.contains(key))
      return {};
    const Json &v = j[key];
    if (!v.is_string()) {
      schema_error(ptr + "/" + key, "expected a string");
      return {};
    }
    return v.get<std::string>();
  }

  bool bool_at(const Json &j, const std::string &ptr, const char *key) {
    if (!j.contains(key))
      return false;
    const Json &v = j[key];
    if (!v.is_boolean()) {
      schema_error(ptr + "/" + key, "expected a boolean");
      return false;
    }
    return v.get<bool>();
  }

  const Json *array_at(const Json &j, const std::string &ptr,
                       const char *key) {
    if (!j.contains(key))
      return nullptr;
    const Json &v = j[key];
    if (!v.is_array()) {
      schema_error(ptr + "/" + key, "expected an array");
      return nullptr;
    }
    return &v;
  }

  FactSet atoms_at(const Json &j, const std::string &ptr, const char *key) {
    FactSet out;
    const Json *arr = array_at(j, ptr, key);
    if (!arr)
      return out;
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const Json &v = (*arr)[i];
      if (!v.is_string())
        schema_error(ptr + "/" + key + "/" + std::to_string(i),
                     "expected an atom name");
      else
        out.insert(v.get<std::string>());
    }
    return out;
  }

  template <typename Enum>
  Enum enum_at(const Json &j, const std::string &ptr, const char *key,
               std::initializer_list<Enum> values) {
    std::string text = string_at(j, ptr, key);
    for (Enum e : values)
      if (text == to_string(e))
        return e;
    if (j.contains(key) && j[key].is_string())
      schema_error(ptr + "/" + key, "unknown value '" + text + "'");
    return *values.begin();
  }

  ModuleDecl module(const Json &j, const std::string &ptr) {
    ModuleDecl mod;
    if (!object(j, ptr, {"path", "functions", "structs", "submodules"},
                {"externs"}))
      return mod;
    mod.path = string_at(j, ptr, "path");
    if (const Json *arr = array_at(j, ptr, "functions"))
      for (std::size_t i = 0; i < arr->size(); ++i)
        mod.functions.push_back(
            function((*arr)[i], ptr + "/functions/" + std::to_string(i)));
    if (const Json *arr = array_at(j, ptr, "structs"))
      for (std::size_t i = 0; i < arr->size(); ++i)
        mod.structs.push_back(
            structure((*arr)[i], ptr + "/structs/" + std::to_string(i)));
    if (const Json *arr = array_at(j, ptr, "submodules"))
      for (std::size_t i = 0; i < arr->size(); ++i)
        mod.submodules.push_back(
            module((*arr)[i], ptr + "/submodules/" + std::to_string(i)));
    if (const Json *arr = array_at(j, ptr, "externs"))
      for (std::size_t i = 0; i < arr->size(); ++i)
        mod.externs.push_back(
            external((*arr)[i], ptr + "/externs/" + std::to_string(i)));
    return mod;
  }

  FunctionDecl function(const Json &j, const std::string &ptr) {
    FunctionDecl f;
    if (!object(j, ptr,
                {"path", "visibility", "unsafety", "receiver", "role", "sc",
                 "establishes", "breaks", "calls"},
                {"owner"}))
      return f;
    f.path = string_at(j, ptr, "path");
    f.visibility = enum_at(j, ptr, "visibility",
                           {Visibility::Private, Visibility::Public});
    f.unsafety =
        enum_at(j, ptr, "unsafety", {Unsafety::Safe, Unsafety::Unsafe});
    f.receiver = enum_at(j, ptr, "receiver",
                         {Receiver::None, Receiver::RefSelf, Receiver::MutSelf});
    f.role = enum_at(j, ptr, "role",
                     {Role::Plain, Role::Constructor, Role::Destructor});
    if (j.contains("owner"))
      f.owner = string_at(j, ptr, "owner");
    f.sc = atoms_at(j, ptr, "sc");
    f.establishes = atoms_at(j, ptr, "establishes");
    f.breaks = atoms_at(j, ptr, "breaks");
    if (const Json *arr = array_at(j, ptr, "calls")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        std::string cptr = ptr + "/calls/" + std::to_string(i);
        const Json &c = (*arr)[i];
        CallSite call;
        if (object(c, cptr, {"callee"}, {"discharge_hints"})) {
          call.callee = string_at(c, cptr, "callee");
          if (c.contains("discharge_hints")) {
            const Json &hints = c["discharge_hints"];
            if (!hints.is_object()) {
              schema_error(cptr + "/discharge_hints", "expected an object");
            } else {
              for (const auto &[atom, reason] : hints.items()) {
                if (!reason.is_string())
                  schema_error(cptr + "/discharge_hints/" + atom,
                               "expected a string");
                else
                  call.discharge_hints[atom] = reason.get<std::string>();
              }
            }
          }
        }
        f.calls.push_back(std::move(call));
      }
    }
    return f;
  }

  StructDecl structure(const Json &j, const std::string &ptr) {
    StructDecl s;
    if (!object(j, ptr, {"name", "fields", "invariant_atoms"},
                {"visibility", "literal_constructor", "field_access"}))
      return s;
    s.name = string_at(j, ptr, "name");
    if (j.contains("visibility"))
      s.visibility = enum_at(j, ptr, "visibility",
                             {Visibility::Private, Visibility::Public});
    if (const Json *arr = array_at(j, ptr, "fields")) {
      for (std::size_t i = 0; i < arr->size(); ++i) {
        std::string fptr = ptr + "/fields/" + std::to_string(i);
        const Json &fj = (*arr)[i];
        if (!object(fj, fptr, {"name", "type"}, {}))
          continue;
        s.fields.push_back(
            {string_at(fj, fptr, "name"), string_at(fj, fptr, "type")});
      }
    }
    s.invariant_atoms = atoms_at(j, ptr, "invariant_atoms");
    s.literal_constructor = bool_at(j, ptr, "literal_constructor");
    s.field_access = bool_at(j, ptr, "field_access");
    return s;
  }

  FunctionDecl external(const Json &j, const std::string &ptr) {
    FunctionDecl e;
    e.external = true;
    e.visibility = Visibility::Public;
    if (!object(j, ptr, {"path", "unsafety", "sc"}, {}))
      return e;
    e.path = string_at(j, ptr, "path");
    e.unsafety =
        enum_at(j, ptr, "unsafety", {Unsafety::Safe, Unsafety::Unsafe});
    e.sc = atoms_at(j, ptr, "sc");
    return e;
  }
};

} // namespace

LoadResult load_json(std::string_view bytes) {
  LoadResult result;
  Json doc = Json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (doc.is_discarded()) {
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = "malformed JSON document";
    d.pointer = "/";
    result.diagnostics.push_back(std::move(d));
    return result;
  }
  SchemaReader reader;
  std::optional<CrateModel> model = reader.read(doc);
  if (!model) {
    result.diagnostics = std::move(reader.diags);
    return result;
  }
  result.diagnostics = validate(*model);
  if (!has_errors(result.diagnostics))
    result.model = std::move(model);
  return result;
}

InputFormat format_for_path(const std::string &path) {
  constexpr std::string_view ext = ".json";
  if (path.size() >= ext.size() &&
      path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return InputFormat::Json;
  return InputFormat::Facts;
}

LoadResult load_file(const std::string &path,
                     std::optional<InputFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    LoadResult result;
    Diagnostic d;
    d.severity = Severity::Error;
    d.message = "cannot read input file";
    d.subject = path;
    result.diagnostics.push_back(std::move(d));
    return result;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (format.value_or(format_for_path(path)) == InputFormat::Json)
    return load_json(text);
  return parse_facts(text);
}

} // namespace upg
