//===- json_io.hpp - Canonical JSON serialization of crate models ---------===//
//
// Object keys are emitted sorted and atom sets as sorted arrays, so the
// serialization of a model is byte-deterministic. The model fingerprint is
// the SHA-256 of the compact canonical form.
//
//===----------------------------------------------------------------------===//
#pragma once

#include "upg/model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace upg {

using Json = nlohmann::json;

Json to_json(const FactSet &atoms);
Json to_json(const FunctionDecl &f);
Json to_json(const ModuleDecl &mod);
Json to_json(const CrateModel &model);

/// Compact canonical serialization.
std::string canonical_json(const CrateModel &model);

/// Hex SHA-256 of the canonical serialization.
std::string fingerprint(const CrateModel &model);

/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view bytes);

} // namespace upg
