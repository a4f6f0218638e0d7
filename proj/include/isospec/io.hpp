/**
 * @file io.hpp
 * @brief JSON persistence for j-maps, sphere points and verification reports.
 *
 * JMap files: {"m": int, "j1": [[[re, im], ...], ...], "j2": ...}, row-major.
 * Canonical form is nlohmann's dump (sorted keys, shortest round-trip doubles)
 * followed by a newline.
 */
#pragma once

#include <string>

#include <json.hpp>

#include "isospec/verify.hpp"

namespace isospec {

std::string canonical_dump(const nlohmann::json& doc);

nlohmann::json complex_matrix_to_json(const ComplexMatrix& x);
/// Throws Error{SchemaError} naming field.
ComplexMatrix complex_matrix_from_json(const nlohmann::json& doc, int rows, int cols, const std::string& field);

nlohmann::json jmap_to_json(const JMap& j);
/// Throws Error{SchemaError}; the message names the offending field.
JMap jmap_from_json(const nlohmann::json& doc, double tol = kDefaultValidationTol);

/// {"u": [[re, im], ...], "v": [[re, im], [re, im]]}. No normalization.
/// Throws Error{SchemaError}.
std::pair<ComplexVector, ComplexVector> point_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const VerificationReport& report);

/// Throws Error{IoError}.
std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);
/// Throws Error{IoError | SchemaError}.
nlohmann::json read_json(const std::string& path);

void save_jmap(const std::string& path, const JMap& j);
JMap load_jmap(const std::string& path);

}  // namespace isospec
