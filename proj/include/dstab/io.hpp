#pragma once

// Matrix file formats and report serialization.
//
// Text: first token n, then n rows of n whitespace-separated reals.
// JSON: {"n": int, "rows": [[...], ...]}.

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "dstab/bounds.hpp"
#include "dstab/certificates.hpp"
#include "dstab/linalg.hpp"
#include "dstab/oracle.hpp"
#include "dstab/predicates.hpp"

namespace dstab {

enum class MatrixFormat { Text, Json };

/// Throws Error(Parse) on malformed, non-square or non-finite input.
RealMatrix parse_matrix_text(std::string_view text);
RealMatrix parse_matrix_json(std::string_view text);
RealMatrix parse_matrix(std::string_view text, MatrixFormat format);
RealMatrix read_matrix_file(const std::string& path, MatrixFormat format);

/// Entries are written with 17 significant digits, so re-reading is exact.
std::string write_matrix_text(const RealMatrix& a);
std::string write_matrix_json(const RealMatrix& a);

nlohmann::json to_json(const DiagonalScaling& d);
nlohmann::json to_json(const ClassReport& r);
nlohmann::json to_json(const SectorCertificate& c);
nlohmann::json to_json(const BoundEntry& e);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const SamplingReport& r);
nlohmann::json to_json(const SuperadditivityReport& r);
nlohmann::json to_json(const ClosureReport& r);
nlohmann::json to_json(const TwoByTwoReport& r);
nlohmann::json error_json(const Error& e);

/// Indented rendering of a JSON report with numbers rounded to 6
/// significant digits.
std::string pretty(const nlohmann::json& j);

}  // namespace dstab
