#pragma once

#include <string>

#include <json.hpp>

#include "embedlog/embed.hpp"
#include "embedlog/error.hpp"
#include "embedlog/matrix.hpp"
#include "embedlog/tolerances.hpp"

namespace embedlog {

/// Bumped on any change to the report layout in docs/report-schema.json.
inline constexpr const char* kSchemaVersion = "1.0";

enum class MatrixFormat { Auto, Csv, Json };

/// "csv", "json" or "auto". Throws InvalidArgument.
MatrixFormat parse_format(const std::string& name);

/// CSV: four lines of four comma-separated decimals, optionally preceded by
/// '#' lines. JSON: {"matrix": [[4], [4], [4], [4]]}. Auto picks JSON when the
/// first non-blank character is '{'. Decimal tokens are parsed at the full
/// precision of Real. Throws ParseError.
template <class Real>
RMat4<Real> parse_matrix(const std::string& text, MatrixFormat format = MatrixFormat::Auto);

/// digits == 0 writes each entry as the shortest decimal that round-trips
/// its binary64 rounding; digits > 0 writes that many significant digits.
template <class Real>
std::string format_matrix(const RMat4<Real>& m, MatrixFormat format = MatrixFormat::Json, int digits = 0);

/// Matrix as nested arrays of binary64 numbers.
template <class Real>
nlohmann::json matrix_json(const RMat4<Real>& m);

nlohmann::json tolerances_json(const Tolerances& tol);

template <class Real>
nlohmann::json report_json(const EmbeddabilityReport<Real>& report);

nlohmann::json error_json(const Error& e);

/// Human-readable rendering of a classification report.
template <class Real>
std::string report_table(const EmbeddabilityReport<Real>& report);

}  // namespace embedlog
