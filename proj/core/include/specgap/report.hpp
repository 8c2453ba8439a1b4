#pragma once

// Deterministic TSV / JSON tables.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specgap/cheeger.hpp"

namespace specgap::report {

enum class Format { Tsv, Json };

/// "tsv" or "json"; anything else is a DomainError.
Format parse_format(const std::string& name);

/// Twelve significant digits, locale independent; "inf", "-inf", "nan" for
/// non-finite input.
std::string format_number(double x);

struct ReportRow {
  std::string section;
  std::string name;
  std::optional<double> value;
  std::optional<bool> applicable;
  std::optional<bool> sharp;
  std::optional<bool> dominance_ok;
  std::optional<bool> converged;
  std::string detail;
};

using Cell = std::variant<std::monostate, double, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Rows sorted by (section, name); columns section, name, value, applicable,
/// sharp, dominance_ok, converged, detail.
Table to_table(std::vector<ReportRow> rows);

/// Columns variant, alpha, r_choice, value, argmin_subset, converged.
Table cheeger_table(std::span<const cheeger::CheegerResult> results);

/// TSV: header plus one line per row, LF endings, empty cell for absent
/// values. JSON: array of objects in column order, null for absent values.
/// Throws DomainError when the table has no rows.
std::string emit(const Table& table, Format format);
std::string emit(std::vector<ReportRow> rows, Format format);

}  // namespace specgap::report
