#include "specgap/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "json.hpp"
#include "specgap/errors.hpp"

namespace specgap::report {
namespace {

constexpr char kModule[] = "report";

std::string tsv_text(const std::string& s) {
  std::string out = s;
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) return format_number(std::get<double>(cell));
  if (std::holds_alternative<bool>(cell)) return std::get<bool>(cell) ? "true" : "false";
  if (std::holds_alternative<std::string>(cell)) return tsv_text(std::get<std::string>(cell));
  return "";
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    const double x = std::get<double>(cell);
    if (!std::isfinite(x)) return format_number(x);
    // The JSON number is the same 12-digit value as the TSV cell.
    const std::string text = format_number(x);
    double rounded = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), rounded);
    return rounded;
  }
  if (std::holds_alternative<bool>(cell)) return std::get<bool>(cell);
  if (std::holds_alternative<std::string>(cell)) return std::get<std::string>(cell);
  return nullptr;
}

template <class T>
Cell optional_cell(const std::optional<T>& v) {
  return v ? Cell{*v} : Cell{};
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "tsv") return Format::Tsv;
  if (name == "json") return Format::Json;
  throw DomainError(kModule, "unknown format '" + name + "' (expected tsv or json)");
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Table to_table(std::vector<ReportRow> rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.section, a.name) < std::tie(b.section, b.name);
  });
  Table t;
  t.columns = {"section", "name", "value", "applicable", "sharp", "dominance_ok", "converged", "detail"};
  for (const auto& r : rows) {
    t.rows.push_back({r.section, r.name, optional_cell(r.value), optional_cell(r.applicable),
                      optional_cell(r.sharp), optional_cell(r.dominance_ok),
                      optional_cell(r.converged),
                      r.detail.empty() ? Cell{} : Cell{r.detail}});
  }
  return t;
}

Table cheeger_table(std::span<const cheeger::CheegerResult> results) {
  Table t;
  t.columns = {"variant", "alpha", "r_choice", "value", "argmin_subset", "converged"};
  for (const auto& r : results) {
    t.rows.push_back({cheeger::variant_name(r.variant), r.alpha, r.r_choice, r.value,
                      r.argmin_string(), r.converged});
  }
  return t;
}

std::string emit(const Table& table, Format format) {
  if (table.rows.empty()) throw DomainError(kModule, "nothing to emit");
  if (format == Format::Json) {
    auto doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        obj[table.columns[c]] = c < row.size() ? cell_json(row[c]) : nullptr;
      }
      doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
  }
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "\t" : "") + table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out += '\t';
      if (c < row.size()) out += cell_text(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string emit(std::vector<ReportRow> rows, Format format) {
  return emit(to_table(std::move(rows)), format);
}

}  // namespace specgap::report
