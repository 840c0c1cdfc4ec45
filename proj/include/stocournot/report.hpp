#pragma once

// Result documents produced by the command-line driver and their CSV / JSON / SVG encodings.
//
// Numbers are written with 17 significant digits ("%.17g"); non-finite values are written as
// inf, -inf and nan (quoted in JSON). Output depends only on the document, so identical
// requests produce identical bytes.

#include "stocournot/efficiency.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stocournot {

struct Value {
  std::variant<std::monostate, bool, std::int64_t, double, std::string, std::vector<Value>> data;

  Value() = default;
  Value(bool v) : data(v) {}
  Value(int v) : data(static_cast<std::int64_t>(v)) {}
  Value(std::int64_t v) : data(v) {}
  Value(std::size_t v) : data(static_cast<std::int64_t>(v)) {}
  Value(double v) : data(v) {}
  Value(const char* v) : data(std::string(v)) {}
  Value(std::string v) : data(std::move(v)) {}
  Value(std::string_view v) : data(std::string(v)) {}
  Value(std::vector<Value> v) : data(std::move(v)) {}

  [[nodiscard]] bool is_null() const noexcept { return std::holds_alternative<std::monostate>(data); }
};

struct ResultDocument {
  /// Provenance: tool, version, request echo, distribution, r*.
  std::vector<std::pair<std::string, std::string>> metadata;
  /// Scalar results, in order.
  std::vector<std::pair<std::string, Value>> fields;
  /// Optional table.
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void field(std::string key, Value value) { fields.emplace_back(std::move(key), std::move(value)); }
};

[[nodiscard]] std::string format_number(double v);

/// `#`-prefixed metadata and field lines, then a header row and data rows (RFC 4180 quoting, LF).
/// A document without a table is written as a two-column key,value table.
[[nodiscard]] std::string emit_csv(const ResultDocument& doc);

/// A single JSON object: {"metadata": {...}, "results": {...}, "columns": [...], "rows": [[...]]}.
[[nodiscard]] std::string emit_json(const ResultDocument& doc);

/// Self-contained SVG line chart of curves sharing the demand axis.
///
/// Draws a reference line at ratio 1, one polyline per curve (a marker for single-point curves)
/// and, for PoU curves, a dashed locus through each curve's maximum (2n r*/(n-1), 1 + 1/(n^2+2n)).
[[nodiscard]] std::string emit_svg(std::span<const RatioCurve> curves);

struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Reads the CSV written by emit_csv.
[[nodiscard]] CsvTable parse_csv(std::string_view text);

}  // namespace stocournot
