#include "stocournot/report.hpp"

#include "stocournot/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace stocournot {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04x}", static_cast<unsigned>(c));
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string json_value(const Value& v) {
  return std::visit(Overloaded{
                        [](std::monostate) -> std::string { return "null"; },
                        [](bool b) -> std::string { return b ? "true" : "false"; },
                        [](std::int64_t i) { return std::to_string(i); },
                        [](double d) { return std::isfinite(d) ? format_number(d) : json_string(format_number(d)); },
                        [](const std::string& s) { return json_string(s); },
                        [](const std::vector<Value>& items) {
                          std::string out = "[";
                          for (std::size_t i = 0; i < items.size(); ++i) {
                            if (i > 0) out += ", ";
                            out += json_value(items[i]);
                          }
                          return out + "]";
                        },
                    },
                    v.data);
}

std::string csv_cell(std::string cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string plain_value(const Value& v) {
  return std::visit(Overloaded{
                        [](std::monostate) -> std::string { return ""; },
                        [](bool b) -> std::string { return b ? "true" : "false"; },
                        [](std::int64_t i) { return std::to_string(i); },
                        [](double d) { return format_number(d); },
                        [](const std::string& s) { return s; },
                        [](const std::vector<Value>& items) {
                          std::string out;
                          for (std::size_t i = 0; i < items.size(); ++i) {
                            if (i > 0) out += ';';
                            out += plain_value(items[i]);
                          }
                          return out;
                        },
                    },
                    v.data);
}

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += csv_cell(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

std::string emit_csv(const ResultDocument& doc) {
  std::string out;
  for (const auto& [key, value] : doc.metadata) out += fmt::format("# {}: {}\n", key, value);
  if (doc.columns.empty()) {
    append_row(out, {"key", "value"});
    for (const auto& [key, value] : doc.fields) append_row(out, {key, plain_value(value)});
    return out;
  }
  for (const auto& [key, value] : doc.fields) out += fmt::format("# {}: {}\n", key, plain_value(value));
  append_row(out, doc.columns);
  for (const auto& row : doc.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& v : row) cells.push_back(plain_value(v));
    append_row(out, cells);
  }
  return out;
}

std::string emit_json(const ResultDocument& doc) {
  std::string out = "{\n  \"metadata\": {";
  for (std::size_t i = 0; i < doc.metadata.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += fmt::format("    {}: {}", json_string(doc.metadata[i].first), json_string(doc.metadata[i].second));
  }
  out += doc.metadata.empty() ? "},\n" : "\n  },\n";
  out += "  \"results\": {";
  for (std::size_t i = 0; i < doc.fields.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += fmt::format("    {}: {}", json_string(doc.fields[i].first), json_value(doc.fields[i].second));
  }
  out += doc.fields.empty() ? "}" : "\n  }";
  if (!doc.columns.empty()) {
    out += ",\n  \"columns\": [";
    for (std::size_t i = 0; i < doc.columns.size(); ++i) {
      if (i > 0) out += ", ";
      out += json_string(doc.columns[i]);
    }
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
      out += r == 0 ? "\n    " : ",\n    ";
      out += json_value(Value(doc.rows[r]));
    }
    out += doc.rows.empty() ? "]" : "\n  ]";
  }
  out += "\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 90.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;
constexpr int kTicks = 6;
constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;

  [[nodiscard]] double px(double x) const { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); }
  [[nodiscard]] double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

std::string axis_label(Metric m) {
  switch (m) {
    case Metric::pou: return "aggregate profit ratio, uncertain / deterministic";
    case Metric::poa: return "integrated / decentralized profit";
    case Metric::supplier_ratio: return "supplier profit ratio, uncertain / deterministic";
    case Metric::retailer_ratio: return "retailer profit ratio, uncertain / deterministic";
  }
  return "ratio";
}

}  // namespace

std::string emit_svg(std::span<const RatioCurve> curves) {
  if (curves.empty()) throw InvalidArgument("SVG chart needs at least one curve");
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0, 1.0};
  for (const auto& c : curves) {
    if (c.alphas.empty() || c.alphas.size() != c.values.size()) {
      throw InvalidArgument("SVG chart curves need matching, nonempty alpha and value series");
    }
    f.x_lo = std::min(f.x_lo, c.alphas.front());
    f.x_hi = std::max(f.x_hi, c.alphas.back());
    for (double v : c.values) {
      if (!std::isfinite(v)) continue;
      f.y_lo = std::min(f.y_lo, v);
      f.y_hi = std::max(f.y_hi, v);
    }
  }
  if (!(f.x_hi > f.x_lo)) {
    f.x_lo -= 0.5;
    f.x_hi += 0.5;
  }
  f.y_hi += 0.05 * (f.y_hi - f.y_lo);

  const Metric metric = curves.front().metric;
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                     "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"11\">\n",
                     kWidth, kHeight);
  out += fmt::format("<title>{} vs demand level</title>\n", to_string(metric));
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes and ticks.
  const double x0 = f.px(f.x_lo), x1 = f.px(f.x_hi), y0 = f.py(f.y_lo), y1 = f.py(f.y_hi);
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x1, y0);
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x0, y0, x0, y1);
  for (int i = 0; i < kTicks; ++i) {
    const double t = static_cast<double>(i) / (kTicks - 1);
    const double xv = f.x_lo + t * (f.x_hi - f.x_lo);
    const double yv = f.y_lo + t * (f.y_hi - f.y_lo);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                       f.px(xv), y0, y0 + 4);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:.3g}</text>\n", f.px(xv), y0 + 16, xv);
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"black\"/>\n", x0,
                       f.py(yv), x0 - 4);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", x0 - 6, f.py(yv) + 4, yv);
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">realized demand level</text>\n",
                     0.5 * (x0 + x1), kHeight - 12);
  out += fmt::format("<text x=\"14\" y=\"{:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2f})\">{}</text>\n",
                     0.5 * (y0 + y1), 0.5 * (y0 + y1), axis_label(metric));

  if (1.0 >= f.y_lo && 1.0 <= f.y_hi) {
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#999999\" "
                       "stroke-dasharray=\"2 3\"/>\n",
                       x0, f.py(1.0), x1);
  }

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    const char* color = kPalette[i % kPalette.size()];
    if (c.alphas.size() == 1) {
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", f.px(c.alphas[0]),
                         f.py(c.values[0]), color);
    } else {
      out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
      for (std::size_t k = 0; k < c.alphas.size(); ++k) {
        if (k > 0) out += ' ';
        out += fmt::format("{:.2f},{:.2f}", f.px(c.alphas[k]), f.py(c.values[k]));
      }
      out += "\"/>\n";
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" fill=\"{}\">n = {}</text>\n", kWidth - kRight + 10,
                       kTop + 14.0 * static_cast<double>(i), color, c.n);
  }

  if (metric == Metric::pou) {
    std::vector<std::pair<double, double>> locus;
    for (const auto& c : curves) {
      if (c.n < 2) continue;
      const auto bound = pou_supremum(c.n, c.r_star);
      if (*bound.argmax_alpha >= f.x_lo && *bound.argmax_alpha <= f.x_hi) locus.emplace_back(*bound.argmax_alpha, bound.value);
    }
    std::sort(locus.begin(), locus.end());
    if (!locus.empty()) {
      out += "<polyline fill=\"none\" stroke=\"black\" stroke-dasharray=\"6 4\" points=\"";
      for (std::size_t k = 0; k < locus.size(); ++k) {
        if (k > 0) out += ' ';
        out += fmt::format("{:.2f},{:.2f}", f.px(locus[k].first), f.py(locus[k].second));
      }
      out += "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

// ---------------------------------------------------------------------------
// CSV reader

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t pos = 0;
  auto read_record = [&]() {
    std::vector<std::string> cells(1);
    bool quoted = false;
    while (pos < text.size()) {
      const char c = text[pos++];
      if (quoted) {
        if (c == '"') {
          if (pos < text.size() && text[pos] == '"') {
            cells.back() += '"';
            ++pos;
          } else {
            quoted = false;
          }
        } else {
          cells.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        cells.emplace_back();
      } else if (c == '\n') {
        return cells;
      } else {
        cells.back() += c;
      }
    }
    return cells;
  };

  bool have_header = false;
  while (pos < text.size()) {
    if (!have_header && text[pos] == '#') {
      const auto end = text.find('\n', pos);
      const auto line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      table.comments.emplace_back(line.substr(std::min<std::size_t>(2, line.size())));
      pos = end == std::string_view::npos ? text.size() : end + 1;
      continue;
    }
    auto record = read_record();
    if (!have_header) {
      table.header = std::move(record);
      have_header = true;
    } else {
      table.rows.push_back(std::move(record));
    }
  }
  return table;
}

}  // namespace stocournot
