#include "llull/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace llull {
namespace {

using nlohmann::json;

struct Line {
  std::string_view text;
  std::size_t number;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0, number = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') {
      lines.push_back({line, number});
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

struct Cell {
  std::string_view text;
  std::size_t column;
};

std::vector<Cell> split_cells(std::string_view line) {
  std::vector<Cell> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    cells.push_back({trim(line.substr(start, end - start)), start + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

json labels_of(const OptionSet& o, std::span<const OptionIndex> subset) {
  json out = json::array();
  for (OptionIndex i : subset) out.push_back(o.label(i));
  return out;
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

InputKind sniff_input_kind(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw SyntaxError(1, 1, "input is empty");
  const std::string_view first = trim(lines.front().text);
  if (first.starts_with("options")) {
    const auto rest = trim(first.substr(7));
    if (rest.starts_with(":")) return InputKind::kBallots;
  }
  return InputKind::kMatrix;
}

LlullMatrix parse_matrix(std::string_view text, double tol) {
  const auto lines = content_lines(text);
  if (!lines.empty() && trim(lines.front().text).starts_with("{")) {
    return parse_matrix_json(text, tol);
  }
  return parse_matrix_csv(text, tol);
}

LlullMatrix parse_matrix_json(std::string_view text, double tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SyntaxError(line, column, "malformed JSON");
  }
  if (!doc.is_object() || !doc.contains("options") || !doc.contains("scores")) {
    throw SyntaxError(1, 1, "expected an object with 'options' and 'scores'");
  }
  const json& opts = doc["options"];
  const json& scores = doc["scores"];
  if (!opts.is_array() || !scores.is_array() || scores.size() != opts.size()) {
    throw SyntaxError(1, 1, "'scores' must have one row per option");
  }
  std::vector<std::string> labels;
  for (const auto& o : opts) {
    if (!o.is_string()) throw SyntaxError(1, 1, "option labels must be strings");
    labels.push_back(o.get<std::string>());
  }
  const std::size_t n = labels.size();
  SquareArray v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = scores[i];
    if (!row.is_array() || row.size() != n) {
      throw SyntaxError(1, 1, "row " + std::to_string(i + 1) + " of 'scores' has wrong length");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j && row[j].is_null()) continue;
      if (!row[j].is_number()) {
        throw SyntaxError(1, 1, "score (" + labels[i] + ", " + labels[j] + ") is not a number");
      }
      v(i, j) = row[j].get<double>();
    }
  }
  return LlullMatrix(OptionSet(std::move(labels)), v, tol);
}

LlullMatrix parse_matrix_csv(std::string_view text, double tol) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw SyntaxError(1, 1, "input is empty");
  const auto header = split_cells(lines.front().text);
  std::vector<std::string> labels;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].text.empty()) {
      throw SyntaxError(lines.front().number, header[c].column, "empty option label");
    }
    labels.emplace_back(header[c].text);
  }
  const std::size_t n = labels.size();
  if (n == 0) throw SyntaxError(lines.front().number, 1, "header names no options");
  if (lines.size() != n + 1) {
    const std::size_t at = lines.size() > n + 1 ? lines[n + 1].number : lines.back().number + 1;
    throw SyntaxError(at, 1, "expected " + std::to_string(n) + " rows");
  }
  SquareArray v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Line& line = lines[i + 1];
    const auto cells = split_cells(line.text);
    if (cells.size() != n + 1) {
      throw SyntaxError(line.number, 1, "expected " + std::to_string(n + 1) + " cells");
    }
    if (cells[0].text != labels[i]) {
      throw SyntaxError(line.number, cells[0].column,
                        "row label '" + std::string(cells[0].text) + "' should be '" +
                            labels[i] + "'");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const Cell& cell = cells[j + 1];
      if (i == j && (cell.text.empty() || cell.text == "-")) continue;
      double x = 0;
      const char* begin = cell.text.data();
      const char* end = begin + cell.text.size();
      const auto [ptr, ec] = std::from_chars(begin, end, x);
      if (ec != std::errc() || ptr != end) {
        throw SyntaxError(line.number, cell.column,
                          "bad number '" + std::string(cell.text) + "'");
      }
      v(i, j) = x;
    }
  }
  return LlullMatrix(OptionSet(std::move(labels)), v, tol);
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string matrix_csv(const LlullMatrix& m) {
  std::string out;
  for (const auto& l : m.options().labels()) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += m.options().label(i);
    for (std::size_t j = 0; j < m.size(); ++j) out += "," + format_number(m(i, j));
    out += '\n';
  }
  return out;
}

json to_json(const LlullMatrix& m) {
  return {{"options", m.options().labels()}, {"scores", m.rows()}};
}

json to_json(const RateVector& r) {
  json out{{"kind", rate_kind_name(r.kind)},
           {"options", r.options.labels()},
           {"values", r.values}};
  if (r.flag) out["flag"] = errc_name(*r.flag);
  return out;
}

json to_json(const ClcVerdict& v, const OptionSet& options) {
  json witnesses = json::array();
  for (const auto& w : v.witnesses) {
    witnesses.push_back({{"condition", clc_condition_name(w.condition)},
                         {"x", options.label(w.x)},
                         {"y", options.label(w.y)},
                         {"z", options.label(w.z)},
                         {"excess", w.excess}});
  }
  return {{"ok", v.ok()},
          {"pairwise", v.pairwise},
          {"max_chain", v.max_chain},
          {"min_chain", v.min_chain},
          {"turnout_margin", v.turnout_margin},
          {"monotone", v.monotone},
          {"witnesses", witnesses}};
}

json to_json(const StructureReport& r, const OptionSet& options) {
  json comps = json::array();
  for (const auto& c : r.components) comps.push_back(labels_of(options, c));
  json dominance = json::array();
  for (const auto& [a, b] : r.dominance) dominance.push_back({a, b});
  json out{{"options", options.labels()},
           {"components", comps},
           {"dominance", dominance},
           {"irreducible", r.irreducible()},
           {"top_dominant", nullptr},
           {"order", nullptr},
           {"clc", nullptr}};
  if (r.top_dominant) out["top_dominant"] = *r.top_dominant;
  if (r.order) out["order"] = labels_of(options, *r.order);
  if (r.clc) out["clc"] = to_json(*r.clc, options);
  return out;
}

json to_json(const ProjectionResult& r) {
  return {{"matrix", to_json(r.matrix)},
          {"order", labels_of(r.matrix.options(), r.order)},
          {"fixed_point", r.fixed_point}};
}

json to_json(const SolveDiagnostics& d) {
  json out{{"iterations", d.iterations},
           {"residual", nullable(d.residual)},
           {"log_likelihood", nullable(d.log_likelihood)},
           {"hessian_definite", nullptr},
           {"likelihood_decreased", d.likelihood_decreased}};
  if (d.hessian_definite) out["hessian_definite"] = *d.hessian_definite;
  return out;
}

json to_json(const Solution& s) {
  return {{"options", s.strengths.options.labels()},
          {"phi", s.strengths.phi},
          {"support", labels_of(s.strengths.options, s.strengths.support)},
          {"diagnostics", to_json(s.diagnostics)}};
}

json to_json(const RateReport& r) {
  return {{"options", r.fraction.options.labels()},
          {"fraction", r.fraction.values},
          {"rank_like", r.rank_like.values},
          {"projection", to_json(r.projection)},
          {"diagnostics", to_json(r.diagnostics)},
          {"warnings", r.warnings}};
}

json to_json(const CheckReport& r) {
  auto findings = [](const std::vector<Finding>& fs) {
    json out = json::array();
    for (const auto& f : fs) out.push_back({{"check", f.check}, {"detail", f.detail}});
    return out;
  };
  return {{"ok", r.ok()},
          {"skipped", r.skipped},
          {"checked", r.checked},
          {"violations", findings(r.violations)},
          {"notes", findings(r.notes)}};
}

std::string rates_csv(const RateReport& r) {
  std::string out = "option,fraction,rank_like\n";
  for (std::size_t i = 0; i < r.fraction.size(); ++i) {
    out += r.fraction.options.label(i) + "," + format_number(r.fraction[i]) + "," +
           format_number(r.rank_like[i]) + "\n";
  }
  return out;
}

std::string trace_csv(const SolveDiagnostics& d) {
  std::string out = "iteration,log_likelihood,residual\n";
  for (const auto& p : d.trace) {
    out += std::to_string(p.iteration) + "," + format_number(p.log_likelihood) + "," +
           format_number(p.residual) + "\n";
  }
  return out;
}

}  // namespace llull
