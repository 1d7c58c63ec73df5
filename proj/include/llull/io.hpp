#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "llull/projection.hpp"
#include "llull/rates.hpp"
#include "llull/structure.hpp"
#include "llull/zermelo.hpp"

namespace llull {

enum class InputKind { kBallots, kMatrix };

// Ballot files start with "options:", matrices with '{' (JSON) or a CSV
// header row. Comment lines (#) and blank lines are skipped.
InputKind sniff_input_kind(std::string_view text);

// {"options": [...], "scores": [[...], ...]} or CSV:
//   ,a,b,c
//   a,0,0.6,0.7
//   ...
// Throws SyntaxError on malformed input, kInvalidMatrix on bad scores.
LlullMatrix parse_matrix(std::string_view text,
                         double tol = LlullMatrix::kDefaultTolerance);
LlullMatrix parse_matrix_json(std::string_view text,
                              double tol = LlullMatrix::kDefaultTolerance);
LlullMatrix parse_matrix_csv(std::string_view text,
                             double tol = LlullMatrix::kDefaultTolerance);

std::string matrix_csv(const LlullMatrix& m);

nlohmann::json to_json(const LlullMatrix& m);
nlohmann::json to_json(const RateVector& r);
nlohmann::json to_json(const ClcVerdict& v, const OptionSet& options);
nlohmann::json to_json(const StructureReport& r, const OptionSet& options);
nlohmann::json to_json(const ProjectionResult& r);
nlohmann::json to_json(const SolveDiagnostics& d);
nlohmann::json to_json(const Solution& s);
nlohmann::json to_json(const RateReport& r);
nlohmann::json to_json(const CheckReport& r);

// option,fraction,rank_like
std::string rates_csv(const RateReport& r);
// iteration,log_likelihood,residual
std::string trace_csv(const SolveDiagnostics& d);

// Compact text rendering with 17 significant digits.
std::string format_number(double x);

}  // namespace llull
