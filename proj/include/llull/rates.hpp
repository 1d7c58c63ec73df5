#pragma once

#include <string>
#include <vector>

#include "llull/ballots.hpp"
#include "llull/projection.hpp"
#include "llull/report.hpp"
#include "llull/zermelo.hpp"

namespace llull {

inline constexpr const char* kNoInformation = "NoInformation";

struct RateReport {
  RateVector fraction;   // kind kFraction; a distribution over the options
  RateVector rank_like;  // mean ranks of the projected matrix
  ProjectionResult projection;
  SolveDiagnostics diagnostics;
  std::vector<std::string> warnings;
};

struct RatesConfig {
  SolverConfig solver;
  StructureConfig structure;
};

// Strengths of the CLC projection of m. A vanishing projection carries no
// information and gets uniform rates plus a NoInformation warning.
// Propagates MaxIterExceeded and projection errors.
RateReport fraction_like_rates(const LlullMatrix& m, const RatesConfig& cfg = {});

// Principal non-negative eigenvector of m with 1/2 on the diagonal, by power
// iteration, normalized to sum 1. Throws kInvalidArgument on a vanishing
// matrix and kPowerIterationDiverged if it fails to settle.
RateVector eigenvector_rates(const LlullMatrix& m);

// phi_x > phi_y must imply rho_x > rho_y, and rho_x > rho_y must imply
// phi_x > phi_y unless both vanish. rho is taken on the projected matrix.
CheckReport check_compatibility(const ProjectionResult& p, const Strengths& phi,
                           const StructureConfig& cfg = {});

// Requires v_xy > 1/2 for every x in `winners` and y outside (else
// kHypothesisNotSatisfied). True iff every winner outrates every outsider,
// or both rates vanish.
bool check_majority(const LlullMatrix& m, const RateReport& report,
                    std::span<const OptionIndex> winners);

// `improved` must raise scores of `a` against others, lower scores of others
// against `a` and keep the rest (else kNotAnImprovement). Checks that an
// option rated below a stays at or below it.
CheckReport check_monotonicity(const LlullMatrix& m, const LlullMatrix& improved,
                               OptionIndex a, const RatesConfig& cfg = {});

// Rates before and after contracting the autonomous set `clones` into
// `representative`. The clones must form an interval of the rate ordering and
// the ordering of the rest must survive the contraction. Skipped (with a
// SupportHypothesisFailed note) unless the clones lie inside the support of
// the rates or contain everything outside it. Throws kNotAutonomous.
CheckReport check_clone_consistency(const BallotSet& ballots,
                                    std::span<const OptionIndex> clones,
                                    const std::string& representative,
                                    const RatesConfig& cfg = {},
                                    TiePolicy ties = TiePolicy::kHalf);

// Sets X with v_xy = 1 for all x in X, y outside, proper and non-empty,
// smallest first. Such sets are nested.
std::vector<Subset> unanimous_sets(const LlullMatrix& m);

// For every unanimously preferred set: rates vanish outside it. For the
// smallest one: rates on it equal those of the ballots restricted to it.
// With complete ballots: the support of the rates is the smallest such set.
CheckReport check_decomposition(const BallotSet& ballots, const RateReport& report,
                                const RatesConfig& cfg = {},
                                TiePolicy ties = TiePolicy::kHalf);

}  // namespace llull
