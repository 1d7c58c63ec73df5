#pragma once

#include "llull/matrix.hpp"
#include "llull/report.hpp"
#include "llull/structure.hpp"

namespace llull {

struct ProjectionResult {
  LlullMatrix matrix;
  AdmissibleOrder order;
  // The input already had CLC structure and is returned as is.
  bool fixed_point = false;
};

// Maps any Llull matrix to one with CLC structure. Matrices that already
// have an admissible order come back unchanged.
//
// Otherwise: options are ordered by the strict relation sigma_xy > sigma_yx
// on indirect scores (ties by mean score, then index); consecutive margins
// are the cut minima of indirect margins; consecutive turnouts are the input
// ones clipped to the feasible band; the rest of the matrix follows from the
// max/min chain rules. Throws kProjectionPostconditionViolated if the result
// fails check_clc.
ProjectionResult clc_project(const LlullMatrix& m, const StructureConfig& cfg = {});

// Re-derives the structural consequences of CLC on r.matrix: monotonicity,
// order sorted by mean score, ties and strict preferences agreeing with mean
// scores, and the top dominant component scoring strictly higher.
CheckReport verify_projection(const LlullMatrix& m, const ProjectionResult& r,
                              const StructureConfig& cfg = {});

}  // namespace llull
