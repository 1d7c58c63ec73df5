#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "llull/matrix.hpp"

namespace llull {

// Normalized strengths; phi sums to 1 and vanishes outside `support`.
struct Strengths {
  OptionSet options;
  std::vector<double> phi;
  Subset support;

  double operator[](OptionIndex i) const { return phi[i]; }
  std::size_t size() const noexcept { return phi.size(); }
};

struct SolverConfig {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
  bool record_trace = false;
};

struct TracePoint {
  std::size_t iteration;
  double log_likelihood;
  double residual;
};

struct SolveDiagnostics {
  std::size_t iterations = 0;
  // Max-norm of the stationarity defect of the returned strengths.
  double residual = 0;
  double log_likelihood = 0;
  // Negative definiteness of the Hessian on the tangent space of the
  // simplex, evaluated on the support.
  std::optional<bool> hessian_definite;
  // Set when the likelihood decreased by more than 1e-13 between sweeps.
  bool likelihood_decreased = false;
  std::vector<TracePoint> trace;
};

struct Solution {
  Strengths strengths;
  SolveDiagnostics diagnostics;
};

// Raised when the fixed point does not reach the tolerance. Carries the last
// iterate so callers can still inspect it.
class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(Solution best);
  const Solution& best() const noexcept { return best_; }

 private:
  Solution best_;
};

// log F(phi) = sum over pairs of v_xy log phi_x + v_yx log phi_y
//              - t_xy log(phi_x + phi_y). Requires phi > 0.
double log_likelihood(const LlullMatrix& m, std::span<const double> phi);

// d log F / d phi_x = sum_{y != x} (v_xy / phi_x - t_xy / (phi_x + phi_y)).
std::vector<double> log_likelihood_gradient(const LlullMatrix& m,
                                            std::span<const double> phi);

// Second derivatives of log F; symmetric.
SquareArray log_likelihood_hessian(const LlullMatrix& m, std::span<const double> phi);

// max_x | sum_{y != x} t_xy phi_x / (phi_x + phi_y) - sum_{y != x} v_xy |,
// with x ranging over `rows` and y over every option where phi_x + phi_y > 0.
double stationarity_residual(const LlullMatrix& m, std::span<const double> phi,
                             std::span<const OptionIndex> rows);
double stationarity_residual(const LlullMatrix& m, std::span<const double> phi);

// Sum of the stationarity equations over W, which telescopes to the cut sum
//   sum_{x in W, y not in W} (t_xy phi_x / (phi_x + phi_y) - v_xy).
// Returns that cut sum; it vanishes at the solution for every W inside the
// support.
double cut_identity_defect(const LlullMatrix& m, std::span<const double> phi,
                           std::span<const OptionIndex> subset);

// Cholesky test: true iff the Hessian restricted to
// {psi : sum psi = 0} is negative definite.
bool tangent_hessian_negative_definite(const SquareArray& hessian);

// Zermelo's fixed point for an irreducible matrix (N >= 2):
//   phi_x <- (sum_y v_xy) / (sum_y t_xy / (phi_x + phi_y)), then renormalize.
// Starts from the uniform vector; stops when the residual is <= cfg.tol.
// Throws kNotIrreducible, kInvalidArgument or MaxIterExceeded.
Solution solve_irreducible(const LlullMatrix& m, const SolverConfig& cfg = {});

// General case: requires a top dominant irreducible component X; strengths
// vanish outside X and solve the restricted system on X.
// Throws kNoTopDominantComponent.
Solution solve(const LlullMatrix& m, const SolverConfig& cfg = {});

}  // namespace llull
