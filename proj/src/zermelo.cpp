#include "llull/zermelo.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "llull/structure.hpp"

namespace llull {
namespace {

constexpr double kLikelihoodSlack = 1e-13;

void require_positive(const LlullMatrix& m, std::span<const double> phi) {
  if (phi.size() != m.size()) {
    throw Error(Errc::kInvalidArgument, "strength vector has wrong length");
  }
  for (std::size_t x = 0; x < phi.size(); ++x) {
    if (!(phi[x] > 0.0)) {
      throw Error(Errc::kNonPositiveStrength,
                  "strength of '" + m.options().label(x) + "' is not positive");
    }
  }
}

std::vector<double> row_sums(const LlullMatrix& m) {
  std::vector<double> w(m.size(), 0.0);
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (y != x) w[x] += m(x, y);
    }
  }
  return w;
}

void normalize(std::vector<double>& phi) {
  double total = 0.0;
  for (double p : phi) total += p;
  for (double& p : phi) p /= total;
}

Subset all_options(std::size_t n) {
  Subset s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", r);
  return buf;
}

}  // namespace

MaxIterExceeded::MaxIterExceeded(Solution best)
    : Error(Errc::kMaxIterExceeded,
            "fixed point did not converge after " +
                std::to_string(best.diagnostics.iterations) +
                " iterations (residual " + format_residual(best.diagnostics.residual) +
                ")"),
      best_(std::move(best)) {}

double log_likelihood(const LlullMatrix& m, std::span<const double> phi) {
  require_positive(m, phi);
  double total = 0.0;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      const double vxy = m(x, y), vyx = m(y, x);
      if (vxy == 0.0 && vyx == 0.0) continue;
      total += vxy * std::log(phi[x]) + vyx * std::log(phi[y]) -
               (vxy + vyx) * std::log(phi[x] + phi[y]);
    }
  }
  return total;
}

std::vector<double> log_likelihood_gradient(const LlullMatrix& m,
                                            std::span<const double> phi) {
  require_positive(m, phi);
  std::vector<double> g(m.size(), 0.0);
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (y == x) continue;
      g[x] += m(x, y) / phi[x] - m.turnout(x, y) / (phi[x] + phi[y]);
    }
  }
  return g;
}

SquareArray log_likelihood_hessian(const LlullMatrix& m, std::span<const double> phi) {
  require_positive(m, phi);
  const std::size_t n = m.size();
  SquareArray h(n);
  for (std::size_t x = 0; x < n; ++x) {
    double diag = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      const double s = phi[x] + phi[y];
      const double off = m.turnout(x, y) / (s * s);
      h(x, y) = off;
      diag -= m(x, y) / (phi[x] * phi[x]) - off;
    }
    h(x, x) = diag;
  }
  return h;
}

double stationarity_residual(const LlullMatrix& m, std::span<const double> phi,
                             std::span<const OptionIndex> rows) {
  double worst = 0.0;
  for (OptionIndex x : rows) {
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (y == x) continue;
      const double s = phi[x] + phi[y];
      if (s > 0.0) lhs += m.turnout(x, y) * phi[x] / s;
      rhs += m(x, y);
    }
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double stationarity_residual(const LlullMatrix& m, std::span<const double> phi) {
  return stationarity_residual(m, phi, all_options(m.size()));
}

double cut_identity_defect(const LlullMatrix& m, std::span<const double> phi,
                           std::span<const OptionIndex> subset) {
  const auto inside = subset_mask(subset, m.size());
  double total = 0.0;
  for (OptionIndex x : subset) {
    for (std::size_t y = 0; y < m.size(); ++y) {
      if (inside[y]) continue;
      const double s = phi[x] + phi[y];
      if (s > 0.0) total += m.turnout(x, y) * phi[x] / s;
      total -= m(x, y);
    }
  }
  return total;
}

bool tangent_hessian_negative_definite(const SquareArray& hessian) {
  const std::size_t n = hessian.size();
  if (n < 2) return true;
  // Basis e_i - e_{n-1} of the tangent space; definiteness is preserved
  // under congruence, so orthonormality is not needed.
  Eigen::MatrixXd reduced(n - 1, n - 1);
  const std::size_t last = n - 1;
  for (std::size_t i = 0; i < last; ++i) {
    for (std::size_t j = 0; j < last; ++j) {
      reduced(static_cast<long>(i), static_cast<long>(j)) =
          -(hessian(i, j) - hessian(i, last) - hessian(last, j) +
            hessian(last, last));
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(reduced);
  return llt.info() == Eigen::Success;
}

Solution solve_irreducible(const LlullMatrix& m, const SolverConfig& cfg) {
  const std::size_t n = m.size();
  if (n < 2) throw Error(Errc::kInvalidArgument, "solve_irreducible needs N >= 2");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
    throw Error(Errc::kInvalidArgument, "solver needs tol > 0 and max_iter >= 1");
  }
  if (!components(m).irreducible()) {
    throw Error(Errc::kNotIrreducible, "matrix is reducible");
  }

  const auto wins = row_sums(m);
  const auto rows = all_options(n);
  std::vector<double> phi(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);

  Solution sol{{m.options(), {}, rows}, {}};
  SolveDiagnostics& diag = sol.diagnostics;
  double previous = -std::numeric_limits<double>::infinity();
  std::vector<double> best = phi;
  double best_residual = std::numeric_limits<double>::infinity();

  std::size_t iter = 0;
  for (;; ++iter) {
    const double residual = stationarity_residual(m, phi, rows);
    const double loglik = log_likelihood(m, phi);
    if (loglik < previous - kLikelihoodSlack) diag.likelihood_decreased = true;
    previous = loglik;
    if (cfg.record_trace) diag.trace.push_back({iter, loglik, residual});
    if (residual < best_residual) {
      best_residual = residual;
      best = phi;
    }
    if (residual <= cfg.tol) break;
    if (iter == cfg.max_iter) {
      diag.iterations = iter;
      diag.residual = best_residual;
      diag.log_likelihood = log_likelihood(m, best);
      sol.strengths.phi = best;
      throw MaxIterExceeded(std::move(sol));
    }
    for (std::size_t x = 0; x < n; ++x) {
      double denom = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        if (y != x) denom += m.turnout(x, y) / (phi[x] + phi[y]);
      }
      next[x] = wins[x] / denom;
    }
    normalize(next);
    phi.swap(next);
  }

  diag.iterations = iter;
  diag.residual = stationarity_residual(m, phi, rows);
  diag.log_likelihood = log_likelihood(m, phi);
  diag.hessian_definite =
      tangent_hessian_negative_definite(log_likelihood_hessian(m, phi));
  sol.strengths.phi = std::move(phi);
  return sol;
}

Solution solve(const LlullMatrix& m, const SolverConfig& cfg) {
  const std::size_t n = m.size();
  const auto report = components(m);
  if (!report.top_dominant) {
    throw Error(Errc::kNoTopDominantComponent,
                "matrix has " + std::to_string(report.components.size()) +
                    " irreducible components and none dominates all others");
  }
  const Subset& top = report.components[*report.top_dominant];
  if (top.size() == n) return solve_irreducible(m, cfg);

  Solution sol{{m.options(), std::vector<double>(n, 0.0), top}, {}};
  if (top.size() == 1) {
    sol.strengths.phi[top.front()] = 1.0;
    sol.diagnostics.residual = stationarity_residual(m, sol.strengths.phi, top);
    return sol;
  }
  const LlullMatrix sub = restrict(m, top);
  Solution inner = [&] {
    try {
      return solve_irreducible(sub, cfg);
    } catch (const MaxIterExceeded& e) {
      Solution best{{m.options(), std::vector<double>(n, 0.0), top},
                    e.best().diagnostics};
      for (std::size_t i = 0; i < top.size(); ++i) {
        best.strengths.phi[top[i]] = e.best().strengths.phi[i];
      }
      throw MaxIterExceeded(std::move(best));
    }
  }();
  for (std::size_t i = 0; i < top.size(); ++i) {
    sol.strengths.phi[top[i]] = inner.strengths.phi[i];
  }
  sol.diagnostics = std::move(inner.diagnostics);
  sol.diagnostics.residual = stationarity_residual(m, sol.strengths.phi, top);
  return sol;
}

}  // namespace llull
