#include "llull/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace llull {
namespace {

// Greedy topological sort of x -> y iff sigma_xy > sigma_yx. Among the
// options with no remaining predecessor, the highest mean score wins, then
// the lowest index.
AdmissibleOrder strict_sigma_order(const LlullMatrix& m, const IndirectScores& s) {
  const std::size_t n = m.size();
  const auto rho = mean_preference_scores(m);
  std::vector<bool> placed(n, false);
  AdmissibleOrder order;
  order.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<OptionIndex> pick;
    for (OptionIndex x = 0; x < n; ++x) {
      if (placed[x]) continue;
      bool blocked = false;
      for (OptionIndex y = 0; y < n && !blocked; ++y) {
        blocked = !placed[y] && y != x && s(y, x) > s(x, y);
      }
      if (blocked) continue;
      if (!pick || rho[x] > rho[*pick]) pick = x;
    }
    if (!pick) {
      throw Error(Errc::kInternalError,
                  "indirect-score preference is not transitive");
    }
    placed[*pick] = true;
    order.push_back(*pick);
  }
  return order;
}

std::string describe(const LlullMatrix& m, const ClcVerdict& v) {
  std::ostringstream out;
  out << "projected matrix fails CLC";
  if (!v.witnesses.empty()) {
    const auto& w = v.witnesses.front();
    out << ": " << clc_condition_name(w.condition) << " at ("
        << m.options().label(w.x) << ", " << m.options().label(w.y) << ", "
        << m.options().label(w.z) << "), excess " << w.excess;
  }
  return out.str();
}

}  // namespace

ProjectionResult clc_project(const LlullMatrix& m, const StructureConfig& cfg) {
  const std::size_t n = m.size();
  const auto sigma = indirect_scores(m);
  const AdmissibleOrder order = strict_sigma_order(m, sigma);

  if (check_clc(m, order, cfg, true).ok()) return {m, order, true};
  try {
    if (auto found = find_admissible_order(m, cfg)) return {m, *found, true};
  } catch (const Error& e) {
    // Too many tied scores to rule CLC out by search; the construction
    // below still produces a valid projection.
    if (e.code() != Errc::kTieGroupTooLarge) throw;
  }

  const std::size_t links = n - 1;
  std::vector<double> margin(links), turnout(links);
  for (std::size_t k = 0; k < links; ++k) {
    double cut = 1.0;
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        const OptionIndex x = order[i], y = order[j];
        cut = std::min(cut, sigma(x, y) - sigma(y, x));
      }
    }
    margin[k] = std::max(0.0, cut);
  }

  // A chain-generated matrix is CLC iff m_k <= t_k <= 1 and
  // 0 <= t_k - t_{k+1} <= m_k + m_{k+1}. Clip the input turnouts into that
  // band, front to back; the band is never empty.
  std::vector<double> floor(links);
  double running = 0.0;
  for (std::size_t k = links; k-- > 0;) {
    running = std::max(running, margin[k]);
    floor[k] = running;
  }
  for (std::size_t k = 0; k < links; ++k) {
    const double wanted = m.turnout(order[k], order[k + 1]);
    double lo = floor[k], hi = 1.0;
    if (k > 0) {
      hi = turnout[k - 1];
      lo = std::max(lo, turnout[k - 1] - margin[k - 1] - margin[k]);
    }
    turnout[k] = std::clamp(wanted, lo, hi);
  }

  SquareArray v(n);
  for (std::size_t i = 0; i < n; ++i) {
    double up = 0.0, down = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t k = j - 1;
      up = std::max(up, (turnout[k] + margin[k]) / 2);
      down = std::min(down, (turnout[k] - margin[k]) / 2);
      v(order[i], order[j]) = up;
      v(order[j], order[i]) = std::max(0.0, down);
    }
  }

  ProjectionResult result{LlullMatrix(m.options(), v), order, false};
  const auto verdict = check_clc(result.matrix, order, cfg);
  if (!verdict.ok()) {
    throw Error(Errc::kProjectionPostconditionViolated, describe(result.matrix, verdict));
  }
  return result;
}

CheckReport verify_projection(const LlullMatrix& m, const ProjectionResult& r,
                              const StructureConfig& cfg) {
  CheckReport report;
  const LlullMatrix& p = r.matrix;
  const std::size_t n = p.size();
  const auto& labels = p.options();
  if (p.options() != m.options()) {
    report.fail("options", "projection is over a different option set");
    return report;
  }
  const double tau = cfg.tau;
  const double rho_slack = tau * static_cast<double>(std::max<std::size_t>(n, 1));
  const auto rho = mean_preference_scores(p);

  report.checked.push_back("clc");
  const auto verdict = check_clc(p, r.order, cfg);
  if (!verdict.ok()) report.fail("clc", describe(p, verdict));
  report.checked.push_back("monotone");
  if (!verdict.monotone) report.fail("monotone", "scores or turnouts not monotone");

  report.checked.push_back("order_by_mean_score");
  for (std::size_t k = 0; k + 1 < r.order.size(); ++k) {
    const OptionIndex x = r.order[k], y = r.order[k + 1];
    if (rho[y] - rho[x] > rho_slack) {
      report.fail("order_by_mean_score",
                  labels.label(y) + " follows " + labels.label(x) +
                      " but has a higher mean score");
    }
  }

  report.checked.push_back("ties_agree");
  report.checked.push_back("strict_agree");
  for (OptionIndex x = 0; x < n; ++x) {
    for (OptionIndex y = 0; y < n; ++y) {
      if (x == y) continue;
      const double dm = p.margin(x, y);
      const double dr = rho[x] - rho[y];
      const std::string pair = "(" + labels.label(x) + ", " + labels.label(y) + ")";
      if (x < y && std::abs(dm) <= tau && std::abs(dr) > rho_slack) {
        report.fail("ties_agree", pair + " tie in scores but not in mean score");
      }
      if (dm > tau && !(dr > 0)) {
        report.fail("strict_agree", pair + " preferred but mean score not higher");
      }
      if (dr > rho_slack && !(dm > 0)) {
        report.fail("strict_agree", pair + " higher mean score but not preferred");
      }
    }
  }

  report.checked.push_back("top_component_higher");
  report.checked.push_back("top_component_positive");
  if (!p.is_vanishing()) {
    const auto comps = components(p);
    if (!comps.top_dominant) {
      report.fail("top_component_higher", "no top dominant component");
    } else {
      const auto& top = comps.components[*comps.top_dominant];
      const auto inside = subset_mask(top, n);
      for (OptionIndex x : top) {
        for (OptionIndex y = 0; y < n; ++y) {
          if (y != x && !(p(x, y) > 0)) {
            report.fail("top_component_positive",
                        labels.label(x) + " in top component scores 0 against " +
                            labels.label(y));
          }
          if (!inside[y] && !(rho[x] > rho[y])) {
            report.fail("top_component_higher",
                        labels.label(x) + " in top component does not outscore " +
                            labels.label(y));
          }
        }
      }
    }
  }
  return report;
}

}  // namespace llull
