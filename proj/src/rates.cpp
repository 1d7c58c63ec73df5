#include "llull/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace llull {
namespace {

constexpr double kRateTie = 1e-9;
constexpr double kNoise = 1e-12;
constexpr double kFlatStrength = 1e-8;
constexpr double kPowerTol = 1e-12;
constexpr std::size_t kPowerCap = 1000000;

std::string pair_name(const OptionSet& o, OptionIndex x, OptionIndex y) {
  return "(" + o.label(x) + ", " + o.label(y) + ")";
}

// +1 when x ranks above y, -1 below, 0 tied. Fraction-like rates first,
// rank-like rates among options with zero rate.
int compare(const RateReport& r, OptionIndex x, OptionIndex y) {
  const double fx = r.fraction[x], fy = r.fraction[y];
  if (fx == 0.0 && fy == 0.0) {
    const double rx = r.rank_like[x], ry = r.rank_like[y];
    if (std::abs(rx - ry) <= kRateTie) return 0;
    return rx < ry ? 1 : -1;
  }
  if (fx == 0.0) return -1;
  if (fy == 0.0) return 1;
  if (std::abs(fx - fy) <= kRateTie) return 0;
  return fx > fy ? 1 : -1;
}

const char* relation_name(int c) { return c > 0 ? "above" : c < 0 ? "below" : "tied with"; }

}  // namespace

RateReport fraction_like_rates(const LlullMatrix& m, const RatesConfig& cfg) {
  const std::size_t n = m.size();
  ProjectionResult projection = clc_project(m, cfg.structure);
  RateReport report{{m.options(), {}, RateKind::kFraction, std::nullopt},
                    mean_ranks(projection.matrix),
                    projection,
                    {},
                    {}};
  report.rank_like.kind = RateKind::kMeanRank;
  if (n == 1) {
    report.fraction.values = {1.0};
    report.fraction.flag = Errc::kSingleOption;
    return report;
  }
  if (projection.matrix.is_vanishing()) {
    report.fraction.values.assign(n, 1.0 / static_cast<double>(n));
    report.warnings.push_back(kNoInformation);
    return report;
  }
  Solution sol = solve(projection.matrix, cfg.solver);
  report.fraction.values = std::move(sol.strengths.phi);
  report.diagnostics = std::move(sol.diagnostics);
  return report;
}

RateVector eigenvector_rates(const LlullMatrix& m) {
  const std::size_t n = m.size();
  if (n > 1 && m.is_vanishing()) {
    throw Error(Errc::kInvalidArgument, "eigenvector rates need a non-vanishing matrix");
  }
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), next(n);
  for (std::size_t iter = 0; iter < kPowerCap; ++iter) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.5 * x[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) s += m(i, j) * x[j];
      }
      next[i] = s;
      total += s;
    }
    if (!(total > 0.0) || !std::isfinite(total)) break;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= total;
      change = std::max(change, std::abs(next[i] - x[i]));
    }
    x.swap(next);
    if (change <= kPowerTol) return {m.options(), x, RateKind::kEigen, std::nullopt};
  }
  throw Error(Errc::kPowerIterationDiverged, "power iteration did not settle");
}

CheckReport check_compatibility(const ProjectionResult& p, const Strengths& phi,
                           const StructureConfig& cfg) {
  CheckReport report;
  report.checked = {"strength_implies_score", "score_implies_strength"};
  const auto rho = mean_preference_scores(p.matrix);
  const auto& o = p.matrix.options();
  for (OptionIndex x = 0; x < o.size(); ++x) {
    for (OptionIndex y = 0; y < o.size(); ++y) {
      if (x == y) continue;
      const double dphi = phi[x] - phi[y];
      const double drho = rho[x] - rho[y];
      if (dphi > kFlatStrength && drho <= kNoise) {
        report.fail("strength_implies_score",
                    pair_name(o, x, y) + ": stronger without higher mean score");
      }
      if (drho > cfg.tau && !(dphi > 0.0) && !(phi[x] == 0.0 && phi[y] == 0.0)) {
        report.fail("score_implies_strength",
                    pair_name(o, x, y) + ": higher mean score without being stronger");
      }
    }
  }
  return report;
}

bool check_majority(const LlullMatrix& m, const RateReport& report,
                    std::span<const OptionIndex> winners) {
  const std::size_t n = m.size();
  const auto inside = subset_mask(winners, n);
  if (winners.size() == n) {
    throw Error(Errc::kHypothesisNotSatisfied, "majority set has no outsiders");
  }
  for (OptionIndex x : winners) {
    for (OptionIndex y = 0; y < n; ++y) {
      if (!inside[y] && !(m(x, y) > 0.5)) {
        throw Error(Errc::kHypothesisNotSatisfied,
                    pair_name(m.options(), x, y) + " has no majority");
      }
    }
  }
  for (OptionIndex x : winners) {
    for (OptionIndex y = 0; y < n; ++y) {
      if (inside[y]) continue;
      const double fx = report.fraction[x], fy = report.fraction[y];
      if (!(fx > fy) && !(fx == 0.0 && fy == 0.0)) return false;
    }
  }
  return true;
}

CheckReport check_monotonicity(const LlullMatrix& m, const LlullMatrix& improved,
                               OptionIndex a, const RatesConfig& cfg) {
  const std::size_t n = m.size();
  if (improved.options() != m.options() || a >= n) {
    throw Error(Errc::kNotAnImprovement, "matrices are over different options");
  }
  for (OptionIndex x = 0; x < n; ++x) {
    for (OptionIndex y = 0; y < n; ++y) {
      if (x == y) continue;
      const bool ok = x == a   ? improved(x, y) >= m(x, y)
                      : y == a ? improved(x, y) <= m(x, y)
                               : improved(x, y) == m(x, y);
      if (!ok) {
        throw Error(Errc::kNotAnImprovement,
                    "score " + pair_name(m.options(), x, y) + " changed the wrong way");
      }
    }
  }
  CheckReport report;
  report.checked.push_back("stays_below");
  const auto before = fraction_like_rates(m, cfg);
  const auto after = fraction_like_rates(improved, cfg);
  for (OptionIndex y = 0; y < n; ++y) {
    if (y == a) continue;
    if (before.fraction[a] - before.fraction[y] > kRateTie &&
        after.fraction[y] - after.fraction[a] > kRateTie) {
      report.fail("stays_below", m.options().label(y) + " overtook " +
                                     m.options().label(a) + " after the improvement");
    }
  }
  return report;
}

CheckReport check_clone_consistency(const BallotSet& ballots,
                                    std::span<const OptionIndex> clones,
                                    const std::string& representative,
                                    const RatesConfig& cfg, TiePolicy ties) {
  const OptionSet& o = ballots.options();
  const std::size_t n = o.size();
  if (!is_autonomous(ballots, clones)) {
    throw Error(Errc::kNotAutonomous, "clone set is not autonomous");
  }
  const auto is_clone = subset_mask(clones, n);
  CheckReport report;
  const RateReport before = fraction_like_rates(aggregate(ballots, ties), cfg);

  bool clones_in_support = true, support_in_clones = true;
  for (OptionIndex x = 0; x < n; ++x) {
    const bool positive = before.fraction[x] > 0.0;
    if (is_clone[x] && !positive) clones_in_support = false;
    if (!is_clone[x] && !positive) support_in_clones = false;
  }
  // support_in_clones: every option outside the support is a clone.
  if (!clones_in_support && !support_in_clones) {
    report.skipped = true;
    report.note(std::string(errc_name(Errc::kSupportHypothesisFailed)),
                "clones straddle the support of the rates");
    return report;
  }

  report.checked.push_back("interval");
  for (OptionIndex z = 0; z < n; ++z) {
    if (is_clone[z]) continue;
    bool above = false, below = false;
    for (OptionIndex c : clones) {
      const int rel = compare(before, z, c);
      above = above || rel > 0;
      below = below || rel < 0;
    }
    if (above && below) {
      report.fail("interval", o.label(z) + " sits between two clones");
    }
  }

  report.checked.push_back("contraction");
  const BallotSet contracted = contract(ballots, clones, representative);
  const RateReport after = fraction_like_rates(aggregate(contracted, ties), cfg);
  const OptionSet& co = contracted.options();
  const OptionIndex rep = co.index_of(representative);
  for (OptionIndex x = 0; x < n; ++x) {
    if (is_clone[x]) continue;
    const OptionIndex cx = co.index_of(o.label(x));
    for (OptionIndex y = x + 1; y < n; ++y) {
      if (is_clone[y]) continue;
      const int was = compare(before, x, y);
      const int now = compare(after, cx, co.index_of(o.label(y)));
      if (was != now) {
        report.fail("contraction", pair_name(o, x, y) + " was " + relation_name(was) +
                                       ", now " + relation_name(now));
      }
    }
    std::set<int> allowed;
    for (OptionIndex c : clones) allowed.insert(compare(before, x, c));
    const int now = compare(after, cx, rep);
    if (!allowed.contains(now)) {
      report.fail("contraction", o.label(x) + " now " + relation_name(now) + " " +
                                     representative);
    }
  }
  return report;
}

std::vector<Subset> unanimous_sets(const LlullMatrix& m) {
  const std::size_t n = m.size();
  // A member of such a set X beats n - |X| options outright, an outsider at
  // most n - |X| - 1; so X is a prefix when sorted by outright wins.
  std::vector<std::size_t> wins(n, 0);
  for (OptionIndex x = 0; x < n; ++x) {
    for (OptionIndex y = 0; y < n; ++y) {
      if (x != y && m(x, y) == 1.0) ++wins[x];
    }
  }
  std::vector<OptionIndex> by_wins(n);
  std::iota(by_wins.begin(), by_wins.end(), 0);
  std::stable_sort(by_wins.begin(), by_wins.end(),
                   [&](OptionIndex a, OptionIndex b) { return wins[a] > wins[b]; });
  std::vector<Subset> sets;
  for (std::size_t k = 1; k < n; ++k) {
    bool unanimous = true;
    for (std::size_t i = 0; i < k && unanimous; ++i) {
      for (std::size_t j = k; j < n && unanimous; ++j) {
        unanimous = m(by_wins[i], by_wins[j]) == 1.0;
      }
    }
    if (!unanimous) continue;
    Subset s(by_wins.begin(), by_wins.begin() + static_cast<long>(k));
    std::sort(s.begin(), s.end());
    sets.push_back(std::move(s));
  }
  return sets;
}

CheckReport check_decomposition(const BallotSet& ballots, const RateReport& report,
                                const RatesConfig& cfg, TiePolicy ties) {
  const OptionSet& o = ballots.options();
  const std::size_t n = o.size();
  const LlullMatrix m = aggregate(ballots, ties);
  const auto sets = unanimous_sets(m);
  CheckReport out;

  out.checked.push_back("vanish_outside");
  for (const auto& x : sets) {
    for (OptionIndex y : complement(x, n)) {
      if (std::abs(report.fraction[y]) > kNoise) {
        out.fail("vanish_outside", o.label(y) + " rated " +
                                       std::to_string(report.fraction[y]) +
                                       " outside a unanimously preferred set");
      }
    }
  }

  if (!sets.empty()) {
    out.checked.push_back("restricted_tally");
    const Subset& minimal = sets.front();
    const auto sub = fraction_like_rates(aggregate(restrict_ballots(ballots, minimal), ties), cfg);
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      const double full = report.fraction[minimal[i]];
      if (std::abs(full - sub.fraction[i]) > kRateTie) {
        out.fail("restricted_tally",
                 o.label(minimal[i]) + " rated " + std::to_string(full) +
                     " but " + std::to_string(sub.fraction[i]) + " in the restricted tally");
      }
    }
  }

  if (ballots.is_complete()) {
    out.checked.push_back("converse");
    Subset support;
    for (OptionIndex x = 0; x < n; ++x) {
      if (report.fraction[x] > 0.0) support.push_back(x);
    }
    Subset expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    if (!sets.empty()) expected = sets.front();
    if (support != expected) {
      out.fail("converse", "support of the rates is not the smallest unanimously preferred set");
    }
  }
  return out;
}

}  // namespace llull
