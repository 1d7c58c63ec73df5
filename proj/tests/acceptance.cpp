// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Deterministic seeds throughout.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "llull/rates.hpp"
#include "oracles.hpp"

using namespace llull;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  std::vector<std::string> warnings;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Mixed corpus: complete, ballot-generated (truncated, tied) and cyclic.
LlullMatrix corpus_matrix(gen::Rng& rng, std::size_t i, std::size_t max_n) {
  const std::size_t n = gen::pick(rng, 2, max_n);
  switch (i % 3) {
    case 0: return gen::complete_matrix(rng, n);
    case 1: return aggregate(gen::random_ballots(rng, n, gen::pick(rng, 1, 12)));
    default: return gen::cyclic_matrix(rng, n);
  }
}

LlullMatrix eps_matrix(double e) {
  return LlullMatrix::from_rows(gen::letters(3),
                                {{0, 1 - e, 1 - e}, {e, 0, 0.5}, {e, 0.5, 0}});
}

std::vector<double> vote_fractions(const BallotSet& b) {
  std::vector<double> f(b.options().size(), 0.0);
  for (const auto& ballot : b.ballots()) f[ballot.tiers[0][0]] += double(ballot.weight);
  for (auto& x : f) x /= double(b.total_weight());
  return f;
}

void single_choice(Outcome& out) {
  gen::Rng rng(101);
  double worst = 0;
  for (int i = 0; i < 200; ++i) {
    const auto b = gen::single_choice(rng, gen::pick(rng, 2, 8));
    const auto r = fraction_like_rates(aggregate(b));
    worst = std::max(worst, oracle::max_abs_diff(r.fraction.values, vote_fractions(b)));
  }
  out.require(worst <= 1e-9, "deviation " + fmt(worst));
  out.detail << "200 profiles, max |rate - fraction| = " << fmt(worst);
}

void unanimity(Outcome& out) {
  gen::Rng rng(102);
  double off = 0;
  int restricted = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = gen::pick(rng, 3, 8);
    const std::size_t k = gen::pick(rng, 1, n - 1);
    std::vector<OptionIndex> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    const Subset winners(all.begin(), all.begin() + long(k));
    const Subset rest(all.begin() + long(k), all.end());
    std::vector<Ballot> ballots;
    const std::size_t voters = gen::pick(rng, 1, 8);
    for (std::size_t v = 0; v < voters; ++v) {
      auto tiers = gen::random_tiers(rng, winners, {}, false);
      if (gen::uniform(rng) < 0.8) {
        for (auto& t : gen::random_tiers(rng, rest, {})) tiers.push_back(t);
      }
      ballots.push_back({tiers, gen::pick(rng, 1, 4)});
    }
    const BallotSet b(gen::letters(n), ballots);
    const auto r = fraction_like_rates(aggregate(b));
    for (OptionIndex y : rest) off = std::max(off, std::abs(r.fraction[y]));
    const auto d = check_decomposition(b, r);
    if (!d.ok()) {
      out.require(false, d.violations.front().check + ": " + d.violations.front().detail);
    }
    restricted += std::count(d.checked.begin(), d.checked.end(), "restricted_tally") > 0;
  }
  out.require(off <= 1e-12, "rate off the unanimous set " + fmt(off));
  out.detail << "100 profiles, max rate off X = " << fmt(off) << ", " << restricted
             << " restricted re-tallies within 1e-9";
}

void eigenvector_counterexample(Outcome& out) {
  double worst = 0;
  for (int k = 1; k <= 6; ++k) {
    const double e = std::pow(10.0, -k);
    const auto v = eigenvector_rates(eps_matrix(e));
    const double first = v[0] / v[1];
    const double expected = 8 * (1 - e) / (1 + std::sqrt(1 + 32 * e - 32 * e * e));
    worst = std::max(worst, std::abs(first - expected));
  }
  out.require(worst <= 1e-8, "eigenvector entry off by " + fmt(worst));
  const auto m = eps_matrix(1e-6);
  const auto eig = eigenvector_rates(m);
  const double eig_gap = oracle::max_abs_diff(eig.values, {4.0 / 6, 1.0 / 6, 1.0 / 6});
  RatesConfig cfg;
  // The fixed point contracts at a rate of about 1 - O(eps) here.
  cfg.solver.max_iter = 100000000;
  const auto r = fraction_like_rates(m, cfg);
  const double frac_gap = oracle::max_abs_diff(r.fraction.values, {1.0, 0.0, 0.0});
  out.require(eig_gap <= 1e-4, "eigenvector far from (4,1,1)/6: " + fmt(eig_gap));
  out.require(frac_gap <= 1e-4, "fraction-like far from (1,0,0): " + fmt(frac_gap));
  out.detail << "max entry error " << fmt(worst) << "; at eps=1e-6 eigenvector gap "
             << fmt(eig_gap) << ", fraction-like gap " << fmt(frac_gap) << " ("
             << r.diagnostics.iterations << " sweeps)";
}

void zermelo_solver(Outcome& out) {
  gen::Rng rng(104);
  double pair_err = 0;
  for (int i = 0; i < 100; ++i) {
    const double t = gen::uniform(rng, 0.01, 1), share = gen::uniform(rng, 0.01, 0.99);
    const auto m = LlullMatrix::from_rows(gen::letters(2), {{0, t * share}, {t * (1 - share), 0}});
    const auto s = solve_irreducible(m);
    pair_err = std::max(pair_err, std::abs(s.strengths[0] - m(0, 1) / m.turnout(0, 1)));
  }
  out.require(pair_err <= 1e-12, "N=2 closed form off by " + fmt(pair_err));

  double residual = 0, gradient = 0, eigen = -1e300, cut = 0;
  int solved = 0;
  while (solved < 200) {
    const std::size_t n = gen::pick(rng, 2, 10);
    const auto m = solved % 2 ? gen::positive_matrix(rng, n) : gen::sparse_matrix(rng, n, 0.25);
    if (!components(m).irreducible()) continue;
    ++solved;
    const auto s = solve_irreducible(m);
    const auto& phi = s.strengths.phi;
    residual = std::max(residual, stationarity_residual(m, phi));
    for (double g : log_likelihood_gradient(m, phi)) gradient = std::max(gradient, std::abs(g));
    eigen = std::max(eigen, oracle::tangent_max_eigenvalue(log_likelihood_hessian(m, phi)));
    for (OptionIndex a = 0; a < n; ++a) {
      cut = std::max(cut, std::abs(cut_identity_defect(m, phi, Subset{a})));
      for (OptionIndex b = a + 1; b < n; ++b) {
        cut = std::max(cut, std::abs(cut_identity_defect(m, phi, Subset{a, b})));
      }
    }
  }
  out.require(residual <= 1e-10, "residual " + fmt(residual));
  out.require(gradient <= 1e-8, "gradient " + fmt(gradient));
  out.require(eigen < 0, "tangent Hessian eigenvalue " + fmt(eigen));
  out.require(cut <= 1e-9, "subset identity " + fmt(cut));
  out.detail << "N=2 error " << fmt(pair_err) << "; 200 matrices: residual " << fmt(residual)
             << ", gradient " << fmt(gradient) << ", max tangent eigenvalue " << fmt(eigen)
             << ", subset identity " << fmt(cut);
}

void widest_path(Outcome& out) {
  gen::Rng rng(105);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const auto m = gen::sparse_matrix(rng, gen::pick(rng, 2, 6), gen::uniform(rng, 0, 0.8));
    const auto s = indirect_scores(m);
    const auto b = oracle::widest_paths(m);
    for (std::size_t x = 0; x < m.size(); ++x) {
      for (std::size_t y = 0; y < m.size(); ++y) {
        if (x != y) worst = std::max(worst, std::abs(s(x, y) - b(x, y)));
      }
    }
  }
  out.require(worst <= 1e-12, "mismatch " + fmt(worst));
  out.detail << "500 matrices, max difference " << fmt(worst);
}

void component_oracle(Outcome& out) {
  gen::Rng rng(106);
  int mismatches = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = gen::pick(rng, 1, 6);
    const auto m = gen::sparse_matrix(rng, n, gen::uniform(rng, 0.4, 0.95));
    const auto r = components(m);
    const auto reach = oracle::reachability(m);
    bool ok = true;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        ok = ok && (r.component_of[x] == r.component_of[y]) == oracle::same_component(reach, x, y);
      }
    }
    // Component i dominates j iff some member of i reaches some member of j.
    std::set<std::pair<std::size_t, std::size_t>> expected;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (reach[x][y] && !oracle::same_component(reach, x, y)) {
          expected.insert({r.component_of[x], r.component_of[y]});
        }
      }
    }
    const std::set<std::pair<std::size_t, std::size_t>> got(r.dominance.begin(), r.dominance.end());
    ok = ok && got == expected;
    std::optional<std::size_t> top;
    for (std::size_t c = 0; c < r.components.size(); ++c) {
      std::size_t beaten = 0;
      for (const auto& e : expected) beaten += e.first == c;
      if (beaten + 1 == r.components.size()) top = c;
    }
    ok = ok && top == r.top_dominant;
    mismatches += !ok;
  }
  out.require(mismatches == 0, std::to_string(mismatches) + " mismatching matrices");
  out.detail << "500 matrices, " << mismatches << " mismatches";
}

std::vector<LlullMatrix> projection_corpus() {
  gen::Rng rng(107);
  std::vector<LlullMatrix> corpus;
  for (std::size_t i = 0; i < 500; ++i) corpus.push_back(corpus_matrix(rng, i, 8));
  return corpus;
}

void projection_contract(Outcome& out, const std::vector<LlullMatrix>& corpus) {
  int not_clc = 0, not_fixed = 0, fixed_inputs = 0, failed_checks = 0;
  double drift = 0;
  for (const auto& m : corpus) {
    const auto p = clc_project(m);
    fixed_inputs += p.fixed_point;
    not_clc += !check_clc(p.matrix, p.order).ok();
    failed_checks += !verify_projection(m, p).ok();
    const auto again = clc_project(p.matrix);
    not_fixed += !again.fixed_point;
    drift = std::max(drift, oracle::max_abs_diff(again.matrix, p.matrix));
  }
  out.require(not_clc == 0, std::to_string(not_clc) + " outputs fail CLC");
  out.require(not_fixed == 0, std::to_string(not_fixed) + " outputs are not fixed points");
  out.require(drift <= 1e-12, "double projection drift " + fmt(drift));
  out.require(failed_checks == 0, std::to_string(failed_checks) + " fail structural checks");
  out.detail << "500 matrices (" << fixed_inputs << " already CLC), re-projection drift "
             << fmt(drift);
}

void compatibility(Outcome& out, const std::vector<LlullMatrix>& corpus) {
  std::size_t violations = 0;
  for (const auto& m : corpus) {
    const auto r = fraction_like_rates(m);
    violations += check_compatibility(r.projection, {m.options(), r.fraction.values, {}}).violations.size();
  }
  out.require(violations == 0, std::to_string(violations) + " violations");
  out.detail << "500 matrices, " << violations << " violations";
}

void majority(Outcome& out) {
  gen::Rng rng(109);
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = gen::pick(rng, 2, 8);
    const std::size_t k = gen::pick(rng, 1, n - 1);
    std::vector<OptionIndex> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    Subset winners(all.begin(), all.begin() + long(k));
    std::sort(winners.begin(), winners.end());
    const auto inside = subset_mask(winners, n);
    SquareArray v(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        if (inside[x] != inside[y]) {
          const std::size_t w = inside[x] ? x : y, l = inside[x] ? y : x;
          v(w, l) = gen::uniform(rng, 0.501, 1.0);
          v(l, w) = gen::uniform(rng, 0.0, 1.0 - v(w, l));
        } else {
          const double t = gen::uniform(rng), share = gen::uniform(rng);
          v(x, y) = gen::uniform(rng) < 0.2 ? 0 : t * share;
          v(y, x) = gen::uniform(rng) < 0.2 ? 0 : t * (1 - share);
        }
      }
    }
    const LlullMatrix m(gen::letters(n), v);
    violations += !check_majority(m, fraction_like_rates(m), winners);
  }
  out.require(violations == 0, std::to_string(violations) + " violations");
  out.detail << "200 instances, " << violations << " violations";
}

void monotonicity(Outcome& out) {
  gen::Rng rng(110);
  std::size_t violations = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = gen::pick(rng, 2, 7);
    const auto m = i % 2 ? gen::complete_matrix(rng, n) : gen::sparse_matrix(rng, n, 0.3);
    const OptionIndex a = gen::pick(rng, 0, n - 1);
    SquareArray v = m.scores();
    for (OptionIndex y = 0; y < n; ++y) {
      if (y == a || gen::uniform(rng) < 0.3) continue;
      if (gen::uniform(rng) < 0.5) {
        v(y, a) *= gen::uniform(rng);
      } else {
        v(a, y) += gen::uniform(rng) * (1.0 - v(a, y) - v(y, a));
      }
    }
    const LlullMatrix better(m.options(), v);
    violations += check_monotonicity(m, better, a).violations.size();
  }
  out.require(violations == 0, std::to_string(violations) + " violations");
  out.detail << "200 improvement pairs, " << violations << " violations";
}

// Rankings over the outsiders plus a placeholder that expands into the
// clone block, so the block stays autonomous.
BallotSet clone_profile(gen::Rng& rng, std::size_t outside, std::size_t k) {
  std::vector<OptionIndex> items(outside + 1);
  std::iota(items.begin(), items.end(), 0);
  std::vector<Ballot> ballots;
  const std::size_t voters = gen::pick(rng, 2, 9);
  for (std::size_t v = 0; v < voters; ++v) {
    std::vector<std::vector<OptionIndex>> expanded;
    for (auto tier : gen::random_tiers(rng, items, {0.2, 0.15})) {
      auto it = std::find(tier.begin(), tier.end(), OptionIndex(outside));
      if (it == tier.end()) {
        expanded.push_back(tier);
      } else if (tier.size() > 1) {
        tier.erase(it);
        for (std::size_t c = 0; c < k; ++c) tier.push_back(outside + c);
        expanded.push_back(tier);
      } else {
        std::vector<OptionIndex> clones(k);
        std::iota(clones.begin(), clones.end(), outside);
        for (auto& t : gen::random_tiers(rng, clones, {0.0, 0.2}, false)) expanded.push_back(t);
      }
    }
    ballots.push_back({expanded, gen::pick(rng, 1, 4)});
  }
  return BallotSet(gen::letters(outside + k), ballots);
}

void clone_consistency(Outcome& out) {
  gen::Rng rng(111);
  int checked = 0, skipped = 0, attempts = 0;
  std::size_t violations = 0;
  while (checked < 100 && attempts < 2000) {
    ++attempts;
    const std::size_t outside = gen::pick(rng, 1, 4), k = gen::pick(rng, 2, 3);
    const auto b = clone_profile(rng, outside, k);
    Subset clones(k);
    std::iota(clones.begin(), clones.end(), outside);
    const auto r = check_clone_consistency(b, clones, "r");
    if (r.skipped) {
      ++skipped;
      continue;
    }
    ++checked;
    if (!r.ok() && violations == 0) {
      out.detail << "[" << r.violations.front().detail << "] ";
    }
    violations += r.violations.size();
  }
  out.require(checked == 100, "only " + std::to_string(checked) + " profiles met the hypothesis");
  out.require(violations == 0, std::to_string(violations) + " violations");
  out.detail << checked << " profiles, " << violations << " violations, " << skipped
             << " skipped (support hypothesis failed)";
}

void continuity(Outcome& out) {
  gen::Rng rng(112);
  RatesConfig cfg;
  // Perturbing a reducible matrix leaves links of size delta, and the fixed
  // point then needs on the order of 10/delta sweeps.
  cfg.solver.max_iter = 100000000;
  int hard = 0, soft = 0;
  double worst_final = 0, worst_ratio = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto m = corpus_matrix(rng, i, 6);
    const std::size_t n = m.size();
    SquareArray dir(n);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) dir(x, y) = gen::uniform(rng, -1, 1);
    }
    const auto base = fraction_like_rates(m, cfg).fraction.values;
    std::vector<double> deltas;
    for (int k = 4; k <= 20; ++k) {
      const double delta = std::ldexp(1.0, -k);
      // Multiplicative, so zero scores stay zero; rescaled into the
      // feasible region where a pair would exceed 1.
      SquareArray v(n);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
          const double a = m(x, y) * (1 + delta * dir(x, y));
          const double b = m(y, x) * (1 + delta * dir(y, x));
          const double scale = std::max(1.0, a + b);
          v(x, y) = a / scale;
          v(y, x) = b / scale;
        }
      }
      const auto moved = fraction_like_rates(LlullMatrix(m.options(), v), cfg).fraction.values;
      const double d = oracle::max_abs_diff(base, moved);
      if (!deltas.empty() && d > deltas.back() + 1e-8) ++hard;
      if (delta <= 1e-4 && d > 10 * delta + 1e-8) ++soft;
      deltas.push_back(d);
    }
    worst_final = std::max(worst_final, deltas.back());
    const double ratio = deltas.back() / (deltas.front() + 1e-300);
    if (deltas.front() > 1e-8) worst_ratio = std::max(worst_ratio, ratio);
    // Sixteen halvings must shrink the change by a clear factor.
    if (deltas.back() > deltas.front() / 16 + 1e-8) ++hard;
  }
  out.require(hard == 0, std::to_string(hard) + " sweeps not shrinking to 0");
  if (soft > 0) {
    out.warnings.push_back(std::to_string(soft) + " steps exceed 10*delta + 1e-8");
  }
  out.detail << "50 matrices, delta = 2^-4..2^-20: final change " << fmt(worst_final)
             << ", worst shrink ratio " << fmt(worst_ratio) << ", " << soft
             << " steps above 10*delta";
}

}  // namespace

int main() {
  const auto corpus = projection_corpus();
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"single-choice rates equal vote fractions", single_choice},
      {"unanimously preferred sets", unanimity},
      {"eigenvector counterexample", eigenvector_counterexample},
      {"strength solver", zermelo_solver},
      {"widest-path oracle", widest_path},
      {"component oracle", component_oracle},
      {"projection contract", [&](Outcome& o) { projection_contract(o, corpus); }},
      {"strength / mean score compatibility", [&](Outcome& o) { compatibility(o, corpus); }},
      {"majority principle", majority},
      {"monotonicity", monotonicity},
      {"clone consistency", clone_consistency},
      {"continuity", continuity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "exception: " << e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %-40s %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.str().c_str(), secs);
    for (const auto& w : out.warnings) std::printf("WARN %2zu %s\n", i + 1, w.c_str());
    failed += !out.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
