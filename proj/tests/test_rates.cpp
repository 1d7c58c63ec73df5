#include <cmath>
#include <numeric>

#include "doctest.h"
#include "generators.hpp"
#include "llull/rates.hpp"
#include "oracles.hpp"

using namespace llull;

namespace {
LlullMatrix rows(std::vector<std::vector<double>> r) {
  return LlullMatrix::from_rows(gen::letters(r.size()), r);
}
}  // namespace

TEST_CASE("single choice rates are the vote fractions") {
  const auto r = fraction_like_rates(rows({{0, .5, .5}, {.3, 0, .3}, {.2, .2, 0}}));
  CHECK(oracle::max_abs_diff(r.fraction.values, {0.5, 0.3, 0.2}) <= 1e-10);
  CHECK(r.warnings.empty());
  CHECK(r.projection.fixed_point);
}

TEST_CASE("unanimity and degenerate inputs") {
  const auto u = fraction_like_rates(rows({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}}));
  CHECK(u.fraction.values == std::vector<double>{1, 0, 0});
  CHECK(u.rank_like.values == std::vector<double>{1, 2, 3});

  const auto z = fraction_like_rates(LlullMatrix::zeros(gen::letters(4)));
  CHECK(z.fraction.values == std::vector<double>(4, 0.25));
  REQUIRE(z.warnings.size() == 1);
  CHECK(z.warnings[0] == kNoInformation);

  const auto one = fraction_like_rates(LlullMatrix::zeros(OptionSet({"a"})));
  CHECK(one.fraction.values == std::vector<double>{1.0});
}

TEST_CASE("rates form a distribution") {
  gen::Rng rng(41);
  for (int i = 0; i < 60; ++i) {
    const auto m = gen::sparse_matrix(rng, gen::pick(rng, 2, 7), 0.3);
    const auto r = fraction_like_rates(m);
    for (double f : r.fraction.values) CHECK(f >= 0.0);
    const double sum = std::accumulate(r.fraction.values.begin(), r.fraction.values.end(), 0.0);
    CHECK(std::abs(sum - 1.0) <= 1e-10);
    const auto check = check_compatibility(r.projection, {m.options(), r.fraction.values, {}});
    CHECK(check.ok());
  }
}

TEST_CASE("eigenvector method") {
  const auto e = [](double eps) {
    return rows({{0, 1 - eps, 1 - eps}, {eps, 0, 0.5}, {eps, 0.5, 0}});
  };
  const auto quarter = eigenvector_rates(e(0.25));
  CHECK(quarter[0] / quarter[1] == doctest::Approx(6 / (1 + std::sqrt(7.0))).epsilon(1e-10));
  CHECK(quarter[1] == doctest::Approx(quarter[2]));
  for (double x : eigenvector_rates(e(0.5)).values) CHECK(x == doctest::Approx(1.0 / 3));
  const auto tiny = eigenvector_rates(e(1e-9));
  CHECK(tiny[0] / tiny[1] == doctest::Approx(4.0).epsilon(1e-7));
  CHECK_THROWS_AS(eigenvector_rates(LlullMatrix::zeros(gen::letters(3))), Error);
}

TEST_CASE("compatibility of strengths and mean scores") {
  const auto half = rows({{0, .5, .5}, {.5, 0, .5}, {.5, .5, 0}});
  const auto r = fraction_like_rates(half);
  CHECK(check_compatibility(r.projection, {half.options(), r.fraction.values, {}}).ok());
  const auto u = rows({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}});
  const auto ru = fraction_like_rates(u);
  CHECK(check_compatibility(ru.projection, {u.options(), ru.fraction.values, {}}).ok());
  // Swapped strengths are flagged.
  CHECK_FALSE(check_compatibility(ru.projection, {u.options(), {0, 1, 0}, {}}).ok());
}

TEST_CASE("majority principle") {
  gen::Rng rng(43);
  for (int i = 0; i < 30; ++i) {
    SquareArray v(3);
    v(0, 1) = v(0, 2) = 0.9;
    v(1, 0) = gen::uniform(rng, 0, 0.1);
    v(2, 0) = gen::uniform(rng, 0, 0.1);
    v(1, 2) = gen::uniform(rng);
    v(2, 1) = gen::uniform(rng, 0, 1 - v(1, 2));
    const LlullMatrix m(gen::letters(3), v);
    CHECK(check_majority(m, fraction_like_rates(m), Subset{0}));
  }
  const auto u = rows({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}});
  CHECK(check_majority(u, fraction_like_rates(u), Subset{0}));
  try {
    check_majority(u, fraction_like_rates(u), Subset{1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kHypothesisNotSatisfied);
  }
}

TEST_CASE("monotonicity") {
  const auto m = rows({{0, .4, .3}, {.4, 0, .5}, {.5, .3, 0}});
  SquareArray v = m.scores();
  v(0, 1) += 0.1;
  const LlullMatrix better(m.options(), v);
  CHECK(check_monotonicity(m, better, 0).ok());
  CHECK(check_monotonicity(m, m, 1).ok());
  v(1, 2) += 0.05;
  try {
    check_monotonicity(m, LlullMatrix(m.options(), v), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kNotAnImprovement);
  }
}

TEST_CASE("clone consistency") {
  const auto b = parse_ballots("options: x c1 c2 y\n3: x>c1>c2>y\n2: y>c1=c2>x\n");
  const auto r = check_clone_consistency(b, Subset{1, 2}, "c");
  CHECK(r.ok());
  CHECK(check_clone_consistency(b, Subset{1}, "c").ok());
  const auto bad = parse_ballots("options: x c1 c2\n1: c1>x>c2\n");
  try {
    check_clone_consistency(bad, Subset{1, 2}, "c");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kNotAutonomous);
  }
}

TEST_CASE("clone check skips when clones straddle the support") {
  // a is unanimously first, so the support is {a}; the clone set {a, b}
  // neither lies inside the support nor covers its complement {b, c}.
  const auto b = parse_ballots("options: a b c\n2: a>b>c\n");
  const auto r = check_clone_consistency(b, Subset{0, 1}, "r");
  CHECK(r.skipped);
  REQUIRE(r.notes.size() == 1);
  CHECK(r.notes[0].check == "SupportHypothesisFailed");
}

TEST_CASE("decomposition") {
  const auto b = parse_ballots(
      "options: a b c d\n2: a>b>c>d\n1: b>a>d>c\n1: a=b>c\n");
  const auto m = aggregate(b);
  const auto sets = unanimous_sets(m);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == Subset{0, 1});
  const auto r = fraction_like_rates(m);
  CHECK(r.fraction[2] == 0.0);
  CHECK(r.fraction[3] == 0.0);
  const auto d = check_decomposition(b, r);
  for (const auto& v : d.violations) INFO(v.check << ": " << v.detail);
  CHECK(d.ok());

  const auto plain = parse_ballots("options: a b c\n1: a>b>c\n1: c>b>a\n");
  const auto rp = fraction_like_rates(aggregate(plain));
  const auto dp = check_decomposition(plain, rp);
  CHECK(dp.ok());
  CHECK(unanimous_sets(aggregate(plain)).empty());
}
