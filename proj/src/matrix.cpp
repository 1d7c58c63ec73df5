#include "llull/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace llull {
namespace {

std::string pair_text(const OptionSet& options, OptionIndex x, OptionIndex y) {
  return "(" + options.label(x) + ", " + options.label(y) + ")";
}

SquareArray validated(const OptionSet& options, SquareArray s, double tol) {
  const std::size_t n = options.size();
  for (std::size_t x = 0; x < n; ++x) {
    s(x, x) = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      double& v = s(x, y);
      if (!std::isfinite(v)) {
        throw Error(Errc::kInvalidMatrix,
                    "non-finite score at " + pair_text(options, x, y));
      }
      if (v < -tol || v > 1.0 + tol) {
        throw Error(Errc::kInvalidMatrix, "score " + std::to_string(v) +
                                              " outside [0,1] at " +
                                              pair_text(options, x, y));
      }
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double excess = s(x, y) + s(y, x) - 1.0;
      if (excess > tol) {
        throw Error(Errc::kInvalidMatrix,
                    "v_xy + v_yx exceeds 1 by " + std::to_string(excess) +
                        " at " + pair_text(options, x, y));
      }
      if (excess > 0.0) {
        s(x, y) = std::max(0.0, s(x, y) - excess / 2);
        s(y, x) = std::max(0.0, 1.0 - s(x, y));
      }
    }
  }
  return s;
}

SquareArray from_row_major(std::size_t n, std::vector<double> data) {
  if (data.size() != n * n) {
    throw Error(Errc::kInvalidMatrix,
                "expected " + std::to_string(n * n) + " scores, got " +
                    std::to_string(data.size()));
  }
  SquareArray s(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s(i, j) = data[i * n + j];
  }
  return s;
}

void require_positive_turnouts(const LlullMatrix& m) {
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      if (m.turnout(x, y) <= 0.0) {
        throw Error(Errc::kZeroTurnout,
                    "zero turnout at " + pair_text(m.options(), x, y));
      }
    }
  }
}

}  // namespace

LlullMatrix::LlullMatrix(OptionSet options, std::vector<double> row_major,
                         double tol)
    : LlullMatrix(options, from_row_major(options.size(), std::move(row_major)),
                  tol) {}

LlullMatrix::LlullMatrix(OptionSet options, const SquareArray& scores,
                         double tol)
    : options_(std::move(options)) {
  if (scores.size() != options_.size()) {
    throw Error(Errc::kInvalidMatrix, "matrix dimension does not match options");
  }
  scores_ = validated(options_, scores, tol);
}

LlullMatrix LlullMatrix::zeros(OptionSet options) {
  const std::size_t n = options.size();
  return LlullMatrix(std::move(options), SquareArray(n));
}

LlullMatrix LlullMatrix::from_rows(OptionSet options,
                                   const std::vector<std::vector<double>>& rows,
                                   double tol) {
  const std::size_t n = options.size();
  if (rows.size() != n) {
    throw Error(Errc::kInvalidMatrix, "expected " + std::to_string(n) +
                                          " rows, got " +
                                          std::to_string(rows.size()));
  }
  SquareArray s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw Error(Errc::kInvalidMatrix,
                  "row " + std::to_string(i) + " has " +
                      std::to_string(rows[i].size()) + " entries, expected " +
                      std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) s(i, j) = rows[i][j];
  }
  return LlullMatrix(std::move(options), s, tol);
}

bool LlullMatrix::is_complete(double tol) const {
  for (std::size_t x = 0; x < size(); ++x) {
    for (std::size_t y = x + 1; y < size(); ++y) {
      if (std::abs(turnout(x, y) - 1.0) > tol) return false;
    }
  }
  return true;
}

bool LlullMatrix::is_vanishing() const {
  return std::all_of(scores_.data().begin(), scores_.data().end(),
                     [](double v) { return v == 0.0; });
}

std::vector<std::vector<double>> LlullMatrix::rows() const {
  std::vector<std::vector<double>> out(size(), std::vector<double>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) out[i][j] = scores_(i, j);
  }
  return out;
}

std::string_view rate_kind_name(RateKind kind) {
  switch (kind) {
    case RateKind::kMeanScore: return "mean_score";
    case RateKind::kMeanRank: return "mean_rank";
    case RateKind::kMeanRelative: return "mean_relative";
    case RateKind::kStrength: return "strength";
    case RateKind::kFraction: return "fraction";
    case RateKind::kEigen: return "eigen";
  }
  return "unknown";
}

MarginsTurnouts margins_turnouts(const LlullMatrix& m) {
  const std::size_t n = m.size();
  MarginsTurnouts out{SquareArray(n), SquareArray(n)};
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      out.margins(x, y) = m.margin(x, y);
      out.turnouts(x, y) = m.turnout(x, y);
    }
  }
  return out;
}

LlullMatrix from_margins_turnouts(const OptionSet& options,
                                  const MarginsTurnouts& mt, double tol) {
  const std::size_t n = options.size();
  SquareArray s(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y) s(x, y) = (mt.turnouts(x, y) + mt.margins(x, y)) / 2;
    }
  }
  return LlullMatrix(options, s, tol);
}

SquareArray ratios(const LlullMatrix& m) {
  const std::size_t n = m.size();
  SquareArray p(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      if (m(y, x) == 0.0) {
        throw Error(Errc::kZeroOpposingScore,
                    "ratio undefined: zero score at " +
                        pair_text(m.options(), y, x));
      }
      p(x, y) = m(x, y) / m(y, x);
    }
  }
  return p;
}

LlullMatrix relative_scores(const LlullMatrix& m) {
  require_positive_turnouts(m);
  const std::size_t n = m.size();
  SquareArray q(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double t = m.turnout(x, y);
      q(x, y) = m(x, y) / t;
      q(y, x) = 1.0 - q(x, y);
    }
  }
  return LlullMatrix(m.options(), q);
}

RateVector mean_preference_scores(const LlullMatrix& m) {
  const std::size_t n = m.size();
  RateVector out{m.options(), std::vector<double>(n, 0.0), RateKind::kMeanScore,
                 std::nullopt};
  if (n == 1) {
    out.values[0] = 1.0;
    out.flag = Errc::kSingleOption;
    return out;
  }
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y != x) sum += m(x, y);
    }
    out.values[x] = sum / static_cast<double>(n - 1);
  }
  return out;
}

RateVector mean_ranks(const RateVector& mean_scores) {
  const double n = static_cast<double>(mean_scores.size());
  RateVector out = mean_scores;
  out.kind = RateKind::kMeanRank;
  for (double& r : out.values) r = n - (n - 1.0) * r;
  return out;
}

RateVector mean_ranks(const LlullMatrix& m) {
  return mean_ranks(mean_preference_scores(m));
}

RateVector mean_relative_scores(const LlullMatrix& m) {
  const std::size_t n = m.size();
  RateVector out{m.options(), std::vector<double>(n, 0.0),
                 RateKind::kMeanRelative, std::nullopt};
  if (n == 1) {
    out.values[0] = 1.0;
    out.flag = Errc::kSingleOption;
    return out;
  }
  require_positive_turnouts(m);
  for (std::size_t x = 0; x < n; ++x) {
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y != x) sum += m(x, y) / m.turnout(x, y);
    }
    out.values[x] = sum / static_cast<double>(n - 1);
  }
  return out;
}

MatrixFragment restrict(const LlullMatrix& m, std::span<const OptionIndex> rows,
                        std::span<const OptionIndex> cols) {
  subset_mask(rows, m.size());
  subset_mask(cols, m.size());
  MatrixFragment out{Subset(rows.begin(), rows.end()),
                     Subset(cols.begin(), cols.end()), {}};
  out.values.reserve(rows.size() * cols.size());
  for (OptionIndex r : rows) {
    for (OptionIndex c : cols) out.values.push_back(m(r, c));
  }
  return out;
}

LlullMatrix restrict(const LlullMatrix& m, std::span<const OptionIndex> subset) {
  Subset sorted(subset.begin(), subset.end());
  subset_mask(sorted, m.size());
  std::sort(sorted.begin(), sorted.end());
  SquareArray s(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      s(i, j) = m(sorted[i], sorted[j]);
    }
  }
  return LlullMatrix(m.options().restricted(sorted), s);
}

}  // namespace llull
