#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "llull/error.hpp"
#include "llull/options.hpp"

namespace llull {

// Dense N x N array of doubles, row-major. Used for the derived views of a
// Llull matrix (margins, turnouts, indirect scores, Hessians).
class SquareArray {
 public:
  SquareArray() = default;
  explicit SquareArray(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }
  std::span<const double> data() const noexcept { return data_; }

  friend bool operator==(const SquareArray&, const SquareArray&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Matrix of preference scores v_xy in [0,1] with v_xy + v_yx <= 1.
// Immutable after construction; the diagonal is stored as 0 and ignored.
class LlullMatrix {
 public:
  static constexpr double kDefaultTolerance = 1e-12;

  // Validates the scores. Violations of the constraints within `tol` are
  // clamped, larger violations throw Error(kInvalidMatrix). Diagonal entries
  // of the input are ignored.
  LlullMatrix(OptionSet options, std::vector<double> row_major,
              double tol = kDefaultTolerance);
  LlullMatrix(OptionSet options, const SquareArray& scores,
              double tol = kDefaultTolerance);

  static LlullMatrix zeros(OptionSet options);
  static LlullMatrix from_rows(OptionSet options,
                               const std::vector<std::vector<double>>& rows,
                               double tol = kDefaultTolerance);

  std::size_t size() const noexcept { return options_.size(); }
  const OptionSet& options() const noexcept { return options_; }
  double operator()(OptionIndex x, OptionIndex y) const {
    return scores_(x, y);
  }
  const SquareArray& scores() const noexcept { return scores_; }

  double margin(OptionIndex x, OptionIndex y) const {
    return scores_(x, y) - scores_(y, x);
  }
  double turnout(OptionIndex x, OptionIndex y) const {
    return scores_(x, y) + scores_(y, x);
  }

  // v_xy + v_yx = 1 for every pair, within tol.
  bool is_complete(double tol = kDefaultTolerance) const;
  // Every off-diagonal score is exactly zero.
  bool is_vanishing() const;

  std::vector<std::vector<double>> rows() const;

  friend bool operator==(const LlullMatrix&, const LlullMatrix&) = default;

 private:
  OptionSet options_;
  SquareArray scores_;
};

enum class RateKind {
  kMeanScore,
  kMeanRank,
  kMeanRelative,
  kStrength,
  kFraction,
  kEigen,
};

std::string_view rate_kind_name(RateKind kind);

// One number per option, tagged with its meaning. `flag` is set when the
// value was produced by a documented convention rather than the formula
// (e.g. SingleOption for N = 1).
struct RateVector {
  OptionSet options;
  std::vector<double> values;
  RateKind kind = RateKind::kMeanScore;
  std::optional<Errc> flag;

  double operator[](OptionIndex i) const { return values[i]; }
  std::size_t size() const noexcept { return values.size(); }
};

struct MarginsTurnouts {
  SquareArray margins;   // antisymmetric
  SquareArray turnouts;  // symmetric
};

MarginsTurnouts margins_turnouts(const LlullMatrix& m);

// Inverse of margins_turnouts: v_xy = (t_xy + m_xy) / 2.
LlullMatrix from_margins_turnouts(const OptionSet& options,
                                  const MarginsTurnouts& mt,
                                  double tol = LlullMatrix::kDefaultTolerance);

// p_xy = v_xy / v_yx. Throws kZeroOpposingScore when some v_yx = 0.
SquareArray ratios(const LlullMatrix& m);

// q_xy = v_xy / t_xy. Throws kZeroTurnout when some t_xy = 0.
LlullMatrix relative_scores(const LlullMatrix& m);

// rho_x = (1/(N-1)) sum_{y != x} v_xy. For N = 1 returns rho = 1 with
// flag = SingleOption.
RateVector mean_preference_scores(const LlullMatrix& m);

// rbar_x = N - (N-1) rho_x.
RateVector mean_ranks(const LlullMatrix& m);
RateVector mean_ranks(const RateVector& mean_scores);

// sigma_x = (1/(N-1)) sum_{y != x} v_xy / t_xy.
RateVector mean_relative_scores(const LlullMatrix& m);

// Sub-array v_RS with rows R and columns S (in the order given).
struct MatrixFragment {
  Subset rows;
  Subset cols;
  std::vector<double> values;  // rows.size() x cols.size(), row-major

  double operator()(std::size_t r, std::size_t c) const {
    return values[r * cols.size() + c];
  }
};

MatrixFragment restrict(const LlullMatrix& m, std::span<const OptionIndex> rows,
                        std::span<const OptionIndex> cols);

// Square restriction to R, as a Llull matrix over R (declaration order kept).
LlullMatrix restrict(const LlullMatrix& m, std::span<const OptionIndex> subset);

}  // namespace llull
