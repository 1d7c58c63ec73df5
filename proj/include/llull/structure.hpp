#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "llull/matrix.hpp"

namespace llull {

struct StructureConfig {
  // Tolerance for every CLC equality and inequality.
  double tau = 1e-9;
  // Largest group of mean-score ties whose permutations are searched.
  std::size_t tie_group_cap = 8;
};

// Widest-path ("weakest link") scores: sigma_xy is the best, over all paths
// from x to y, of the smallest score along the path.
struct IndirectScores {
  OptionSet options;
  SquareArray sigma;

  double operator()(OptionIndex x, OptionIndex y) const { return sigma(x, y); }
};

IndirectScores indirect_scores(const LlullMatrix& m);

// A total order on the options; position 0 comes first.
using AdmissibleOrder = std::vector<OptionIndex>;

enum class ClcCondition {
  kPairwise,       // v_xy >= v_yx for x before y
  kMaxChain,       // v_xz = max(v_xy, v_yz) for x < y < z
  kMinChain,       // v_zx = min(v_zy, v_yx) for x < y < z
  kTurnoutMargin,  // 0 <= t_xz - t_x'z <= m_xx'
  kMonotone,       // implied monotonicity of scores and turnouts
};

std::string_view clc_condition_name(ClcCondition c);

struct ClcWitness {
  ClcCondition condition;
  OptionIndex x = 0;
  OptionIndex y = 0;
  OptionIndex z = 0;  // equals y for pairwise conditions
  double excess = 0;  // amount by which the condition fails
};

struct ClcVerdict {
  bool pairwise = true;
  bool max_chain = true;
  bool min_chain = true;
  bool turnout_margin = true;
  // Consequence of the four conditions above; only a consistency assertion.
  bool monotone = true;
  std::vector<ClcWitness> witnesses;

  bool ok() const { return pairwise && max_chain && min_chain && turnout_margin; }
};

// Checks the four CLC conditions (plus the implied monotonicity) of `m`
// under `order`. Throws kNotAPermutation. With `stop_at_first` the check
// returns as soon as a defining condition fails.
ClcVerdict check_clc(const LlullMatrix& m, std::span<const OptionIndex> order,
                     const StructureConfig& cfg = {}, bool stop_at_first = false);

// Searches orders sorted by decreasing mean preference score, permuting
// groups of tied scores. Returns the first order passing check_clc.
// Throws kTieGroupTooLarge when a needed search exceeds the cap.
std::optional<AdmissibleOrder> find_admissible_order(const LlullMatrix& m,
                                                     const StructureConfig& cfg = {});

struct StructureReport {
  // Irreducible components, dominating components first.
  std::vector<Subset> components;
  // component_of[x] is the index into `components` holding x.
  std::vector<std::size_t> component_of;
  // Pairs (i, j): component i dominates component j. Transitively closed.
  std::vector<std::pair<std::size_t, std::size_t>> dominance;
  std::optional<std::size_t> top_dominant;
  std::optional<AdmissibleOrder> order;
  std::optional<ClcVerdict> clc;

  bool irreducible() const { return components.size() == 1; }
};

// Strongly connected components of the digraph x -> y iff v_xy > 0.
StructureReport components(const LlullMatrix& m);

// components() plus admissible-order search and CLC verdict. When no order
// is admissible the verdict is reported for the mean-score order.
StructureReport analyze(const LlullMatrix& m, const StructureConfig& cfg = {});

struct ZeroTurnoutSplit {
  Subset kept;  // turnouts positive within
  Subset tail;  // options scoring zero against everyone
};

// For a CLC matrix: the tail of the admissible order after the first zero
// consecutive turnout. Empty tail when all turnouts are positive.
// Throws kNotClc.
ZeroTurnoutSplit zero_turnout_split(const LlullMatrix& m,
                                    const StructureConfig& cfg = {});

}  // namespace llull
