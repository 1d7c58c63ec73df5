#include "llull/structure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace llull {
namespace {

constexpr std::size_t kMaxWitnessesPerCondition = 32;

void require_permutation(std::span<const OptionIndex> order, std::size_t n) {
  if (order.size() != n) {
    throw Error(Errc::kNotAPermutation, "order has " + std::to_string(order.size()) +
                                            " entries for " + std::to_string(n) +
                                            " options");
  }
  std::vector<bool> seen(n, false);
  for (OptionIndex x : order) {
    if (x >= n || seen[x]) {
      throw Error(Errc::kNotAPermutation, "order is not a permutation");
    }
    seen[x] = true;
  }
}

class VerdictBuilder {
 public:
  explicit VerdictBuilder(bool stop_at_first) : stop_(stop_at_first) {}

  // Records a failure; returns true when the caller should stop.
  bool fail(ClcCondition c, OptionIndex x, OptionIndex y, OptionIndex z,
            double excess) {
    flag(c) = false;
    auto& count = counts_[static_cast<std::size_t>(c)];
    if (count < kMaxWitnessesPerCondition) {
      verdict_.witnesses.push_back({c, x, y, z, excess});
    }
    ++count;
    return stop_ && c != ClcCondition::kMonotone;
  }
  ClcVerdict take() { return std::move(verdict_); }

 private:
  bool& flag(ClcCondition c) {
    switch (c) {
      case ClcCondition::kPairwise: return verdict_.pairwise;
      case ClcCondition::kMaxChain: return verdict_.max_chain;
      case ClcCondition::kMinChain: return verdict_.min_chain;
      case ClcCondition::kTurnoutMargin: return verdict_.turnout_margin;
      case ClcCondition::kMonotone: return verdict_.monotone;
    }
    return verdict_.monotone;
  }

  bool stop_;
  ClcVerdict verdict_;
  std::size_t counts_[5] = {0, 0, 0, 0, 0};
};

// Tarjan's algorithm on the strict-positivity digraph.
class SccFinder {
 public:
  explicit SccFinder(const LlullMatrix& m)
      : m_(m), n_(m.size()), index_(n_, -1), low_(n_, 0), on_stack_(n_, false),
        comp_(n_, 0) {}

  std::vector<std::size_t> run(std::size_t& count) {
    for (std::size_t v = 0; v < n_; ++v) {
      if (index_[v] < 0) visit(v);
    }
    count = count_;
    return comp_;
  }

 private:
  void visit(std::size_t v) {
    index_[v] = low_[v] = next_++;
    stack_.push_back(v);
    on_stack_[v] = true;
    for (std::size_t w = 0; w < n_; ++w) {
      if (w == v || m_(v, w) <= 0.0) continue;
      if (index_[w] < 0) {
        visit(w);
        low_[v] = std::min(low_[v], low_[w]);
      } else if (on_stack_[w]) {
        low_[v] = std::min(low_[v], index_[w]);
      }
    }
    if (low_[v] == index_[v]) {
      std::size_t w;
      do {
        w = stack_.back();
        stack_.pop_back();
        on_stack_[w] = false;
        comp_[w] = count_;
      } while (w != v);
      ++count_;
    }
  }

  const LlullMatrix& m_;
  std::size_t n_;
  std::vector<long> index_;
  std::vector<long> low_;
  std::vector<bool> on_stack_;
  std::vector<std::size_t> comp_;
  std::vector<std::size_t> stack_;
  long next_ = 0;
  std::size_t count_ = 0;
};

}  // namespace

std::string_view clc_condition_name(ClcCondition c) {
  switch (c) {
    case ClcCondition::kPairwise: return "pairwise";
    case ClcCondition::kMaxChain: return "max_chain";
    case ClcCondition::kMinChain: return "min_chain";
    case ClcCondition::kTurnoutMargin: return "turnout_margin";
    case ClcCondition::kMonotone: return "monotone";
  }
  return "unknown";
}

IndirectScores indirect_scores(const LlullMatrix& m) {
  const std::size_t n = m.size();
  SquareArray s = m.scores();
  // Max-min closure; each cell is updated in a fixed order.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double ik = s(i, k);
      if (ik <= 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double through = std::min(ik, s(k, j));
        if (through > s(i, j)) s(i, j) = through;
      }
    }
  }
  return {m.options(), std::move(s)};
}

ClcVerdict check_clc(const LlullMatrix& m, std::span<const OptionIndex> order,
                     const StructureConfig& cfg, bool stop_at_first) {
  const std::size_t n = m.size();
  require_permutation(order, n);
  const double tau = cfg.tau;
  VerdictBuilder out(stop_at_first);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const OptionIndex x = order[i], y = order[j];
      const double d = m(y, x) - m(x, y);
      if (d > tau && out.fail(ClcCondition::kPairwise, x, y, y, d)) return out.take();
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const OptionIndex x = order[i], y = order[j], z = order[k];
        const double dmax = std::abs(m(x, z) - std::max(m(x, y), m(y, z)));
        if (dmax > tau && out.fail(ClcCondition::kMaxChain, x, y, z, dmax)) {
          return out.take();
        }
        const double dmin = std::abs(m(z, x) - std::min(m(z, y), m(y, x)));
        if (dmin > tau && out.fail(ClcCondition::kMinChain, x, y, z, dmin)) {
          return out.take();
        }
      }
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const OptionIndex x = order[i], next = order[i + 1];
    const double margin = m.margin(x, next);
    for (std::size_t k = 0; k < n; ++k) {
      const OptionIndex z = order[k];
      if (z == x || z == next) continue;
      const double d = m.turnout(x, z) - m.turnout(next, z);
      const double excess = std::max(-d, d - margin);
      if (excess > tau && out.fail(ClcCondition::kTurnoutMargin, x, next, z, excess)) {
        return out.take();
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const OptionIndex x = order[i], y = order[j];
      for (OptionIndex z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        const double excess =
            std::max({m(y, z) - m(x, z), m(z, x) - m(z, y),
                      m.turnout(y, z) - m.turnout(x, z)});
        if (excess > tau) out.fail(ClcCondition::kMonotone, x, y, z, excess);
      }
    }
  }
  return out.take();
}

std::optional<AdmissibleOrder> find_admissible_order(const LlullMatrix& m,
                                                     const StructureConfig& cfg) {
  const std::size_t n = m.size();
  const auto rho = mean_preference_scores(m);
  AdmissibleOrder order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](OptionIndex a, OptionIndex b) {
    return rho[a] > rho[b];
  });
  if (check_clc(m, order, cfg, true).ok()) return order;

  // Runs of consecutive positions whose scores differ by at most tau.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && rho[order[j - 1]] - rho[order[j]] <= cfg.tau) ++j;
    if (j - i > 1) {
      if (j - i > cfg.tie_group_cap) {
        throw Error(Errc::kTieGroupTooLarge,
                    "tie group of size " + std::to_string(j - i) +
                        " exceeds the search cap of " +
                        std::to_string(cfg.tie_group_cap));
      }
      groups.emplace_back(i, j);
    }
    i = j;
  }
  if (groups.empty()) return std::nullopt;
  for (auto [b, e] : groups) {
    std::sort(order.begin() + static_cast<long>(b), order.begin() + static_cast<long>(e));
  }

  // Odometer over the permutations of every group.
  std::function<bool(std::size_t)> search = [&](std::size_t g) -> bool {
    if (g == groups.size()) return check_clc(m, order, cfg, true).ok();
    auto first = order.begin() + static_cast<long>(groups[g].first);
    auto last = order.begin() + static_cast<long>(groups[g].second);
    do {
      if (search(g + 1)) return true;
    } while (std::next_permutation(first, last));
    return false;
  };
  if (search(0)) return order;
  return std::nullopt;
}

StructureReport components(const LlullMatrix& m) {
  const std::size_t n = m.size();
  std::size_t count = 0;
  const auto raw = SccFinder(m).run(count);

  // Condensation reachability.
  std::vector<std::vector<bool>> edge(count, std::vector<bool>(count, false));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y && raw[x] != raw[y] && m(x, y) > 0.0) edge[raw[x]][raw[y]] = true;
    }
  }
  auto reach = edge;
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t i = 0; i < count; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < count; ++j) {
        if (reach[k][j]) reach[i][j] = true;
      }
    }
  }

  // Order components: dominating first, then by smallest member.
  std::vector<std::size_t> smallest(count, n);
  for (std::size_t x = 0; x < n; ++x) smallest[raw[x]] = std::min(smallest[raw[x]], x);
  std::vector<std::size_t> dominated_by(count, 0);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (reach[i][j]) ++dominated_by[j];
    }
  }
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  // Depth in the closed DAG is a topological key.
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    if (dominated_by[a] != dominated_by[b]) return dominated_by[a] < dominated_by[b];
    return smallest[a] < smallest[b];
  });
  std::vector<std::size_t> rank(count);
  for (std::size_t r = 0; r < count; ++r) rank[perm[r]] = r;

  StructureReport report;
  report.components.resize(count);
  report.component_of.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    report.component_of[x] = rank[raw[x]];
    report.components[rank[raw[x]]].push_back(x);
  }
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (reach[perm[i]][perm[j]]) report.dominance.emplace_back(i, j);
    }
  }
  std::sort(report.dominance.begin(), report.dominance.end());
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t dominated = 0;
    for (auto [a, b] : report.dominance) {
      if (a == i) ++dominated;
    }
    if (dominated + 1 == count) {
      report.top_dominant = i;
      break;
    }
  }
  return report;
}

StructureReport analyze(const LlullMatrix& m, const StructureConfig& cfg) {
  StructureReport report = components(m);
  report.order = find_admissible_order(m, cfg);
  if (report.order) {
    report.clc = check_clc(m, *report.order, cfg);
  } else {
    const auto rho = mean_preference_scores(m);
    AdmissibleOrder fallback(m.size());
    std::iota(fallback.begin(), fallback.end(), 0);
    std::stable_sort(fallback.begin(), fallback.end(),
                     [&](OptionIndex a, OptionIndex b) { return rho[a] > rho[b]; });
    report.clc = check_clc(m, fallback, cfg);
  }
  return report;
}

ZeroTurnoutSplit zero_turnout_split(const LlullMatrix& m, const StructureConfig& cfg) {
  const auto order = find_admissible_order(m, cfg);
  if (!order) throw Error(Errc::kNotClc, "matrix has no admissible order");
  ZeroTurnoutSplit split;
  std::size_t cut = m.size();
  for (std::size_t i = 0; i + 1 < m.size(); ++i) {
    if (m.turnout((*order)[i], (*order)[i + 1]) == 0.0) {
      cut = i + 1;
      break;
    }
  }
  split.kept.assign(order->begin(), order->begin() + static_cast<long>(cut));
  split.tail.assign(order->begin() + static_cast<long>(cut), order->end());
  std::sort(split.kept.begin(), split.kept.end());
  std::sort(split.tail.begin(), split.tail.end());
  return split;
}

}  // namespace llull
