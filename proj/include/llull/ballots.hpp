#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "llull/matrix.hpp"
#include "llull/options.hpp"

namespace llull {

// How a ballot that places x and y in the same tier is counted.
enum class TiePolicy {
  kHalf,     // half a preference each way
  kAbstain,  // neither way
};

std::string_view tie_policy_name(TiePolicy policy);
TiePolicy parse_tie_policy(std::string_view name);

// A ranking, possibly truncated or with ties. tiers[0] is the most preferred
// tier; options absent from every tier are unranked.
struct Ballot {
  std::vector<std::vector<OptionIndex>> tiers;
  std::uint64_t weight = 1;

  friend bool operator==(const Ballot&, const Ballot&) = default;
};

class BallotSet {
 public:
  // Validates every ballot against the option set. Throws kEmptyProfile when
  // there are no ballots.
  BallotSet(OptionSet options, std::vector<Ballot> ballots);

  const OptionSet& options() const noexcept { return options_; }
  const std::vector<Ballot>& ballots() const noexcept { return ballots_; }
  // Number of voters V (sum of weights).
  std::uint64_t total_weight() const noexcept { return total_weight_; }

  // Every ballot names exactly one option.
  bool is_single_choice() const;
  // Every ballot ranks every option.
  bool is_complete() const;

 private:
  OptionSet options_;
  std::vector<Ballot> ballots_;
  std::uint64_t total_weight_ = 0;
};

// Parses the line-oriented ballot format:
//
//   options: a b c
//   2: a>b=c
//   1: b        # comment
//
// Throws SyntaxError(line, column), Error(kUnknownOption) or
// Error(kEmptyProfile).
BallotSet parse_ballots(std::string_view text);

// Serializes back into the format accepted by parse_ballots.
std::string format_ballots(const BallotSet& ballots);

// Pairwise tally. Counts are kept as exact integers over 2V and converted to
// doubles only once at the end.
LlullMatrix aggregate(const BallotSet& ballots, TiePolicy ties = TiePolicy::kHalf);

// True iff every ballot treats `clones` as a block: each outside option
// compares the same way (above, below, tied, uncompared) with all members.
bool is_autonomous(const BallotSet& ballots, std::span<const OptionIndex> clones);

// Replaces the autonomous set by the single option `representative`, which
// must be a fresh label or a member of the set. The representative takes the
// place of the first member in declaration order.
BallotSet contract(const BallotSet& ballots, std::span<const OptionIndex> clones,
                   const std::string& representative);

// Drops every option outside `subset` from all ballots. Ballots left empty
// are removed; throws kEmptyProfile if nothing remains.
BallotSet restrict_ballots(const BallotSet& ballots,
                           std::span<const OptionIndex> subset);

}  // namespace llull
