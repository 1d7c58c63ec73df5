#include "llull/ballots.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>

#include "llull/error.hpp"

namespace llull {
namespace {

bool is_label_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '>' && c != '=' &&
         c != ':' && c != '#' && c != ',';
}

// Cursor over a single line; columns are 1-based.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no)
      : line_(line), line_no_(line_no) {}

  void skip_space() {
    while (pos_ < line_.size() &&
           std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }
  bool at_end() {
    skip_space();
    return pos_ >= line_.size();
  }
  std::size_t column() const { return pos_ + 1; }
  char peek() {
    skip_space();
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }
  std::string label() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && is_label_char(line_[pos_])) ++pos_;
    if (start == pos_) fail("expected an option label");
    return std::string(line_.substr(start, pos_ - start));
  }
  std::string_view word() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && std::isalpha(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    return line_.substr(start, pos_ - start);
  }
  std::uint64_t weight() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < line_.size() && std::isdigit(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) fail("expected a positive integer weight");
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line_.data() + start, line_.data() + pos_, value);
    if (ec != std::errc() || value == 0) {
      pos_ = start;
      fail("weight must be a positive integer");
    }
    return value;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(line_no_, column(), msg);
  }

 private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

enum class Side { kAbove, kBelow, kTied, kUncompared };

Side compare_positions(long px, long py) {
  if (px < 0 && py < 0) return Side::kUncompared;
  if (py < 0) return Side::kAbove;
  if (px < 0) return Side::kBelow;
  if (px == py) return Side::kTied;
  return px < py ? Side::kAbove : Side::kBelow;
}

// Tier index of every option in the ballot, -1 for unranked.
std::vector<long> positions(const Ballot& ballot, std::size_t n) {
  std::vector<long> pos(n, -1);
  for (std::size_t t = 0; t < ballot.tiers.size(); ++t) {
    for (OptionIndex x : ballot.tiers[t]) pos[x] = static_cast<long>(t);
  }
  return pos;
}

}  // namespace

std::string_view tie_policy_name(TiePolicy policy) {
  return policy == TiePolicy::kHalf ? "half" : "abstain";
}

TiePolicy parse_tie_policy(std::string_view name) {
  if (name == "half") return TiePolicy::kHalf;
  if (name == "abstain") return TiePolicy::kAbstain;
  throw Error(Errc::kInvalidArgument,
              "unknown tie policy '" + std::string(name) + "'");
}

BallotSet::BallotSet(OptionSet options, std::vector<Ballot> ballots)
    : options_(std::move(options)), ballots_(std::move(ballots)) {
  if (ballots_.empty()) throw Error(Errc::kEmptyProfile, "profile has no ballots");
  const std::size_t n = options_.size();
  for (const Ballot& b : ballots_) {
    if (b.weight == 0) throw Error(Errc::kInvalidArgument, "ballot weight must be >= 1");
    if (b.tiers.empty()) throw Error(Errc::kInvalidArgument, "ballot has no tiers");
    std::vector<bool> seen(n, false);
    for (const auto& tier : b.tiers) {
      if (tier.empty()) throw Error(Errc::kInvalidArgument, "ballot has an empty tier");
      for (OptionIndex x : tier) {
        if (x >= n) throw Error(Errc::kUnknownOption, "option index out of range");
        if (seen[x]) {
          throw Error(Errc::kInvalidArgument,
                      "option '" + options_.label(x) + "' appears twice in a ballot");
        }
        seen[x] = true;
      }
    }
    if (total_weight_ > std::numeric_limits<std::uint64_t>::max() / 4 - b.weight) {
      throw Error(Errc::kInvalidArgument, "total ballot weight overflows");
    }
    total_weight_ += b.weight;
  }
}

bool BallotSet::is_single_choice() const {
  return std::all_of(ballots_.begin(), ballots_.end(), [](const Ballot& b) {
    return b.tiers.size() == 1 && b.tiers.front().size() == 1;
  });
}

bool BallotSet::is_complete() const {
  return std::all_of(ballots_.begin(), ballots_.end(), [&](const Ballot& b) {
    std::size_t count = 0;
    for (const auto& t : b.tiers) count += t.size();
    return count == options_.size();
  });
}

BallotSet parse_ballots(std::string_view text) {
  std::optional<OptionSet> options;
  std::vector<Ballot> ballots;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    LineScanner scan(strip_comment(raw), line_no);
    if (scan.at_end()) {
      if (end == text.size()) break;
      continue;
    }

    if (!options) {
      if (scan.word() != "options") scan.fail("expected 'options:' header");
      scan.expect(':');
      std::vector<std::string> labels;
      while (!scan.at_end()) {
        const std::size_t col = scan.column();
        auto label = scan.label();
        if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
          throw SyntaxError(line_no, col, "duplicate option '" + label + "'");
        }
        labels.push_back(std::move(label));
      }
      if (labels.empty()) scan.fail("'options:' header lists no options");
      options.emplace(std::move(labels));
    } else {
      if (std::isalpha(static_cast<unsigned char>(scan.peek()))) {
        scan.fail("unexpected text; ballot lines start with a weight");
      }
      Ballot ballot;
      ballot.weight = scan.weight();
      scan.expect(':');
      std::vector<bool> seen(options->size(), false);
      do {
        std::vector<OptionIndex> tier;
        do {
          const std::size_t col = scan.column();
          const std::string label = scan.label();
          const auto found = options->find(label);
          if (!found) {
            throw Error(Errc::kUnknownOption, "line " + std::to_string(line_no) +
                                                  ", column " + std::to_string(col) +
                                                  ": unknown option '" + label + "'");
          }
          const OptionIndex x = *found;
          if (seen[x]) {
            throw SyntaxError(line_no, col,
                              "option '" + label + "' appears twice in a ballot");
          }
          seen[x] = true;
          tier.push_back(x);
        } while (scan.consume('='));
        ballot.tiers.push_back(std::move(tier));
      } while (scan.consume('>'));
      if (!scan.at_end()) scan.fail("expected '>', '=' or end of line");
      ballots.push_back(std::move(ballot));
    }
    if (end == text.size()) break;
  }
  if (!options) throw Error(Errc::kEmptyProfile, "missing 'options:' header");
  if (ballots.empty()) throw Error(Errc::kEmptyProfile, "profile has no ballots");
  return BallotSet(std::move(*options), std::move(ballots));
}

std::string format_ballots(const BallotSet& ballots) {
  std::ostringstream out;
  out << "options:";
  for (const auto& l : ballots.options().labels()) out << ' ' << l;
  out << '\n';
  for (const Ballot& b : ballots.ballots()) {
    out << b.weight << ": ";
    for (std::size_t t = 0; t < b.tiers.size(); ++t) {
      if (t) out << '>';
      for (std::size_t k = 0; k < b.tiers[t].size(); ++k) {
        if (k) out << '=';
        out << ballots.options().label(b.tiers[t][k]);
      }
    }
    out << '\n';
  }
  return out.str();
}

LlullMatrix aggregate(const BallotSet& ballots, TiePolicy ties) {
  const std::size_t n = ballots.options().size();
  // counts(x, y) = 2 * (weighted strict preferences) + (weighted ties).
  std::vector<std::uint64_t> counts(n * n, 0);
  for (const Ballot& b : ballots.ballots()) {
    const auto pos = positions(b, n);
    for (std::size_t x = 0; x < n; ++x) {
      if (pos[x] < 0) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        if (pos[y] < 0 || pos[x] < pos[y]) {
          counts[x * n + y] += 2 * b.weight;
        } else if (pos[x] == pos[y] && ties == TiePolicy::kHalf) {
          counts[x * n + y] += b.weight;
        }
      }
    }
  }
  const double denom = 2.0 * static_cast<double>(ballots.total_weight());
  SquareArray s(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (x != y) s(x, y) = static_cast<double>(counts[x * n + y]) / denom;
    }
  }
  return LlullMatrix(ballots.options(), s);
}

bool is_autonomous(const BallotSet& ballots, std::span<const OptionIndex> clones) {
  const std::size_t n = ballots.options().size();
  const auto mask = subset_mask(clones, n);
  for (const Ballot& b : ballots.ballots()) {
    const auto pos = positions(b, n);
    for (std::size_t x = 0; x < n; ++x) {
      if (mask[x]) continue;
      const Side first = compare_positions(pos[x], pos[clones.front()]);
      for (OptionIndex c : clones) {
        if (compare_positions(pos[x], pos[c]) != first) return false;
      }
    }
  }
  return true;
}

BallotSet contract(const BallotSet& ballots, std::span<const OptionIndex> clones,
                   const std::string& representative) {
  const OptionSet& options = ballots.options();
  const auto mask = subset_mask(clones, options.size());
  if (auto existing = options.find(representative); existing && !mask[*existing]) {
    throw Error(Errc::kBadRepresentative,
                "representative '" + representative +
                    "' is an option outside the contracted set");
  }
  if (!is_autonomous(ballots, clones)) {
    throw Error(Errc::kNotAutonomous, "set is not autonomous for every ballot");
  }

  // New option list: the representative replaces the first member.
  std::vector<std::string> labels;
  std::vector<OptionIndex> remap(options.size());
  OptionIndex rep_index = 0;
  bool rep_placed = false;
  for (OptionIndex x = 0; x < options.size(); ++x) {
    if (mask[x]) {
      if (!rep_placed) {
        rep_index = labels.size();
        labels.push_back(representative);
        rep_placed = true;
      }
      remap[x] = rep_index;
    } else {
      remap[x] = labels.size();
      labels.push_back(options.label(x));
    }
  }

  std::vector<Ballot> out;
  out.reserve(ballots.ballots().size());
  for (const Ballot& b : ballots.ballots()) {
    Ballot nb;
    nb.weight = b.weight;
    bool rep_inserted = false;
    for (const auto& tier : b.tiers) {
      std::vector<OptionIndex> nt;
      bool has_member = false;
      for (OptionIndex x : tier) {
        if (mask[x]) {
          has_member = true;
        } else {
          nt.push_back(remap[x]);
        }
      }
      if (has_member && !rep_inserted) {
        nt.push_back(rep_index);
        rep_inserted = true;
      }
      if (!nt.empty()) nb.tiers.push_back(std::move(nt));
    }
    out.push_back(std::move(nb));
  }
  return BallotSet(OptionSet(std::move(labels)), std::move(out));
}

BallotSet restrict_ballots(const BallotSet& ballots,
                           std::span<const OptionIndex> subset) {
  const auto mask = subset_mask(subset, ballots.options().size());
  std::vector<OptionIndex> remap(ballots.options().size(), 0);
  OptionIndex next = 0;
  for (OptionIndex x = 0; x < mask.size(); ++x) {
    if (mask[x]) remap[x] = next++;
  }
  std::vector<Ballot> out;
  for (const Ballot& b : ballots.ballots()) {
    Ballot nb;
    nb.weight = b.weight;
    for (const auto& tier : b.tiers) {
      std::vector<OptionIndex> nt;
      for (OptionIndex x : tier) {
        if (mask[x]) nt.push_back(remap[x]);
      }
      if (!nt.empty()) nb.tiers.push_back(std::move(nt));
    }
    if (!nb.tiers.empty()) out.push_back(std::move(nb));
  }
  if (out.empty()) {
    throw Error(Errc::kEmptyProfile, "no ballot mentions the restricted options");
  }
  return BallotSet(ballots.options().restricted(subset), std::move(out));
}

}  // namespace llull
