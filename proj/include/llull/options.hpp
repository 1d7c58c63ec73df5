#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace llull {

// Index of an option inside its OptionSet. All numeric code works on
// indices; labels only matter at the I/O boundary.
using OptionIndex = std::size_t;

// A subset of options, as a list of indices. Functions that take a Subset
// accept any order but reject duplicates and out-of-range entries.
using Subset = std::vector<OptionIndex>;

// The finite option universe, with stable declaration order.
class OptionSet {
 public:
  OptionSet() = default;
  explicit OptionSet(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(OptionIndex i) const { return labels_.at(i); }

  std::optional<OptionIndex> find(const std::string& label) const;
  // Throws Error(kUnknownOption) when the label is not part of the set.
  OptionIndex index_of(const std::string& label) const;

  // Labels of a subset, in the order given.
  std::vector<std::string> labels_of(std::span<const OptionIndex> subset) const;
  Subset indices_of(std::span<const std::string> labels) const;

  // Option set restricted to `subset`, keeping declaration order.
  OptionSet restricted(std::span<const OptionIndex> subset) const;

  friend bool operator==(const OptionSet& a, const OptionSet& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, OptionIndex> index_;
};

// Validates a subset against a universe of size n: non-empty, in range, no
// duplicates. Returns a membership mask.
std::vector<bool> subset_mask(std::span<const OptionIndex> subset,
                              std::size_t n);

// Complement of `subset` in {0..n-1}, ascending.
Subset complement(std::span<const OptionIndex> subset, std::size_t n);

}  // namespace llull
