#include "llull/options.hpp"

#include <algorithm>

#include "llull/error.hpp"

namespace llull {

OptionSet::OptionSet(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(Errc::kEmptyProfile, "option set must not be empty");
  }
  for (OptionIndex i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw Error(Errc::kInvalidArgument, "empty option label");
    }
    if (!index_.emplace(labels_[i], i).second) {
      throw Error(Errc::kInvalidArgument,
                  "duplicate option label '" + labels_[i] + "'");
    }
  }
}

std::optional<OptionIndex> OptionSet::find(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OptionIndex OptionSet::index_of(const std::string& label) const {
  auto idx = find(label);
  if (!idx) throw Error(Errc::kUnknownOption, "unknown option '" + label + "'");
  return *idx;
}

std::vector<std::string> OptionSet::labels_of(
    std::span<const OptionIndex> subset) const {
  std::vector<std::string> out;
  out.reserve(subset.size());
  for (OptionIndex i : subset) out.push_back(label(i));
  return out;
}

Subset OptionSet::indices_of(std::span<const std::string> labels) const {
  Subset out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return out;
}

OptionSet OptionSet::restricted(std::span<const OptionIndex> subset) const {
  auto mask = subset_mask(subset, size());
  std::vector<std::string> kept;
  for (OptionIndex i = 0; i < size(); ++i) {
    if (mask[i]) kept.push_back(labels_[i]);
  }
  return OptionSet(std::move(kept));
}

std::vector<bool> subset_mask(std::span<const OptionIndex> subset,
                              std::size_t n) {
  if (subset.empty()) throw Error(Errc::kEmptySubset, "subset is empty");
  std::vector<bool> mask(n, false);
  for (OptionIndex i : subset) {
    if (i >= n) {
      throw Error(Errc::kInvalidArgument,
                  "subset index " + std::to_string(i) + " out of range");
    }
    if (mask[i]) {
      throw Error(Errc::kInvalidArgument,
                  "duplicate index " + std::to_string(i) + " in subset");
    }
    mask[i] = true;
  }
  return mask;
}

Subset complement(std::span<const OptionIndex> subset, std::size_t n) {
  std::vector<bool> mask(n, false);
  for (OptionIndex i : subset) {
    if (i < n) mask[i] = true;
  }
  Subset out;
  for (OptionIndex i = 0; i < n; ++i) {
    if (!mask[i]) out.push_back(i);
  }
  return out;
}

}  // namespace llull
