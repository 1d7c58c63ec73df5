#pragma once

#include <string>
#include <utility>
#include <vector>

namespace llull {

struct Finding {
  std::string check;
  std::string detail;
};

// Outcome of an executable property check. `skipped` is set when the
// hypothesis of the property does not hold, in which case nothing is
// asserted.
struct CheckReport {
  std::vector<std::string> checked;
  std::vector<Finding> violations;
  std::vector<Finding> notes;
  bool skipped = false;

  bool ok() const { return violations.empty(); }
  void fail(std::string check, std::string detail) {
    violations.push_back({std::move(check), std::move(detail)});
  }
  void note(std::string check, std::string detail) {
    notes.push_back({std::move(check), std::move(detail)});
  }
};

}  // namespace llull
