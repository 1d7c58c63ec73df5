#include "llull/error.hpp"

namespace llull {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kSyntaxError: return "SyntaxError";
    case Errc::kUnknownOption: return "UnknownOption";
    case Errc::kEmptyProfile: return "EmptyProfile";
    case Errc::kEmptySubset: return "EmptySubset";
    case Errc::kNotAutonomous: return "NotAutonomous";
    case Errc::kBadRepresentative: return "BadRepresentative";
    case Errc::kInvalidMatrix: return "InvalidMatrix";
    case Errc::kZeroTurnout: return "ZeroTurnout";
    case Errc::kZeroOpposingScore: return "ZeroOpposingScore";
    case Errc::kSingleOption: return "SingleOption";
    case Errc::kNotAPermutation: return "NotAPermutation";
    case Errc::kTieGroupTooLarge: return "TieGroupTooLarge";
    case Errc::kNotClc: return "NotCLC";
    case Errc::kNonPositiveStrength: return "NonPositiveStrength";
    case Errc::kNotIrreducible: return "NotIrreducible";
    case Errc::kMaxIterExceeded: return "MaxIterExceeded";
    case Errc::kNoTopDominantComponent: return "NoTopDominantComponent";
    case Errc::kProjectionPostconditionViolated:
      return "ProjectionPostconditionViolated";
    case Errc::kPowerIterationDiverged: return "PowerIterationDiverged";
    case Errc::kHypothesisNotSatisfied: return "HypothesisNotSatisfied";
    case Errc::kNotAnImprovement: return "NotAnImprovement";
    case Errc::kSupportHypothesisFailed: return "SupportHypothesisFailed";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kInternalError: return "InternalError";
  }
  return "Unknown";
}

}  // namespace llull
