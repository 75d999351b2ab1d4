#include "sectorial/error.hpp"

namespace sectorial {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::SingularResolvent: return "SingularResolvent";
    case Errc::NotSectorial: return "NotSectorial";
    case Errc::IllConditionedEigenbasis: return "IllConditionedEigenbasis";
    case Errc::PoleHit: return "PoleHit";
    case Errc::MissingDecay: return "MissingDecay";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::CommutantViolation: return "CommutantViolation";
    case Errc::NonCommuting: return "NonCommuting";
    case Errc::TailTooLarge: return "TailTooLarge";
    case Errc::AngleSumExceeded: return "AngleSumExceeded";
    case Errc::SumSingular: return "SumSingular";
    case Errc::AngleExceeded: return "AngleExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::UnsupportedNorm: return "UnsupportedNorm";
  }
  return "Unknown";
}

}  // namespace sectorial
